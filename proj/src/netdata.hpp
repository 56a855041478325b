#ifndef ZLPCM_NETDATA_HPP
#define ZLPCM_NETDATA_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace zlpcm {

// Errors raised by loading/validation; the CLI maps these to exit code 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeightedNetwork {
  int n = 0;
  bool directed = true;
  std::vector<long long> y;  // n*n row-major, zero diagonal
  std::vector<std::string> node_labels;  // optional, size n or empty

  long long& at(int i, int j) { return y[static_cast<std::size_t>(i) * n + j]; }
  long long at(int i, int j) const { return y[static_cast<std::size_t>(i) * n + j]; }
};

struct NodeAttributes {
  std::vector<int> c;  // levels in 1..C, first-appearance coded
  int C = 0;
  std::vector<std::string> level_names;  // level_names[l-1] is the token for level l
};

// Throws DataError if any WeightedNetwork invariant is violated.
void validate_network(const WeightedNetwork& net);

enum class NetworkFormat { DenseCsv, EdgeListCsv };

WeightedNetwork load_network(const std::string& path, NetworkFormat format, bool directed);
NodeAttributes load_attributes(const std::string& path, int n);

// Dense CSV writers; integers round-trip bit-exact, reals at 17 significant
// digits.
void write_int_matrix(const std::string& path, const std::vector<long long>& m, int rows,
                      int cols);
void write_real_matrix(const std::string& path, const std::vector<double>& m, int rows,
                       int cols);
void write_network(const std::string& path, const WeightedNetwork& net);

std::vector<double> load_real_matrix(const std::string& path, int* rows, int* cols);

}  // namespace zlpcm

#endif
