#ifndef ZLPCM_MFM_HPP
#define ZLPCM_MFM_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "partition.hpp"

namespace zlpcm {

// Cached log W_{N,K} coefficients of the mixture-of-finite-mixtures partition
// prior, with the number of components integrated against a zero-truncated
// Poisson(1) prior. Immutable after warm-up; lazy fills are mutex-guarded.
class MfmWeightTable {
 public:
  explicit MfmWeightTable(double alpha, double tol = 1e-12);

  double alpha() const { return alpha_; }

  // log W_{N,K}, 1 <= K <= N.
  double log_weight(int n, int k) const;

  // CSV dump/load (N,K,log_w) for reproducibility audits.
  void dump_csv(const std::string& path) const;
  static MfmWeightTable load_csv(const std::string& path, double alpha);

 private:
  double compute(int n, int k) const;

  double alpha_;
  double tol_;
  std::unique_ptr<std::mutex> mu_;
  mutable std::map<std::pair<int, int>, double> cache_;
};

// log f(z) of the MFM partition pmf: log W_{N,K} + sum_g log alpha^{(n_g)}.
double log_partition_pmf(const Partition& z, const MfmWeightTable& table);

// Dirichlet-multinomial cohesion log P(c_g) from per-level counts in a group.
double log_cohesion(const std::vector<int>& counts, const std::vector<double>& omega);

// log f(z|c) up to its normalizing constant: partition pmf plus the cohesion
// of every group.
double log_supervised_partition_pmf(const Partition& z, const std::vector<int>& c,
                                    const std::vector<double>& omega,
                                    const MfmWeightTable& table);

// Unnormalized allocation weights for one node given the partition of the
// others: one weight per existing group plus one for a new group. When attrs
// is present the weights are supervised by the cohesion terms.
struct UrnAttrs {
  const std::vector<int>* c = nullptr;  // attributes of the remaining nodes
  int c_i = 0;                          // attribute level of the node to place
  const std::vector<double>* omega = nullptr;
};
std::vector<double> urn_weights(const Partition& z_minus, const MfmWeightTable& table,
                                const std::optional<UrnAttrs>& attrs = std::nullopt);

}  // namespace zlpcm

#endif
