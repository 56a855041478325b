#ifndef ZLPCM_RNG_HPP
#define ZLPCM_RNG_HPP

#include <cstdint>
#include <random>

namespace zlpcm {

// Fixed substream ids, one per sampler step type. A reordering bug therefore
// changes the random stream consumed by every later step and shows up in the
// determinism tests.
enum class Stream : std::uint64_t {
  Init = 1,
  Nu = 2,
  X = 3,
  Beta = 4,
  U = 5,
  Z = 6,
  Tae = 7,
  P = 8,
  Generator = 9,
  Kmeans = 10,
  Contaminate = 11,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One mt19937_64 per (seed, stream) pair.
class RngStream {
 public:
  RngStream(std::uint64_t seed, Stream stream)
      : eng_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)))) {}

  std::mt19937_64& engine() { return eng_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
  double normal(double mean, double sd) {
    return std::normal_distribution<double>(mean, sd)(eng_);
  }
  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(eng_);
  }
  double beta(double a, double b) {
    double x = gamma(a, 1.0);
    double y = gamma(b, 1.0);
    return x / (x + y);
  }
  long long poisson(double rate) {
    return std::poisson_distribution<long long>(rate)(eng_);
  }
  bool bernoulli(double p) { return uniform() < p; }
  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace zlpcm

#endif
