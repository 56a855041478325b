#ifndef ZLPCM_LOGMATH_HPP
#define ZLPCM_LOGMATH_HPP

#include <cmath>
#include <limits>
#include <vector>

namespace zlpcm {

// Sentinel for log(0); propagates safely through additions below.
constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline bool is_log_zero(double x) { return x == kLogZero; }

inline double log_add(double a, double b) {
  if (is_log_zero(a)) return b;
  if (is_log_zero(b)) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// log(sum(exp(x))) over a vector, kLogZero for an empty or all-zero input.
inline double log_sum_exp(const std::vector<double>& x) {
  double m = kLogZero;
  for (double v : x)
    if (v > m) m = v;
  if (is_log_zero(m)) return kLogZero;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// lgamma(m + shift) cached over integer m; the block-count sums hit the same
// shifted integers millions of times per chain.
class ShiftedLgammaTable {
 public:
  ShiftedLgammaTable() = default;
  ShiftedLgammaTable(double shift, std::size_t max_m) : shift_(shift) {
    tab_.resize(max_m + 1);
    for (std::size_t m = 0; m <= max_m; ++m) tab_[m] = std::lgamma(m + shift_);
  }
  double operator()(std::size_t m) const {
    if (m < tab_.size()) return tab_[m];
    return std::lgamma(static_cast<double>(m) + shift_);
  }

 private:
  double shift_ = 0.0;
  std::vector<double> tab_;
};

}  // namespace zlpcm

#endif
