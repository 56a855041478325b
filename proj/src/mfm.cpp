#include "mfm.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "logmath.hpp"

namespace zlpcm {

MfmWeightTable::MfmWeightTable(double alpha, double tol)
    : alpha_(alpha), tol_(tol), mu_(std::make_unique<std::mutex>()) {
  if (alpha <= 0.0) throw std::invalid_argument("MfmWeightTable: alpha must be > 0");
}

// W_{N,K} = sum_{k>=K} k_(K) / (k alpha)^(N) * pi(k), with pi the
// zero-truncated Poisson(1) pmf. Terms below k = K vanish, so the series
// starts there; it is summed in log domain until the relative increment of a
// term falls under tol, with at least N+K terms taken.
double MfmWeightTable::compute(int n, int k) const {
  if (n == 1 && k == 1) return -std::log(alpha_);  // the series telescopes to 1/alpha
  const double log_trunc = std::log1p(-std::exp(-1.0));  // log(1 - e^{-1})
  double acc = kLogZero;
  const int min_terms = n + k;
  for (int t = 0;; ++t) {
    const int kk = k + t;
    // log [ k_(K) / (k alpha)^(N) * pi(k) ]; the lgamma(kk+1) of the
    // descending factorial cancels against the k! of the Poisson pmf.
    const double log_term = -std::lgamma(static_cast<double>(kk - k + 1)) -
                            (std::lgamma(kk * alpha_ + n) - std::lgamma(kk * alpha_)) -
                            1.0 - log_trunc;
    const double next = log_add(acc, log_term);
    if (t >= min_terms && next - acc < tol_) {
      acc = next;
      break;
    }
    acc = next;
  }
  return acc;
}

double MfmWeightTable::log_weight(int n, int k) const {
  if (k < 1 || k > n) throw std::invalid_argument("MfmWeightTable: need 1 <= K <= N");
  std::lock_guard<std::mutex> lock(*mu_);
  auto key = std::make_pair(n, k);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  double v = compute(n, k);
  cache_.emplace(key, v);
  return v;
}

void MfmWeightTable::dump_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "N,K,log_w\n";
  std::lock_guard<std::mutex> lock(*mu_);
  out.precision(17);
  for (const auto& [key, v] : cache_) out << key.first << "," << key.second << "," << v << "\n";
}

MfmWeightTable MfmWeightTable::load_csv(const std::string& path, double alpha) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  MfmWeightTable table(alpha);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    std::getline(ss, tok, ',');
    int n = std::stoi(tok);
    std::getline(ss, tok, ',');
    int k = std::stoi(tok);
    std::getline(ss, tok, ',');
    double v = std::stod(tok);
    table.cache_.emplace(std::make_pair(n, k), v);
  }
  return table;
}

double log_partition_pmf(const Partition& z, const MfmWeightTable& table) {
  if (!is_canonical(z)) throw std::invalid_argument("log_partition_pmf: z not canonical");
  const int n = static_cast<int>(z.size());
  const int k = num_groups(z);
  const double alpha = table.alpha();
  double acc = table.log_weight(n, k);
  for (int ng : group_sizes(z))
    acc += std::lgamma(alpha + ng) - std::lgamma(alpha);
  return acc;
}

double log_cohesion(const std::vector<int>& counts, const std::vector<double>& omega) {
  double omega0 = 0.0;
  int ng = 0;
  double acc = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    omega0 += omega[c];
    ng += counts[c];
    acc += std::lgamma(counts[c] + omega[c]) - std::lgamma(omega[c]);
  }
  acc += std::lgamma(omega0) - std::lgamma(ng + omega0);
  return acc;
}

double log_supervised_partition_pmf(const Partition& z, const std::vector<int>& c,
                                    const std::vector<double>& omega,
                                    const MfmWeightTable& table) {
  if (z.size() != c.size())
    throw std::invalid_argument("log_supervised_partition_pmf: length mismatch");
  const int k = num_groups(z);
  const int levels = static_cast<int>(omega.size());
  double acc = log_partition_pmf(z, table);
  for (int g = 1; g <= k; ++g) {
    std::vector<int> counts(levels, 0);
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i] == g) ++counts[c[i] - 1];
    acc += log_cohesion(counts, omega);
  }
  return acc;
}

std::vector<double> urn_weights(const Partition& z_minus, const MfmWeightTable& table,
                                const std::optional<UrnAttrs>& attrs) {
  const int n_minus = static_cast<int>(z_minus.size());
  const int k_minus = num_groups(z_minus);
  const double alpha = table.alpha();
  std::vector<int> sizes = group_sizes(z_minus);
  std::vector<double> w(k_minus + 1);
  for (int g = 0; g < k_minus; ++g) w[g] = sizes[g] + alpha;
  w[k_minus] = alpha * std::exp(table.log_weight(n_minus + 1, k_minus + 1) -
                                table.log_weight(n_minus + 1, k_minus));
  if (attrs) {
    const auto& a = *attrs;
    double omega0 = 0.0;
    for (double o : *a.omega) omega0 += o;
    const double omega_ci = (*a.omega)[a.c_i - 1];
    std::vector<int> level_counts(k_minus, 0);
    for (std::size_t i = 0; i < z_minus.size(); ++i)
      if ((*a.c)[i] == a.c_i) ++level_counts[z_minus[i] - 1];
    for (int g = 0; g < k_minus; ++g)
      w[g] *= (level_counts[g] + omega_ci) / (sizes[g] + omega0);
    w[k_minus] *= omega_ci / omega0;
  }
  return w;
}

}  // namespace zlpcm
