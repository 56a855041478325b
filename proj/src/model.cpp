#include "model.hpp"

#include <cmath>

#include "logmath.hpp"

namespace zlpcm {

void Hyperparameters::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0)) throw DataError(std::string(name) + " must be > 0");
  };
  if (d < 1) throw DataError("latent dimension d must be >= 1");
  pos(alpha, "alpha");
  pos(alpha1, "alpha1");
  pos(alpha2, "alpha2");
  pos(omega, "omega");
  pos(beta1, "beta1");
  pos(beta2, "beta2");
  pos(sigma2_beta, "sigma2_beta");
  pos(sigma2_U, "sigma2_U");
  for (double oc : cohesion) pos(oc, "cohesion");
  if (!(p_eject > 0.0 && p_eject < 1.0)) throw DataError("p_eject must be in (0,1)");
  if (!(p0 > 0.0 && p0 < 1.0)) throw DataError("p0 must be in (0,1)");
  if (!(beta_lo < beta_hi)) throw DataError("beta prior interval must have lo < hi");
}

double zip_log_pmf(long long y, double lambda, double p) {
  if (y == 0) {
    if (p >= 1.0) return 0.0;
    // log(p + (1-p) e^{-lambda})
    const double log_pois0 = -lambda;
    if (p == 0.0) return log_pois0;
    return log_add(std::log(p), std::log1p(-p) + log_pois0);
  }
  if (p >= 1.0) return kLogZero;
  return std::log1p(-p) + y * std::log(lambda) - lambda - std::lgamma(y + 1.0);
}

double log_lambda(double beta, const double* u_i, const double* u_j, int d) {
  double s = 0.0;
  for (int a = 0; a < d; ++a) {
    const double diff = u_i[a] - u_j[a];
    s += diff * diff;
  }
  return beta - std::sqrt(s);
}

double log_f_X_given_beta_U(const std::vector<long long>& X, int n, bool directed,
                            double beta, const std::vector<double>& U, int d) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double ll = log_lambda(beta, &U[static_cast<std::size_t>(i) * d],
                                   &U[static_cast<std::size_t>(j) * d], d);
      const double lam = std::exp(ll);
      auto term = [&](long long x) { return x * ll - lam - std::lgamma(x + 1.0); };
      acc += term(X[static_cast<std::size_t>(i) * n + j]);
      if (directed) acc += term(X[static_cast<std::size_t>(j) * n + i]);
    }
  }
  return acc;
}

double log_f_nu_given_P_z(const std::vector<unsigned char>& nu, int n, bool directed,
                          const std::vector<double>& P, const Partition& z) {
  const int K = num_groups(z);
  double acc = 0.0;
  auto term = [&](int i, int j) {
    const double p = P[static_cast<std::size_t>(z[i] - 1) * K + (z[j] - 1)];
    if (nu[static_cast<std::size_t>(i) * n + j]) {
      if (p <= 0.0) {
        acc = kLogZero;
        return;
      }
      acc += std::log(p);
    } else {
      if (p >= 1.0) {
        acc = kLogZero;
        return;
      }
      acc += std::log1p(-p);
    }
  };
  for (int i = 0; i < n && !is_log_zero(acc); ++i)
    for (int j = (directed ? 0 : i + 1); j < n; ++j) {
      if (i == j) continue;
      term(i, j);
      if (is_log_zero(acc)) break;
    }
  return acc;
}

double log_f_U_group_term(int n_k, const double* sum_u, double sum_sq, int d,
                          const Hyperparameters& hyper) {
  double norm_sq = 0.0;
  for (int a = 0; a < d; ++a) norm_sq += sum_u[a] * sum_u[a];
  const double bracket = hyper.alpha2 - norm_sq / (n_k + hyper.omega) + sum_sq;
  const double half_dn = 0.5 * d * n_k;
  return hyper.alpha1 * std::log(hyper.alpha2) - std::lgamma(hyper.alpha1) +
         std::lgamma(hyper.alpha1 + half_dn) - half_dn * std::log(M_PI) +
         0.5 * d * (std::log(hyper.omega) - std::log(hyper.omega + n_k)) -
         (half_dn + hyper.alpha1) * std::log(bracket);
}

double log_f_U_given_z(const std::vector<double>& U, const Partition& z,
                       const Hyperparameters& hyper) {
  const int n = static_cast<int>(z.size());
  const int d = hyper.d;
  const int K = num_groups(z);
  double acc = 0.0;
  std::vector<double> sum_u(d);
  for (int g = 1; g <= K; ++g) {
    std::fill(sum_u.begin(), sum_u.end(), 0.0);
    double sum_sq = 0.0;
    int n_k = 0;
    for (int i = 0; i < n; ++i) {
      if (z[i] != g) continue;
      ++n_k;
      const double* u = &U[static_cast<std::size_t>(i) * d];
      for (int a = 0; a < d; ++a) {
        sum_u[a] += u[a];
        sum_sq += u[a] * u[a];
      }
    }
    acc += log_f_U_group_term(n_k, sum_u.data(), sum_sq, d, hyper);
  }
  return acc;
}

namespace {

// Block-pair counts and nu sums; off-diagonal blocks pooled for undirected
// networks.
struct BlockSums {
  int K;
  std::vector<long long> count;
  std::vector<long long> nu_sum;
};

BlockSums block_sums(const std::vector<unsigned char>& nu, int n, bool directed,
                     const Partition& z) {
  const int K = num_groups(z);
  BlockSums b{K, std::vector<long long>(static_cast<std::size_t>(K) * K, 0),
              std::vector<long long>(static_cast<std::size_t>(K) * K, 0)};
  for (int i = 0; i < n; ++i)
    for (int j = (directed ? 0 : i + 1); j < n; ++j) {
      if (i == j) continue;
      int g = z[i] - 1, h = z[j] - 1;
      if (!directed && g > h) std::swap(g, h);
      const std::size_t idx = static_cast<std::size_t>(g) * K + h;
      ++b.count[idx];
      b.nu_sum[idx] += nu[static_cast<std::size_t>(i) * n + j];
    }
  return b;
}

}  // namespace

double log_f_nu_given_z(const std::vector<unsigned char>& nu, int n, bool directed,
                        const Partition& z, const Hyperparameters& hyper) {
  const BlockSums b = block_sums(nu, n, directed, z);
  const double lb0 = log_beta(hyper.beta1, hyper.beta2);
  double acc = 0.0;
  for (int g = 0; g < b.K; ++g)
    for (int h = (directed ? 0 : g); h < b.K; ++h) {
      const std::size_t idx = static_cast<std::size_t>(g) * b.K + h;
      if (b.count[idx] == 0) continue;
      acc += log_beta(b.nu_sum[idx] + hyper.beta1,
                      b.count[idx] - b.nu_sum[idx] + hyper.beta2) -
             lb0;
    }
  return acc;
}

double complete_log_likelihood(const LatentState& state, const WeightedNetwork& data,
                               const std::optional<NodeAttributes>& attrs,
                               const Hyperparameters& hyper, const MfmWeightTable& table) {
  double acc = log_f_X_given_beta_U(state.X, data.n, data.directed, state.beta, state.U,
                                    hyper.d);
  acc += log_f_nu_given_P_z(state.nu, data.n, data.directed, state.P, state.z);
  acc += log_f_U_given_z(state.U, state.z, hyper);
  if (attrs)
    acc += log_supervised_partition_pmf(state.z, attrs->c, hyper.cohesion, table);
  else
    acc += log_partition_pmf(state.z, table);
  return acc;
}

double conditional_prob_unusual_zero(double p, double beta, const double* u_i,
                                     const double* u_j, int d) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double lam = std::exp(log_lambda(beta, u_i, u_j, d));
  return p / (p + (1.0 - p) * std::exp(-lam));
}

}  // namespace zlpcm
