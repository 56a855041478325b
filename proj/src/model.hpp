#ifndef ZLPCM_MODEL_HPP
#define ZLPCM_MODEL_HPP

#include <optional>
#include <vector>

#include "mfm.hpp"
#include "netdata.hpp"
#include "partition.hpp"

namespace zlpcm {

struct Hyperparameters {
  int d = 3;                 // latent dimension
  double alpha = 3.0;        // MFM Dirichlet concentration
  double alpha1 = 1.0;       // precision prior shape
  double alpha2 = 0.103;     // precision prior: tau ~ Gamma(alpha1, alpha2/2)
  double omega = 0.01;       // mean prior precision scale
  double beta1 = 1.0;        // unusual-zero probability prior Beta(beta1, beta2)
  double beta2 = 9.0;
  std::vector<double> cohesion;  // omega_c per attribute level; filled on load
  double sigma2_beta = 0.25;     // MH proposal variances (adapted)
  double sigma2_U = 0.25;
  double p_eject = 0.5;      // P(eject^T)
  double p0 = 0.02;          // empty-split abandonment target of the TAE move
  double beta_lo = -30.0;    // uniform prior interval for the intercept
  double beta_hi = 30.0;

  void validate() const;  // throws DataError on an invalid combination
};

struct LatentState {
  double beta = 0.0;
  std::vector<double> U;       // n x d row-major
  Partition z;                 // canonical
  int K = 0;
  std::vector<unsigned char> nu;  // n x n, nu_ij = 0 wherever y_ij > 0
  std::vector<long long> X;       // n x n imputed matrix, X = Y wherever nu = 0
  std::vector<double> P;          // K x K unusual-zero probabilities
};

// log pmf of the zero-inflated Poisson at a single entry.
double zip_log_pmf(long long y, double lambda, double p);

// log lambda_ij = beta - ||u_i - u_j||.
double log_lambda(double beta, const double* u_i, const double* u_j, int d);

// log f(X | beta, U): Poisson terms over ordered pairs (directed) or
// unordered pairs (undirected).
double log_f_X_given_beta_U(const std::vector<long long>& X, int n, bool directed,
                            double beta, const std::vector<double>& U, int d);

// log f(nu | P, z): Bernoulli product over pairs with block probabilities.
double log_f_nu_given_P_z(const std::vector<unsigned char>& nu, int n, bool directed,
                          const std::vector<double>& P, const Partition& z);

// log f(U | z): precision/mean-collapsed Gaussian mixture marginal.
double log_f_U_given_z(const std::vector<double>& U, const Partition& z,
                       const Hyperparameters& hyper);

// Per-group term of log f(U | z) from sufficient statistics: group size,
// position sum vector and sum of squared norms.
double log_f_U_group_term(int n_k, const double* sum_u, double sum_sq, int d,
                          const Hyperparameters& hyper);

// log f(nu | z): Beta-collapsed Bernoulli blocks. For undirected networks the
// off-diagonal blocks (g,h) and (h,g) are pooled into a single Beta term.
double log_f_nu_given_z(const std::vector<unsigned char>& nu, int n, bool directed,
                        const Partition& z, const Hyperparameters& hyper);

// Complete log likelihood f(X|beta,U) f(nu|P,z) f(U|z) f(z|c); unsupervised
// when attrs is absent.
double complete_log_likelihood(const LatentState& state, const WeightedNetwork& data,
                               const std::optional<NodeAttributes>& attrs,
                               const Hyperparameters& hyper, const MfmWeightTable& table);

// P(nu_ij = 1 | y_ij = 0, ...).
double conditional_prob_unusual_zero(double p, double beta, const double* u_i,
                                     const double* u_j, int d);

}  // namespace zlpcm

#endif
