#ifndef ZLPCM_SUMMARY_HPP
#define ZLPCM_SUMMARY_HPP

#include <string>
#include <vector>

#include "netdata.hpp"
#include "partition.hpp"
#include "sampler.hpp"

namespace zlpcm {

// Variation of information between two partitions of the same node set, in
// nats. A metric on canonical partitions; 0 iff they are equal.
double vi_distance(const Partition& a, const Partition& b);

// Mean VI from ref to the post-burn-in sampled partitions.
double mean_vi(const ChainTrace& trace, const Partition& ref);

struct FitSummary {
  int n = 0, d = 0;
  bool directed = true;
  Partition z_hat;
  int K_hat = 0;
  int K_mode = 0;        // most frequent sampled group count
  double beta_hat = 0.0;
  double mean_vi_to_zhat = 0.0;
  std::vector<double> U_hat;       // n x d, representative positions
  std::vector<double> nu_hat;      // n x n posterior means
  std::vector<double> dist_hat;
  std::vector<double> p_hat;
  std::vector<double> lambda_hat;
  std::vector<double> P_hat;       // K_hat x K_hat, block means given z_hat
};

// Posterior point estimates from one chain: partition minimizing the mean VI
// to the sampled partitions (searched over the unique sampled partitions plus
// one greedy single-move refinement pass), representative positions at the
// best-scoring stored snapshot, and elementwise posterior means.
FitSummary summarize(const ChainTrace& trace);

// (1 - exp(-lambda_hat)) * nu_hat at the zero-weight entries, 0 elsewhere:
// the posterior probability that a zero hides a nonzero-rate tie.
std::vector<double> prob_nonzero_given_zero(const FitSummary& fit,
                                            const WeightedNetwork& data);

struct RocPoint {
  double fpr = 0.0, tpr = 0.0, threshold = 0.0;
};

// ROC of score against binary labels, thresholds descending; includes the
// (0,0) and (1,1) endpoints.
std::vector<RocPoint> roc_curve(const std::vector<double>& score,
                                const std::vector<int>& label);

// Trapezoidal area under roc_curve.
double roc_auc(const std::vector<double>& score, const std::vector<int>& label);

// Linear-interpolation quantile of a sample (R type 7), q in [0,1].
double quantile(std::vector<double> x, double q);

double mean(const std::vector<double>& x);
double sample_sd(const std::vector<double>& x);

void write_summary(const std::string& path, const FitSummary& fit);
FitSummary load_summary(const std::string& path);

}  // namespace zlpcm

#endif
