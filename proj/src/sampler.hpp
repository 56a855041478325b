#ifndef ZLPCM_SAMPLER_HPP
#define ZLPCM_SAMPLER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logmath.hpp"
#include "mfm.hpp"
#include "model.hpp"
#include "netdata.hpp"
#include "rng.hpp"

namespace zlpcm {

struct SamplerConfig {
  int iterations = 12000;
  int burn_in = 2000;
  std::uint64_t seed = 1;
  bool supervised = false;
  int adapt_until = -1;  // < 0: adapt through burn-in, then freeze
  int thin = 10;         // stride for U snapshots
  bool store_U = true;

  enum class PositionInit { GeodesicMds, Random };
  enum class PartitionInit { Singletons, KMeans };
  PositionInit position_init = PositionInit::GeodesicMds;
  PartitionInit partition_init = PartitionInit::Singletons;
  int kmeans_k = 25;

  void validate() const;
};

struct AcceptanceCounters {
  long long beta_acc = 0, beta_prop = 0;
  long long u_acc = 0, u_prop = 0;
  long long eject_acc = 0, eject_prop = 0, eject_abandoned = 0;
  long long absorb_acc = 0, absorb_prop = 0;
};

struct ChainTrace {
  std::uint64_t seed = 0;
  int n = 0, d = 0;
  bool directed = true;
  bool supervised = false;
  Hyperparameters hyper;
  SamplerConfig config;
  std::string data_hash;

  // per-iteration scalars (every iteration)
  std::vector<double> beta;
  std::vector<int> K;
  std::vector<double> loglik;
  std::vector<Partition> z;
  std::vector<std::vector<double>> P;  // K_t x K_t, flattened

  // post-burn-in elementwise running sums over n x n pairs
  std::vector<double> nu_sum, dist_sum, p_sum, lambda_sum;
  long long post_count = 0;

  // thinned U snapshots with their iteration index
  std::vector<int> u_iters;
  std::vector<std::vector<double>> u_snaps;

  AcceptanceCounters accept;
};

// Sufficient statistics of one cluster for the collapsed position marginal.
struct GroupStats {
  int n = 0;
  std::vector<double> sum_u;
  double sum_sq = 0.0;
};

// Partially collapsed Metropolis-within-Gibbs sampler. One instance is one
// logical chain; not thread-safe, run chains in parallel via separate
// instances.
//
// The tokens returned by step_nu/step_z/step_tae encode the two ordering
// constraints of the kernel: X must be sampled after nu, and P after both the
// z scan and the TAE move. They cannot be constructed outside the class, so a
// misordered sweep does not compile.
class Sampler {
 public:
  Sampler(WeightedNetwork data, std::optional<NodeAttributes> attrs,
          Hyperparameters hyper, SamplerConfig config);

  class NuToken {
    friend class Sampler;
    NuToken() = default;
  };
  class ZToken {
    friend class Sampler;
    ZToken() = default;
  };

  NuToken step_nu();
  void step_X(NuToken);
  bool step_beta();
  int step_U();  // returns number of accepted node moves
  ZToken step_z();
  ZToken step_tae(ZToken);
  void step_P(ZToken);

  // One full iteration in the fixed order nu, X, beta, U, z, TAE, P.
  void sweep();

  ChainTrace run();

  const LatentState& state() const { return state_; }
  const WeightedNetwork& data() const { return data_; }
  const AcceptanceCounters& counters() const { return counters_; }
  const Hyperparameters& hyper() const { return hyper_; }

  // Replace likelihood factors in the z scan and the TAE move by constants so
  // the pair targets the partition prior alone (validation harness).
  void set_flat_likelihood(bool flat) { flat_ = flat; }

  // Draw (beta, U, z, P) from the prior and then data from the model;
  // successive-conditional validation entry points.
  void prior_draw();
  void regenerate_data();

  double complete_loglik() const;

  // Overwrite the full latent state (rebuilds caches); used by tests.
  void set_state(const LatentState& s);

  // Proposal adaptation applied every window iterations while t <= adapt_until.
  static double adapt_log_step(long long window_index);

  static std::vector<double> init_positions_mds(const WeightedNetwork& data, int d);
  static Partition init_partition_kmeans(const std::vector<double>& U, int n, int d,
                                         int k, RngStream& rng);

  // Solve 2 Gamma(2a)Gamma(a+n_g) / (Gamma(a)Gamma(2a+n_g)) = p0 for a.
  struct TaeA {
    double a;
    double p0_actual;  // evaluated at the returned a (differs when clamped)
    bool degenerate;
  };
  static TaeA solve_tae_a(int n_g, double p0);

 private:
  void init_state();
  void rebuild_caches();
  void rebuild_block_nu();
  void canonicalize_labels();
  double log_f_nu_current(const Partition& z) const;
  double group_term(const GroupStats& g) const;
  void record(ChainTrace& trace, int t);
  void adapt(int t);
  double lb(long long nu, long long cnt) const;  // log Beta block term, 0 at (0,0)

  WeightedNetwork data_;
  std::optional<NodeAttributes> attrs_;
  Hyperparameters hyper_;
  SamplerConfig config_;
  MfmWeightTable table_;
  LatentState state_;
  bool flat_ = false;

  int n_ = 0, d_ = 0;
  bool directed_ = true;

  // caches
  std::vector<double> D_;   // n x n distances
  std::vector<double> E_;   // n x n exp(-distance)
  double SE_ = 0.0;         // sum over i<j of exp(-d_ij)
  long long Sx_ = 0;        // sum of X over the pair set
  std::vector<GroupStats> groups_;
  std::vector<int> attr_counts_;     // K x C per-group attribute level counts
  std::vector<long long> block_nu_;  // K x K (upper triangle pooled if undirected)
  mutable std::vector<double> lfact_;  // log x! cache
  ShiftedLgammaTable lg_b1_, lg_b2_, lg_b12_;
  std::vector<double> lg_u_;  // lgamma(alpha1 + d*m/2) for m = 0..n
  double log_beta0_ = 0.0;    // log B(beta1, beta2)

  std::vector<TaeA> tae_a_;  // memo by group size

  // rng substreams
  RngStream rng_init_, rng_nu_, rng_x_, rng_beta_, rng_u_, rng_z_, rng_tae_, rng_p_;

  AcceptanceCounters counters_;
  long long window_beta_acc_ = 0, window_beta_prop_ = 0;
  long long window_u_acc_ = 0, window_u_prop_ = 0;
};

// Convenience wrapper: construct, run, return the trace.
ChainTrace run_chain(const WeightedNetwork& data, const std::optional<NodeAttributes>& attrs,
                     const Hyperparameters& hyper, const SamplerConfig& config);

std::string data_hash(const WeightedNetwork& data);

void save_trace(const std::string& path, const ChainTrace& trace);
ChainTrace load_trace(const std::string& path);

}  // namespace zlpcm

#endif
