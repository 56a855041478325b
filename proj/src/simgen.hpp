#ifndef ZLPCM_SIMGEN_HPP
#define ZLPCM_SIMGEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "netdata.hpp"
#include "partition.hpp"

namespace zlpcm {

struct GroundTruth {
  Partition z_star;
  std::vector<double> U_star;       // n x d (empty for SBM truths)
  double beta_star = 0.0;           // LPCM only
  std::vector<double> P_star;       // K x K
  std::vector<double> lambda_star;  // K x K, SBM only
  std::vector<unsigned char> nu_star;  // n x n realized indicators
  std::vector<double> mu_star;      // K x d
  std::vector<double> tau_star;     // K
  int d = 0;
  bool is_sbm = false;
};

struct LpcmSpec {
  std::vector<int> group_sizes;
  int d = 3;
  double beta = 3.0;
  std::vector<double> mu;   // K x d
  std::vector<double> tau;  // K
  std::vector<double> P;    // K x K; empty means Poisson (no unusual zeros)
  bool directed = true;
};

struct SbmSpec {
  std::vector<int> group_sizes;
  std::vector<double> lambda;  // K x K
  std::vector<double> P;       // K x K
  bool directed = true;
};

struct SimResult {
  WeightedNetwork network;
  GroundTruth truth;
};

SimResult simulate_zip_lpcm(const LpcmSpec& spec, std::uint64_t seed);
SimResult simulate_pois_lpcm(LpcmSpec spec, std::uint64_t seed);  // ignores spec.P
SimResult simulate_zip_sbm(const SbmSpec& spec, std::uint64_t seed);

// Copy z_star and reassign m uniformly chosen nodes to uniformly chosen
// different existing levels.
std::vector<int> contaminate(const Partition& z_star, int m, std::uint64_t seed);

// Named presets of the built-in study settings. Throws DataError for an
// unknown name; preset_names() lists the valid ones.
struct Preset {
  std::string name;
  bool is_sbm = false;
  LpcmSpec lpcm;
  SbmSpec sbm;
  int contaminate_m = 0;  // nodes to contaminate when deriving attributes
};
Preset get_preset(const std::string& name);
std::vector<std::string> preset_names();

SimResult simulate_preset(const Preset& preset, std::uint64_t seed);

// Ground-truth JSON sidecar.
void write_truth(const std::string& path, const GroundTruth& truth);
GroundTruth load_truth(const std::string& path);

}  // namespace zlpcm

#endif
