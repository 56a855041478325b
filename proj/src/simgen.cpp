#include "simgen.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>

#include <nlohmann/json.hpp>

#include "rng.hpp"

namespace zlpcm {

namespace {

using nlohmann::json;

Partition expand_sizes(const std::vector<int>& sizes) {
  Partition z;
  for (std::size_t g = 0; g < sizes.size(); ++g)
    z.insert(z.end(), sizes[g], static_cast<int>(g) + 1);
  return z;
}

// Draws nu from the block probabilities and fills y with either zeros or
// Poisson weights at the given per-pair rates.
void realize_network(WeightedNetwork& net, GroundTruth& truth, const std::vector<double>& P,
                     int K, RngStream& rng,
                     const std::function<double(int, int)>& rate) {
  const int n = net.n;
  truth.nu_star.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = (net.directed ? 0 : i + 1); j < n; ++j) {
      if (i == j) continue;
      const double p =
          P.empty() ? 0.0
                    : P[static_cast<std::size_t>(truth.z_star[i] - 1) * K +
                        (truth.z_star[j] - 1)];
      const bool unusual = p > 0.0 && rng.bernoulli(p);
      long long w = 0;
      if (unusual)
        truth.nu_star[static_cast<std::size_t>(i) * n + j] = 1;
      else
        w = rng.poisson(rate(i, j));
      net.at(i, j) = w;
      if (!net.directed) {
        net.at(j, i) = w;
        truth.nu_star[static_cast<std::size_t>(j) * n + i] =
            truth.nu_star[static_cast<std::size_t>(i) * n + j];
      }
    }
  }
}

}  // namespace

SimResult simulate_zip_lpcm(const LpcmSpec& spec, std::uint64_t seed) {
  const int K = static_cast<int>(spec.group_sizes.size());
  const int n = std::accumulate(spec.group_sizes.begin(), spec.group_sizes.end(), 0);
  const int d = spec.d;
  if (static_cast<int>(spec.mu.size()) != K * d || static_cast<int>(spec.tau.size()) != K)
    throw DataError("simulate_zip_lpcm: mu/tau dimensions do not match group count");
  if (!spec.P.empty() && static_cast<int>(spec.P.size()) != K * K)
    throw DataError("simulate_zip_lpcm: P must be K x K");

  RngStream rng(seed, Stream::Generator);
  SimResult out;
  out.truth.z_star = expand_sizes(spec.group_sizes);
  out.truth.beta_star = spec.beta;
  out.truth.P_star = spec.P;
  out.truth.mu_star = spec.mu;
  out.truth.tau_star = spec.tau;
  out.truth.d = d;
  out.truth.U_star.resize(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i) {
    const int g = out.truth.z_star[i] - 1;
    const double sd = 1.0 / std::sqrt(spec.tau[g]);
    for (int a = 0; a < d; ++a)
      out.truth.U_star[static_cast<std::size_t>(i) * d + a] =
          rng.normal(spec.mu[static_cast<std::size_t>(g) * d + a], sd);
  }

  out.network.n = n;
  out.network.directed = spec.directed;
  out.network.y.assign(static_cast<std::size_t>(n) * n, 0);
  const auto& U = out.truth.U_star;
  realize_network(out.network, out.truth, spec.P, K, rng, [&](int i, int j) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const double diff = U[static_cast<std::size_t>(i) * d + a] -
                          U[static_cast<std::size_t>(j) * d + a];
      s += diff * diff;
    }
    return std::exp(spec.beta - std::sqrt(s));
  });
  validate_network(out.network);
  return out;
}

SimResult simulate_pois_lpcm(LpcmSpec spec, std::uint64_t seed) {
  spec.P.clear();
  return simulate_zip_lpcm(spec, seed);
}

SimResult simulate_zip_sbm(const SbmSpec& spec, std::uint64_t seed) {
  const int K = static_cast<int>(spec.group_sizes.size());
  const int n = std::accumulate(spec.group_sizes.begin(), spec.group_sizes.end(), 0);
  if (static_cast<int>(spec.lambda.size()) != K * K ||
      static_cast<int>(spec.P.size()) != K * K)
    throw DataError("simulate_zip_sbm: lambda and P must be K x K");
  for (double l : spec.lambda)
    if (!(l > 0.0)) throw DataError("simulate_zip_sbm: lambda entries must be > 0");

  RngStream rng(seed, Stream::Generator);
  SimResult out;
  out.truth.z_star = expand_sizes(spec.group_sizes);
  out.truth.P_star = spec.P;
  out.truth.lambda_star = spec.lambda;
  out.truth.is_sbm = true;
  out.network.n = n;
  out.network.directed = spec.directed;
  out.network.y.assign(static_cast<std::size_t>(n) * n, 0);
  const auto& z = out.truth.z_star;
  realize_network(out.network, out.truth, spec.P, K, rng, [&](int i, int j) {
    return spec.lambda[static_cast<std::size_t>(z[i] - 1) * K + (z[j] - 1)];
  });
  validate_network(out.network);
  return out;
}

std::vector<int> contaminate(const Partition& z_star, int m, std::uint64_t seed) {
  const int n = static_cast<int>(z_star.size());
  if (m > n) throw DataError("contaminate: m exceeds node count");
  const int K = num_groups(z_star);
  std::vector<int> c(z_star.begin(), z_star.end());
  RngStream rng(seed, Stream::Contaminate);
  // sample m distinct nodes
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int t = 0; t < m; ++t) {
    const int r = t + static_cast<int>(rng.below(n - t));
    std::swap(idx[t], idx[r]);
  }
  for (int t = 0; t < m; ++t) {
    const int i = idx[t];
    if (K < 2) break;  // no different level available
    int lvl = 1 + static_cast<int>(rng.below(K - 1));
    if (lvl >= z_star[i]) ++lvl;
    c[i] = lvl;
  }
  return c;
}

namespace {

// Simulation-study parameter sets. SS1's component precisions are
// (1/0.25, 1/0.5, 1/0.75, 1, 1/1.25).
LpcmSpec ss1_spec(double mu_scale, int size_scale) {
  LpcmSpec s;
  s.group_sizes = {5 * size_scale, 10 * size_scale, 15 * size_scale, 20 * size_scale,
                   25 * size_scale};
  s.d = 3;
  s.beta = 3.0;
  s.tau = {4.0, 2.0, 4.0 / 3.0, 1.0, 0.8};
  s.mu = {-1.5, -1.5, -1.5, -2, 2, 0, 2, -2, 0, 2, 2, -2, -2, -2, 2};
  for (double& v : s.mu) v *= mu_scale;
  s.P = {0.40, 0.05, 0.10, 0.05, 0.10,  //
         0.10, 0.40, 0.05, 0.10, 0.05,  //
         0.05, 0.10, 0.40, 0.05, 0.10,  //
         0.10, 0.05, 0.10, 0.40, 0.05,  //
         0.05, 0.10, 0.05, 0.10, 0.40};
  return s;
}

std::vector<double> ss2_lambda1() {
  std::vector<double> l(25, 0.5);
  const double diag[5] = {7.0, 4.5, 3.5, 2.0, 2.5};
  for (int g = 0; g < 5; ++g) l[static_cast<std::size_t>(g) * 5 + g] = diag[g];
  return l;
}

std::vector<double> ss2_lambda2() {
  std::vector<double> l = ss2_lambda1();
  for (int g = 1; g < 5; ++g) {
    l[static_cast<std::size_t>(0) * 5 + g] = 2.0;
    l[static_cast<std::size_t>(g) * 5 + 0] = 2.0;
  }
  return l;
}

std::vector<double> ss2_P2() {
  return {0.40, 0.60, 0.20, 0.60, 0.20,  //
          0.20, 0.40, 0.05, 0.10, 0.05,  //
          0.60, 0.10, 0.40, 0.05, 0.10,  //
          0.20, 0.05, 0.10, 0.40, 0.05,  //
          0.60, 0.10, 0.05, 0.10, 0.40};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"ss1-scenario1", "ss1-scenario2", "ss2-scenario1", "ss2-scenario2",
          "ss3-n150",      "ss3-n225",      "ss3-k2"};
}

Preset get_preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "ss1-scenario1") {
    p.lpcm = ss1_spec(1.0, 1);
    p.contaminate_m = 20;
  } else if (name == "ss1-scenario2") {
    p.lpcm = ss1_spec(1.0, 1);
    p.lpcm.P.clear();
    p.contaminate_m = 20;
  } else if (name == "ss2-scenario1") {
    p.is_sbm = true;
    p.sbm.group_sizes = {5, 10, 15, 20, 25};
    p.sbm.lambda = ss2_lambda1();
    p.sbm.P = ss1_spec(1.0, 1).P;
    p.contaminate_m = 20;
  } else if (name == "ss2-scenario2") {
    p.is_sbm = true;
    p.sbm.group_sizes = {5, 10, 15, 20, 25};
    p.sbm.lambda = ss2_lambda2();
    p.sbm.P = ss2_P2();
    p.contaminate_m = 20;
  } else if (name == "ss3-n150") {
    p.lpcm = ss1_spec(1.25, 2);
    p.contaminate_m = 40;
  } else if (name == "ss3-n225") {
    p.lpcm = ss1_spec(1.375, 3);
    p.contaminate_m = 60;
  } else if (name == "ss3-k2") {
    p.lpcm.group_sizes = {25, 25};
    p.lpcm.d = 3;
    p.lpcm.beta = 3.0;
    p.lpcm.mu = {2, 0, 0, -2, 0, 0};
    p.lpcm.tau = {0.75, 0.75};
    p.lpcm.P = {0.6, 0.4, 0.4, 0.6};
    p.contaminate_m = 15;
  } else {
    std::string msg = "unknown preset '" + name + "'; valid presets:";
    for (const auto& v : preset_names()) msg += " " + v;
    throw DataError(msg);
  }
  return p;
}

SimResult simulate_preset(const Preset& preset, std::uint64_t seed) {
  if (preset.is_sbm) return simulate_zip_sbm(preset.sbm, seed);
  return simulate_zip_lpcm(preset.lpcm, seed);
}

void write_truth(const std::string& path, const GroundTruth& truth) {
  json j;
  j["z_star"] = truth.z_star;
  j["beta_star"] = truth.beta_star;
  j["d"] = truth.d;
  j["is_sbm"] = truth.is_sbm;
  j["U_star"] = truth.U_star;
  j["P_star"] = truth.P_star;
  j["lambda_star"] = truth.lambda_star;
  j["mu_star"] = truth.mu_star;
  j["tau_star"] = truth.tau_star;
  j["nu_star"] = std::vector<int>(truth.nu_star.begin(), truth.nu_star.end());
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for write: " + path);
  out << j.dump(1) << "\n";
}

GroundTruth load_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("malformed truth file " + path + ": " + e.what());
  }
  GroundTruth t;
  t.z_star = j.at("z_star").get<Partition>();
  t.beta_star = j.value("beta_star", 0.0);
  t.d = j.value("d", 0);
  t.is_sbm = j.value("is_sbm", false);
  t.U_star = j.value("U_star", std::vector<double>{});
  t.P_star = j.value("P_star", std::vector<double>{});
  t.lambda_star = j.value("lambda_star", std::vector<double>{});
  t.mu_star = j.value("mu_star", std::vector<double>{});
  t.tau_star = j.value("tau_star", std::vector<double>{});
  auto nu = j.value("nu_star", std::vector<int>{});
  t.nu_star.assign(nu.begin(), nu.end());
  return t;
}

}  // namespace zlpcm
