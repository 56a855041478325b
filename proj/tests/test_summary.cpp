#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "partition.hpp"
#include "summary.hpp"

using namespace zlpcm;

namespace {

Partition random_partition(int n, std::mt19937_64& eng) {
  Partition z(n);
  std::uniform_int_distribution<int> pick(1, 4);
  for (int i = 0; i < n; ++i) z[i] = pick(eng);
  return canonicalize(z);
}

ChainTrace fake_trace(const std::vector<Partition>& zs, int n) {
  ChainTrace t;
  t.n = n;
  t.d = 2;
  t.config.iterations = static_cast<int>(zs.size());
  t.config.burn_in = 0;
  t.z = zs;
  for (const Partition& z : zs) {
    const int k = num_groups(z);
    t.K.push_back(k);
    t.beta.push_back(1.0);
    t.loglik.push_back(0.0);
    t.P.push_back(std::vector<double>(static_cast<std::size_t>(k) * k, 0.1));
  }
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  t.nu_sum.assign(nn, 0.0);
  t.dist_sum.assign(nn, 0.0);
  t.p_sum.assign(nn, 0.0);
  t.lambda_sum.assign(nn, 0.0);
  t.post_count = 1;
  return t;
}

}  // namespace

TEST_CASE("variation of information oracles") {
  CHECK(vi_distance({1, 2, 1, 3}, {1, 2, 1, 3}) == doctest::Approx(0.0));
  CHECK(vi_distance({1, 1, 2, 2}, {1, 2, 1, 2}) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(vi_distance({1, 1, 1, 1}, {1, 2, 3, 4}) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(vi_distance({1, 1}, {1, 1, 2}), DataError);
}

TEST_CASE("variation of information is a metric") {
  std::mt19937_64 eng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const Partition a = random_partition(8, eng);
    const Partition b = random_partition(8, eng);
    const Partition c = random_partition(8, eng);
    const double ab = vi_distance(a, b);
    const double bc = vi_distance(b, c);
    const double ac = vi_distance(a, c);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(vi_distance(b, a)).epsilon(1e-14));
    CHECK(ac <= ab + bc + 1e-12);
    if (a == b) CHECK(ab == doctest::Approx(0.0));
    if (ab == 0.0) CHECK(a == b);
  }
}

TEST_CASE("partition point estimate minimizes the mean distance") {
  std::vector<Partition> zs;
  for (int r = 0; r < 6; ++r) zs.push_back({1, 1, 1, 2});
  for (int r = 0; r < 2; ++r) zs.push_back({1, 2, 1, 2});
  zs.push_back({1, 1, 1, 1});
  const ChainTrace t = fake_trace(zs, 4);
  const FitSummary fit = summarize(t);
  CHECK(fit.z_hat == Partition{1, 1, 1, 2});
  CHECK(fit.K_hat == 2);
  CHECK(fit.K_mode == 2);
  CHECK(fit.beta_hat == doctest::Approx(1.0));

  // brute force over every partition of 4 nodes
  double best = 1e300;
  Partition arg;
  for (const Partition& cand : all_partitions(4)) {
    double acc = 0.0;
    for (const Partition& z : zs) acc += vi_distance(cand, z);
    if (acc < best) {
      best = acc;
      arg = cand;
    }
  }
  CHECK(fit.z_hat == arg);
  CHECK(fit.mean_vi_to_zhat == doctest::Approx(best / zs.size()).epsilon(1e-12));
  CHECK(mean_vi(t, fit.z_hat) == doctest::Approx(fit.mean_vi_to_zhat).epsilon(1e-12));
}

TEST_CASE("roc area equals the rank statistic") {
  std::mt19937_64 eng(7);
  std::uniform_int_distribution<int> grid(0, 9);
  std::bernoulli_distribution lab(0.3);
  std::vector<double> score;
  std::vector<int> label;
  for (int i = 0; i < 400; ++i) {
    score.push_back(grid(eng) / 10.0);  // coarse grid forces ties
    label.push_back(lab(eng) ? 1 : 0);
  }
  CHECK(roc_auc(score, label) ==
        doctest::Approx(oracles::mann_whitney_auc(score, label)).epsilon(1e-12));
  const std::vector<RocPoint> curve = roc_curve(score, label);
  CHECK(curve.front().fpr == 0.0);
  CHECK(curve.front().tpr == 0.0);
  CHECK(curve.back().fpr == doctest::Approx(1.0));
  CHECK(curve.back().tpr == doctest::Approx(1.0));
  CHECK_THROWS_AS(roc_auc(score, std::vector<int>(score.size(), 1)), DataError);
}

TEST_CASE("hidden-tie probability combines rate and indicator means") {
  FitSummary fit;
  fit.n = 2;
  fit.nu_hat = {0.0, 0.5, 0.2, 0.0};
  fit.lambda_hat = {0.0, 1.0, 1.0, 0.0};
  WeightedNetwork net;
  net.n = 2;
  net.directed = true;
  net.y = {0, 0, 3, 0};
  const std::vector<double> pnz = prob_nonzero_given_zero(fit, net);
  CHECK(pnz[1] == doctest::Approx(0.5 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(pnz[2] == 0.0);  // observed nonzero weight
  CHECK(pnz[0] == 0.0);
}

TEST_CASE("quantiles interpolate linearly") {
  const std::vector<double> x = {3.0, 1.0, 4.0, 2.0};
  CHECK(quantile(x, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(x, 1.0) == doctest::Approx(4.0));
  CHECK(quantile(x, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(x, 0.25) == doctest::Approx(1.75));
  CHECK(quantile(x, 0.9) == doctest::Approx(3.7).epsilon(1e-12));
  CHECK_THROWS_AS(quantile({}, 0.5), DataError);
  CHECK_THROWS_AS(quantile(x, 1.5), DataError);
}

TEST_CASE("moment helpers") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  CHECK(mean(x) == doctest::Approx(2.5));
  CHECK(sample_sd(x) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-14));
  CHECK(sample_sd({7.0}) == 0.0);
}

TEST_CASE("summary files round trip") {
  std::vector<Partition> zs(5, Partition{1, 1, 2, 2});
  const ChainTrace t = fake_trace(zs, 4);
  const FitSummary fit = summarize(t);
  const std::string path = "/tmp/zlp_summary.json";
  write_summary(path, fit);
  const FitSummary back = load_summary(path);
  CHECK(back.z_hat == fit.z_hat);
  CHECK(back.K_hat == fit.K_hat);
  CHECK(back.beta_hat == doctest::Approx(fit.beta_hat));
  CHECK(back.nu_hat == fit.nu_hat);
  CHECK(back.P_hat == fit.P_hat);
}
