#include <cmath>

#include "doctest.h"
#include "logmath.hpp"
#include "mfm.hpp"
#include "partition.hpp"

using namespace zlpcm;

TEST_CASE("W(1,1) equals 1/alpha exactly") {
  for (double alpha : {0.5, 1.0, 3.0, 7.25}) {
    MfmWeightTable t(alpha);
    CHECK(t.log_weight(1, 1) == -std::log(alpha));
  }
}

TEST_CASE("weight recursion W(N,K) = (N+K a)W(N+1,K) + a W(N+1,K+1)") {
  MfmWeightTable t(3.0);
  for (int n : {1, 2, 5, 17, 60, 150, 299}) {
    for (int k = 1; k <= std::min(n, 12); ++k) {
      const double lhs = t.log_weight(n, k);
      const double rhs = log_add(std::log(n + k * 3.0) + t.log_weight(n + 1, k),
                                 std::log(3.0) + t.log_weight(n + 1, k + 1));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
  }
}

TEST_CASE("partition pmf sums to one") {
  for (double alpha : {1.0, 3.0}) {
    MfmWeightTable t(alpha);
    for (int n = 1; n <= 7; ++n) {
      double tot = 0.0;
      for (const Partition& z : all_partitions(n))
        tot += std::exp(log_partition_pmf(z, t));
      CHECK(tot == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("urn weights proportional to pmf extension ratios") {
  MfmWeightTable t(3.0);
  for (int m = 1; m <= 5; ++m) {
    for (const Partition& z : all_partitions(m)) {
      const int K = num_groups(z);
      std::vector<double> w = urn_weights(z, t);
      REQUIRE(static_cast<int>(w.size()) == K + 1);
      std::vector<double> pmf(K + 1);
      for (int k = 0; k <= K; ++k) {
        Partition ext = z;
        ext.push_back(k + 1);
        pmf[k] = std::exp(log_partition_pmf(ext, t));
      }
      for (int k = 1; k <= K; ++k)
        CHECK(w[k] / w[0] == doctest::Approx(pmf[k] / pmf[0]).epsilon(1e-10));
    }
  }
}

TEST_CASE("supervised urn weights proportional to supervised pmf ratios") {
  MfmWeightTable t(3.0);
  const std::vector<double> omega = {1.0, 2.0};
  for (int m = 2; m <= 5; ++m) {
    for (const Partition& z : all_partitions(m)) {
      std::vector<int> c(m);
      for (int i = 0; i < m; ++i) c[i] = 1 + (i % 2);
      for (int ci : {1, 2}) {
        UrnAttrs attrs{&c, ci, &omega};
        std::vector<double> w = urn_weights(z, t, attrs);
        const int K = num_groups(z);
        std::vector<double> pmf(K + 1);
        std::vector<int> ce = c;
        ce.push_back(ci);
        for (int k = 0; k <= K; ++k) {
          Partition ext = z;
          ext.push_back(k + 1);
          pmf[k] = std::exp(log_supervised_partition_pmf(ext, ce, omega, t));
        }
        for (int k = 1; k <= K; ++k)
          CHECK(w[k] / w[0] == doctest::Approx(pmf[k] / pmf[0]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("cohesion of an empty group is zero") {
  CHECK(log_cohesion({0, 0}, {1.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("csv dump and load round trip") {
  MfmWeightTable t(3.0);
  t.log_weight(10, 3);
  t.log_weight(50, 7);
  const std::string path = "/tmp/zlp_wtable.csv";
  t.dump_csv(path);
  MfmWeightTable back = MfmWeightTable::load_csv(path, 3.0);
  CHECK(back.log_weight(10, 3) == doctest::Approx(t.log_weight(10, 3)).epsilon(1e-15));
  CHECK(back.log_weight(50, 7) == doctest::Approx(t.log_weight(50, 7)).epsilon(1e-15));
}

TEST_CASE("partition helpers") {
  CHECK(all_partitions(1).size() == 1);
  CHECK(all_partitions(3).size() == 5);
  CHECK(all_partitions(5).size() == 52);
  CHECK(all_partitions(6).size() == 203);
  CHECK(canonicalize({3, 1, 3, 2}) == Partition{1, 2, 1, 3});
  CHECK(is_canonical({1, 2, 1, 3}));
  CHECK_FALSE(is_canonical({2, 1}));
}
