#include <filesystem>

#include "doctest.h"
#include "simgen.hpp"

using namespace zlpcm;

namespace {

LpcmSpec tiny_spec() {
  LpcmSpec spec;
  spec.group_sizes = {4, 4};
  spec.d = 2;
  spec.beta = 1.5;
  spec.mu = {0.0, 0.0, 2.0, 2.0};
  spec.tau = {3.0, 3.0};
  spec.P = {0.3, 0.1, 0.1, 0.3};
  return spec;
}

}  // namespace

TEST_CASE("simulation is seed reproducible") {
  const SimResult a = simulate_zip_lpcm(tiny_spec(), 9);
  const SimResult b = simulate_zip_lpcm(tiny_spec(), 9);
  CHECK(a.network.y == b.network.y);
  CHECK(a.truth.U_star == b.truth.U_star);
  CHECK(a.truth.nu_star == b.truth.nu_star);
  const SimResult c = simulate_zip_lpcm(tiny_spec(), 10);
  CHECK(a.network.y != c.network.y);
}

TEST_CASE("zero inflation off reduces to the plain poisson generator") {
  LpcmSpec zeroed = tiny_spec();
  zeroed.P.assign(4, 0.0);
  const SimResult zip = simulate_zip_lpcm(zeroed, 5);
  const SimResult pois = simulate_pois_lpcm(tiny_spec(), 5);
  CHECK(zip.network.y == pois.network.y);
  for (unsigned char v : zip.truth.nu_star) CHECK(v == 0);
  CHECK(pois.truth.P_star.empty());
}

TEST_CASE("unusual zeros are zeros in the realized network") {
  const SimResult sim = simulate_zip_lpcm(tiny_spec(), 3);
  const int n = sim.network.n;
  int unusual = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (sim.truth.nu_star[i * n + j]) {
        ++unusual;
        CHECK(sim.network.y[i * n + j] == 0);
      }
  CHECK(unusual > 0);
}

TEST_CASE("sbm generator produces the declared shape") {
  SbmSpec spec;
  spec.group_sizes = {3, 5};
  spec.lambda = {4.0, 0.5, 0.5, 4.0};
  spec.P = {0.2, 0.2, 0.2, 0.2};
  const SimResult sim = simulate_zip_sbm(spec, 1);
  CHECK(sim.network.n == 8);
  CHECK(sim.truth.is_sbm);
  CHECK(sim.truth.U_star.empty());
  CHECK(sim.truth.z_star == Partition{1, 1, 1, 2, 2, 2, 2, 2});
  spec.lambda[0] = 0.0;
  CHECK_THROWS_AS(simulate_zip_sbm(spec, 1), DataError);
}

TEST_CASE("contamination changes exactly m nodes to existing levels") {
  const Partition z = {1, 1, 1, 2, 2, 2, 3, 3, 3, 3};
  const std::vector<int> c = contaminate(z, 4, 17);
  CHECK(c == contaminate(z, 4, 17));
  int changed = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (c[i] != z[i]) ++changed;
    CHECK(c[i] >= 1);
    CHECK(c[i] <= 3);
  }
  CHECK(changed == 4);
  CHECK(contaminate(z, 0, 17) == std::vector<int>(z.begin(), z.end()));
  CHECK_THROWS_AS(contaminate(z, 11, 17), DataError);
}

TEST_CASE("presets are named and validated") {
  CHECK(preset_names().size() == 7);
  for (const std::string& name : preset_names()) {
    const Preset p = get_preset(name);
    CHECK(p.name == name);
    const SimResult sim = simulate_preset(p, 1);
    CHECK(sim.network.n >= 50);
    CHECK_NOTHROW(validate_network(sim.network));
  }
  CHECK_THROWS_AS(get_preset("no-such-preset"), DataError);
}

TEST_CASE("ground truth sidecar round trips") {
  const SimResult sim = simulate_zip_lpcm(tiny_spec(), 2);
  const std::string path =
      (std::filesystem::temp_directory_path() / "zlp_truth.json").string();
  write_truth(path, sim.truth);
  const GroundTruth back = load_truth(path);
  CHECK(back.z_star == sim.truth.z_star);
  CHECK(back.beta_star == sim.truth.beta_star);
  CHECK(back.U_star == sim.truth.U_star);
  CHECK(back.P_star == sim.truth.P_star);
  CHECK(back.nu_star == sim.truth.nu_star);
  CHECK(back.d == sim.truth.d);
  CHECK(back.is_sbm == sim.truth.is_sbm);
}
