#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dfrc/harness.hpp"

using namespace dfrc;

namespace {

Scenario make_scenario(int n_tx, int k_users, AccessMode mode) {
  RawConfig raw;
  raw.system.n_tx = n_tx;
  raw.system.n_users = k_users;
  raw.system.access_mode = mode;
  raw.system.qos_rate = {0.0};
  raw.mobility.csit_error_var = 0.2;
  raw.radar.grid_min = -60.0;
  raw.radar.grid_max = 60.0;
  raw.radar.grid_step = 15.0;
  raw.radar.beam_halfwidth = 20.0;
  Scenario sc = validate(raw);
  sc.solver.max_admm_iters = 20;
  sc.solver.max_ao_iters = 10;
  sc.solver.saa_samples = 4;
  sc.lls.blocks = 1;
  sc.lls.block_symbols = 64;
  return sc;
}

}  // namespace

TEST_CASE("tradeoff sweep: lambda trades beampattern fit against rate") {
  const Scenario sc = make_scenario(4, 2, AccessMode::RSMA);
  const auto pts = run_tradeoff(sc, {1e-9, 1e-1}, {AccessMode::RSMA},
                                {"low-mobility"}, 2, 7u);
  REQUIRE(pts.size() == 2);
  const TradeoffPoint& lo = pts[0];
  const TradeoffPoint& hi = pts[1];
  REQUIRE(lo.lambda == 1e-9);
  REQUIRE(hi.lambda == 1e-1);
  CHECK(hi.rmse <= lo.rmse);
  // Small slack: the finite-iteration desk run leaves residual solver noise.
  CHECK(hi.ewsr <= lo.ewsr + 1e-2);
  for (const TradeoffPoint& p : pts) {
    CHECK(p.n_total == 2);
    CHECK(p.n_infeasible == 0);
    CHECK(p.mean_power_dbm.size() == 3);
    CHECK(std::isfinite(p.rmi));
    CHECK(std::isfinite(p.crb));
    CHECK(p.rmi > 0.0);
    // Total transmit power is fixed by the per-antenna constraint: the
    // linear column powers must sum to Pt = 0.1 W = 20 dBm.
    double total_w = 0.0;
    for (Eigen::Index c = 0; c < p.mean_power_dbm.size(); ++c)
      total_w += std::pow(10.0, p.mean_power_dbm(c) / 10.0) * 1e-3;
    CHECK(total_w == Catch::Approx(sc.system.total_power).epsilon(1e-6));
  }
}

TEST_CASE("tradeoff run is deterministic for a fixed seed") {
  const Scenario sc = make_scenario(3, 2, AccessMode::SDMA);
  const auto a = run_tradeoff(sc, {1e-3}, {AccessMode::SDMA},
                              {"high-mobility"}, 2, 99u);
  const auto b = run_tradeoff(sc, {1e-3}, {AccessMode::SDMA},
                              {"high-mobility"}, 2, 99u);
  CHECK(tradeoff_csv(a) == tradeoff_csv(b));
}

TEST_CASE("shard-merge invariance: split sweeps match the combined run") {
  const Scenario sc = make_scenario(3, 2, AccessMode::RSMA);
  const std::vector<std::string> profiles{"low-mobility"};
  const auto all = run_tradeoff(sc, {1e-5, 1e-2}, {AccessMode::RSMA},
                                profiles, 2, 42u);
  const auto s1 = run_tradeoff(sc, {1e-5}, {AccessMode::RSMA}, profiles, 2, 42u);
  const auto s2 = run_tradeoff(sc, {1e-2}, {AccessMode::RSMA}, profiles, 2, 42u);
  std::vector<TradeoffPoint> merged = s1;
  merged.insert(merged.end(), s2.begin(), s2.end());
  CHECK(tradeoff_csv(all) == tradeoff_csv(merged));
}

TEST_CASE("one output row per (lambda, mode, profile) combination") {
  const Scenario sc = make_scenario(3, 2, AccessMode::RSMA);
  const auto pts =
      run_tradeoff(sc, {1e-7, 1e-2}, {AccessMode::RSMA, AccessMode::SDMA},
                   {"low-mobility", "high-mobility"}, 1, 5u);
  REQUIRE(pts.size() == 8);
  std::vector<std::string> keys;
  for (const TradeoffPoint& p : pts)
    keys.push_back(detail::fmt(p.lambda) + "|" + to_string(p.mode) + "|" +
                   p.profile);
  std::sort(keys.begin(), keys.end());
  CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
}

TEST_CASE("link-level throughput stays below the ergodic rate bound") {
  const Scenario sc = make_scenario(4, 2, AccessMode::RSMA);
  const auto pts = run_lls(sc, {1e-9}, {AccessMode::RSMA}, {"low-mobility"},
                           1, 13u);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].throughput >= 0.0);
  // Finite blocklength with CRC overhead cannot beat the Shannon-rate
  // objective; allow slack for the AWSR being an average over SAA draws.
  CHECK(pts[0].throughput <= pts[0].ewsr + 1.0);
}

TEST_CASE("emit: empty inputs are an error, CSV round trip is byte-exact") {
  CHECK_THROWS_WITH(tradeoff_csv({}), "nothing to emit");
  CHECK_THROWS_WITH(lls_csv({}), "nothing to emit");
  CHECK_THROWS_WITH(plot_xy({}, {}), "nothing to emit");

  const Scenario sc = make_scenario(3, 2, AccessMode::NOMA);
  const auto pts = run_tradeoff(sc, {1e-3, 1e-2}, {AccessMode::NOMA},
                                {"high-mobility"}, 1, 3u);
  const std::string csv = tradeoff_csv(pts);
  CHECK(tradeoff_csv(parse_tradeoff_csv(csv)) == csv);

  const std::string xy = plot_xy({1.0, 2.0}, {3.5, 4.5});
  CHECK(xy == "1 3.5\n2 4.5\n");
}

TEST_CASE("manifest serializes the full run description") {
  RunManifest m;
  m.config_path = "desk.ini";
  m.master_seed = 17;
  m.realizations = 20;
  m.lambdas = default_lambda_grid();
  m.modes = {"rsma"};
  m.profiles = {"low-mobility", "high-mobility"};
  m.timestamp = "2026-01-01T00:00:00Z";
  const auto j = manifest_json(m);
  CHECK(j["master_seed"] == 17);
  CHECK(j["lambdas"].size() == 6);
  CHECK(j["lambdas"][0] == 1e-9);
  CHECK(j["profiles"][1] == "high-mobility");
}

TEST_CASE("unknown mobility profile is rejected") {
  const Scenario sc = make_scenario(3, 2, AccessMode::RSMA);
  CHECK_THROWS_AS(apply_profile(sc, "warp-speed"), std::invalid_argument);
  CHECK(apply_profile(sc, "low-mobility").csit_error_var ==
        Catch::Approx(0.417));
  CHECK(apply_profile(sc, "high-mobility").csit_error_var ==
        Catch::Approx(0.984));
}
