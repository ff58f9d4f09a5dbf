#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dfrc/sdr.hpp"

using namespace dfrc;

namespace {

Scenario make_scenario(int n_tx, int k_users, double grid_step = 15.0) {
  RawConfig raw;
  raw.system.n_tx = n_tx;
  raw.system.n_users = k_users;
  raw.radar.grid_min = -60.0;
  raw.radar.grid_max = 60.0;
  raw.radar.grid_step = grid_step;
  raw.radar.beam_halfwidth = 20.0;
  return validate(raw);
}

void check_feasibility(const SdrResult& r, const Scenario& sc) {
  const int n = sc.n_tx();
  const double cap = sc.per_antenna_power();
  VecR diag_sum = VecR::Zero(n);
  for (std::size_t c = 0; c < r.s_blocks.size(); ++c) {
    const VecC pc = r.p_u.segment(static_cast<Eigen::Index>(c) * n, n);
    const MatC slack = r.s_blocks[c] - pc * pc.adjoint();
    Eigen::SelfAdjointEigenSolver<MatC> es(slack, Eigen::EigenvaluesOnly);
    if (r.s_blocks[c].norm() > 0.0)
      CHECK(es.eigenvalues().minCoeff() > -1e-7);
    diag_sum += r.s_blocks[c].diagonal().real();
  }
  for (int i = 0; i < n; ++i)
    CHECK_THAT(diag_sum(i), Catch::Matchers::WithinAbs(cap, 1e-6));
  CHECK(r.alpha >= 1e-6);
}

}  // namespace

TEST_CASE("lambda = 0 reduces to row-wise projection of the proximal target") {
  const Scenario sc = make_scenario(3, 2);
  Rng rng(7);
  const VecC d_hat = rng.cnormal_matrix(9, 1, 0.05).col(0);
  const SdrResult r = solve_sdr(d_hat, 1.0, 0.0, sc.radar, sc);
  check_feasibility(r, sc);

  // With the per-antenna trace pinned, the objective is -rho*Re{p^H d_hat};
  // the optimum rescales each antenna row of the unvec'd target to the cap.
  const MatC d_mat = unvec_precoder(d_hat, 3, 2);
  const MatC p_mat = unvec_precoder(r.p_u, 3, 2);
  const double amp = std::sqrt(sc.per_antenna_power());
  for (int i = 0; i < 3; ++i) {
    const VecC expect = d_mat.row(i).transpose() * (amp / d_mat.row(i).norm());
    CHECK((p_mat.row(i).transpose() - expect).norm() < 1e-3 * amp);
  }
}

TEST_CASE("construct-and-recover: a realizable pattern is matched at large lambda") {
  const Scenario sc = make_scenario(3, 1);
  Rng rng(11);
  // A feasible generator precoder with exact per-antenna equality.
  MatC p0 = rng.cnormal_matrix(3, 2);
  const double amp = std::sqrt(sc.per_antenna_power());
  for (int i = 0; i < 3; ++i) p0.row(i) *= amp / p0.row(i).norm();

  RadarSpec spec = sc.radar;
  spec.desired_pattern = transmit_beampattern(p0, spec, sc.system.spacing);
  const VecC d_hat = vec_precoder(p0);
  const SdrResult r = solve_sdr(d_hat, 1.0, 1e8, spec, sc);
  check_feasibility(r, sc);
  // alpha = 1, S = p0 p0^H reproduces the pattern exactly, so the residual
  // pattern MSE at the optimum must be (near) zero.
  CHECK(r.diagnostics.pattern_mse < 1e-6 * spec.desired_pattern.squaredNorm());
}

TEST_CASE("rank diagnostic is recorded and sane") {
  const Scenario sc = make_scenario(3, 1);
  Rng rng(13);
  const VecC d_hat = rng.cnormal_matrix(6, 1, 0.05).col(0);
  const SdrResult r = solve_sdr(d_hat, 0.5, 1e-3, sc.radar, sc);
  CHECK(r.diagnostics.rank_ratio >= 0.0);
  CHECK(r.diagnostics.rank_ratio <= 1.0);
  CHECK(std::isfinite(r.diagnostics.schur_gap));
}

TEST_CASE("relaxation lower-bounds rank-1 feasible competitors") {
  const Scenario sc = make_scenario(3, 2);
  Rng rng(17);
  const VecC d_hat = rng.cnormal_matrix(9, 1, 0.05).col(0);
  const double rho = 2.0, lambda = 1e-2;
  const SdrResult r = solve_sdr(d_hat, rho, lambda, sc.radar, sc);
  const double opt =
      sdr_objective(r.alpha, r.s_blocks, r.p_u, d_hat, rho, lambda, sc.radar,
                    sc.system.spacing);

  const double amp = std::sqrt(sc.per_antenna_power());
  for (int trial = 0; trial < 20; ++trial) {
    MatC pc = rng.cnormal_matrix(3, 3);
    for (int i = 0; i < 3; ++i) pc.row(i) *= amp / pc.row(i).norm();
    std::vector<MatC> s_blocks;
    for (int c = 0; c < 3; ++c)
      s_blocks.push_back(pc.col(c) * pc.col(c).adjoint());
    const double alpha = std::max(1e-6, 0.5 + 2.0 * rng.uniform());
    const double val = sdr_objective(alpha, s_blocks, vec_precoder(pc), d_hat,
                                     rho, lambda, sc.radar, sc.system.spacing);
    CHECK(opt <= val + 1e-6 * (1.0 + std::abs(val)));
  }
}

TEST_CASE("zero_common pins the common column") {
  const Scenario sc = make_scenario(3, 2);
  Rng rng(19);
  const VecC d_hat = rng.cnormal_matrix(9, 1, 0.05).col(0);
  const SdrResult r = solve_sdr(d_hat, 1.0, 1e-3, sc.radar, sc, true);
  check_feasibility(r, sc);
  CHECK(r.p_u.head(3).norm() == 0.0);
  CHECK(r.s_blocks[0].norm() == 0.0);
}

TEST_CASE("u-vector assembly matches the selection layout") {
  const Scenario sc = make_scenario(3, 2);
  Rng rng(23);
  const VecC d_hat = rng.cnormal_matrix(9, 1, 0.05).col(0);
  const SdrResult r = solve_sdr(d_hat, 1.0, 0.0, sc.radar, sc);
  const VecR u = assemble_u(r, 2);
  CHECK(u(0) == r.alpha);
  CHECK(u.segment(1, 2).norm() == 0.0);  // c-slots zero-filled
  CHECK((select_precoder(u, 3, 2) - r.p_u).norm() == 0.0);

  // vec/unvec round trip.
  const MatC p_mat = unvec_precoder(r.p_u, 3, 2);
  CHECK((vec_precoder(p_mat) - r.p_u).norm() == 0.0);
}
