// ADMM driver for the dual-functional precoder design: alternates the
// communication v-update (WMMSE alternating optimization) with the radar
// u-update (beampattern SDP) under the consensus constraint D_p(v - u) = 0.
#ifndef DFRC_ADMM_HPP
#define DFRC_ADMM_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "dfrc/channel.hpp"
#include "dfrc/common.hpp"
#include "dfrc/config.hpp"
#include "dfrc/errors.hpp"
#include "dfrc/radar.hpp"
#include "dfrc/sdr.hpp"
#include "dfrc/wmmse.hpp"

namespace dfrc {

struct AdmmTraceRow {
  int iter = 0;
  double r_norm = 0.0;       // primal residual ||D_p(v - u)||
  double q_norm = 0.0;       // dual residual ||D_p(u^{t+1} - u^t)||
  double awsr = 0.0;         // v-side weighted ergodic sum rate
  double pattern_mse = 0.0;  // u-side beampattern MSE at alpha
  double alpha = 0.0;
};

struct AdmmResult {
  MatC p_final;              // u-side precoder (per-antenna equality holds)
  VecR common_splits;        // v-side auxiliary variables (xbar / stream rates)
  std::vector<int> order;    // NOMA decoding order (empty otherwise)
  double alpha = 0.0;
  bool converged = false;
  int iters = 0;
  std::vector<AdmmTraceRow> trace;
  double awsr = 0.0;         // evaluated at p_final
  double pattern_mse = 0.0;  // evaluated at p_final and alpha
};

// Primal/dual residual norms from consecutive precoder-selection vectors.
inline std::pair<double, double> admm_residuals(const VecC& v_p,
                                                const VecC& u_p,
                                                const VecC& u_prev_p) {
  return {(v_p - u_p).norm(), (u_p - u_prev_p).norm()};
}

inline AdmmResult run_admm(const Scenario& sc, const MatC& h_est,
                           const SaaSampleSet& saa, double lambda,
                           std::uint64_t seed) {
  const int n_tx = sc.n_tx();
  const int k_users = sc.n_users();
  const AccessMode mode = sc.system.access_mode;
  const bool zero_common = mode != AccessMode::RSMA;
  const double rho = sc.solver.admm_penalty;
  const double nu = sc.solver.admm_tol;

  AdmmResult res;
  Rng rng(seed);
  VecC d = rng.cnormal_matrix(static_cast<Eigen::Index>(n_tx) * (k_users + 1),
                              1)
               .col(0);

  MatC p_v = mrt_svd_init(sc, h_est, mode);
  VecC u_p = vec_precoder(p_v);
  double alpha = 1.0;

  for (int t = 0; t < sc.solver.max_admm_iters; ++t) {
    AdmmLinear prox;
    prox.rho = rho;
    prox.target = u_p - d;
    const AoResult ao = run_ao(sc, h_est, saa, prox, p_v);
    p_v = ao.p;
    res.common_splits = ao.extras;
    res.order = ao.order;
    const VecC v_p = vec_precoder(p_v);

    const VecC d_hat = v_p + d;
    const SdrResult sdr =
        solve_sdr(d_hat, rho, lambda, sc.radar, sc, zero_common);
    const VecC u_prev = u_p;
    u_p = sdr.p_u;
    alpha = sdr.alpha;

    d += v_p - u_p;
    const auto [r_norm, q_norm] = admm_residuals(v_p, u_p, u_prev);

    AdmmTraceRow row;
    row.iter = t;
    row.r_norm = r_norm;
    row.q_norm = q_norm;
    row.awsr = ao.awsr;
    row.alpha = alpha;
    row.pattern_mse = beampattern_mse(unvec_precoder(u_p, n_tx, k_users),
                                      alpha, sc.radar, sc.system.spacing);
    res.trace.push_back(row);
    res.iters = t + 1;

    if (r_norm <= nu && q_norm <= nu) {
      res.converged = true;
      break;
    }
  }

  res.p_final = unvec_precoder(u_p, n_tx, k_users);
  res.alpha = alpha;
  res.awsr = evaluate_awsr(sc, res.p_final, res.common_splits, mode, res.order,
                           saa);
  res.pattern_mse =
      beampattern_mse(res.p_final, alpha, sc.radar, sc.system.spacing);
  return res;
}

}  // namespace dfrc

#endif  // DFRC_ADMM_HPP
