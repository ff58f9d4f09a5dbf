// Radar-side u-update: beampattern matching under per-antenna power equality,
// solved as a semidefinite program.
//
// The covariance lifting is block-reduced before it reaches the conic backend:
// the only couplings between precoder columns are the per-antenna diagonal
// equalities and the shared scale alpha, so the one big PSD block
// [[R, p],[p^H, 1]] is replaced by K+1 small blocks [[S_k, p_k],[p_k^H, 1]].
// The reduction is exact: any feasible big block yields feasible small blocks
// (principal submatrices), and from feasible small blocks one reconstructs
// R = blockdiag(S_k - p_k p_k^H) + p p^H with identical objective value.
#ifndef DFRC_SDR_HPP
#define DFRC_SDR_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfrc/common.hpp"
#include "dfrc/config.hpp"
#include "dfrc/conic.hpp"
#include "dfrc/errors.hpp"
#include "dfrc/radar.hpp"

namespace dfrc {

struct SdrDiagnostics {
  double schur_gap = 0.0;    // ||R - p p^H||_F of the reconstructed lifting
  double rank_ratio = 0.0;   // sigma_2 / sigma_1 of the reconstructed Q
  double pattern_mse = 0.0;  // sum_m |alpha P_d - a^H (sum_k S_k) a|^2
  double prox_value = 0.0;   // (rho/2)(sum Tr S_k - 2 Re{p^H d_hat})
  int newton_iters = 0;
};

struct SdrResult {
  double alpha = 0.0;
  VecC p_u;                      // stacked vec(P), length N(K+1)
  std::vector<MatC> s_blocks;    // per-column covariance blocks S_k
  SdrDiagnostics diagnostics;
};

namespace detail {

// Real parameter layout of the SDP:
//   x(0) = alpha
//   per active column c: [Re p (N), Im p (N), diag S (N),
//                         offdiag Re S (N(N-1)/2), offdiag Im S (N(N-1)/2)]
struct ULayout {
  int n_tx;
  int n_cols;       // active precoder columns (K+1, or K when common is pinned)
  int per_col;      // real parameters per column
  int n;            // total variable count

  ULayout(int n_tx_, int n_cols_)
      : n_tx(n_tx_), n_cols(n_cols_),
        per_col(2 * n_tx_ + n_tx_ * n_tx_),
        n(1 + n_cols_ * per_col) {}

  int col_base(int c) const { return 1 + c * per_col; }
  int p_re(int c, int i) const { return col_base(c) + i; }
  int p_im(int c, int i) const { return col_base(c) + n_tx + i; }
  int s_diag(int c, int i) const { return col_base(c) + 2 * n_tx + i; }
  // i < j
  int s_off_re(int c, int i, int j) const {
    return col_base(c) + 3 * n_tx + pair_index(i, j);
  }
  int s_off_im(int c, int i, int j) const {
    return col_base(c) + 3 * n_tx + n_tx * (n_tx - 1) / 2 + pair_index(i, j);
  }
  int pair_index(int i, int j) const {
    // row-major upper triangle, i < j
    return i * n_tx - i * (i + 1) / 2 + (j - i - 1);
  }

  MatC unpack_s(const VecR& x, int c) const {
    MatC s(n_tx, n_tx);
    for (int i = 0; i < n_tx; ++i) {
      s(i, i) = x(s_diag(c, i));
      for (int j = i + 1; j < n_tx; ++j) {
        const cxd v(x(s_off_re(c, i, j)), x(s_off_im(c, i, j)));
        s(i, j) = v;
        s(j, i) = std::conj(v);
      }
    }
    return s;
  }

  VecC unpack_p(const VecR& x, int c) const {
    VecC p(n_tx);
    for (int i = 0; i < n_tx; ++i)
      p(i) = cxd(x(p_re(c, i)), x(p_im(c, i)));
    return p;
  }
};

// [[X, -Y],[Y, X]] real embedding of the Hermitian matrix X + iY; PSD is
// preserved both ways.
inline MatR real_embed(const MatC& m) {
  const Eigen::Index d = m.rows();
  MatR e(2 * d, 2 * d);
  e.topLeftCorner(d, d) = m.real();
  e.bottomRightCorner(d, d) = m.real();
  e.topRightCorner(d, d) = -m.imag();
  e.bottomLeftCorner(d, d) = m.imag();
  return e;
}

// One Schur block [[S_c, p_c],[p_c^H, 1]] >= 0 as an LMI over the layout.
inline conic::LmiBlock schur_block(const ULayout& ly, int c) {
  const int n = ly.n_tx;
  const int d = n + 1;
  conic::LmiBlock lmi;
  MatC base = MatC::Zero(d, d);
  base(n, n) = 1.0;
  lmi.c = real_embed(base);
  auto add = [&](int var, const MatC& coeff) {
    lmi.terms.emplace_back(var, real_embed(coeff));
  };
  for (int i = 0; i < n; ++i) {
    MatC e = MatC::Zero(d, d);
    e(i, n) = 1.0;
    e(n, i) = 1.0;
    add(ly.p_re(c, i), e);
    e.setZero();
    e(i, n) = cxd(0.0, 1.0);
    e(n, i) = cxd(0.0, -1.0);
    add(ly.p_im(c, i), e);
    e.setZero();
    e(i, i) = 1.0;
    add(ly.s_diag(c, i), e);
    for (int j = i + 1; j < n; ++j) {
      e.setZero();
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      add(ly.s_off_re(c, i, j), e);
      e.setZero();
      e(i, j) = cxd(0.0, 1.0);
      e(j, i) = cxd(0.0, -1.0);
      add(ly.s_off_im(c, i, j), e);
    }
  }
  return lmi;
}

// Linear functional a^H (sum_c S_c) a over the S parameters.
inline VecR beam_row(const ULayout& ly, const VecC& a) {
  VecR g = VecR::Zero(ly.n);
  for (int c = 0; c < ly.n_cols; ++c) {
    for (int i = 0; i < ly.n_tx; ++i) {
      g(ly.s_diag(c, i)) += std::norm(a(i));
      for (int j = i + 1; j < ly.n_tx; ++j) {
        const cxd w = std::conj(a(i)) * a(j);
        g(ly.s_off_re(c, i, j)) += 2.0 * w.real();
        g(ly.s_off_im(c, i, j)) -= 2.0 * w.imag();
      }
    }
  }
  return g;
}

}  // namespace detail

// Objective functional of the u-update at a candidate point, used both for
// reporting and for relaxation-bound checks against rank-1 competitors.
inline double sdr_objective(double alpha, const std::vector<MatC>& s_blocks,
                            const VecC& p, const VecC& d_hat, double rho,
                            double lambda, const RadarSpec& radar,
                            double spacing) {
  const int n_tx = static_cast<int>(s_blocks.front().rows());
  MatC s_sum = MatC::Zero(n_tx, n_tx);
  for (const MatC& s : s_blocks) s_sum += s;
  double mse = 0.0;
  for (Eigen::Index m = 0; m < radar.grid_size(); ++m) {
    const VecC a = steering_vector(radar.angle_grid_deg(m), n_tx, spacing);
    const double pt = std::real((a.adjoint() * s_sum * a)(0, 0));
    const double e = alpha * radar.desired_pattern(m) - pt;
    mse += e * e;
  }
  double trace = 0.0;
  for (const MatC& s : s_blocks) trace += std::real(s.trace());
  return lambda * mse + 0.5 * rho * (trace - 2.0 * std::real(p.dot(d_hat)));
}

// Solves the u-update SDP. `d_hat` is D_p v^{t+1} + d^t stacked column-major
// over the K+1 precoder columns; when `zero_common` is set the common column
// is pinned to zero (its d_hat entries are ignored) and removed from the SDP.
inline SdrResult solve_sdr(const VecC& d_hat, double rho, double lambda,
                           const RadarSpec& radar, const Scenario& sc,
                           bool zero_common = false) {
  if (rho <= 0.0) throw std::invalid_argument("solve_sdr: rho must be positive");
  if (lambda < 0.0)
    throw std::invalid_argument("solve_sdr: lambda must be >= 0");
  const int n_tx = sc.n_tx();
  const int k_users = sc.n_users();
  const int total_cols = k_users + 1;
  const int first_col = zero_common ? 1 : 0;
  const int n_cols = total_cols - first_col;
  const double spacing = sc.system.spacing;
  const double cap = sc.per_antenna_power();
  if (d_hat.size() != static_cast<Eigen::Index>(n_tx) * total_cols)
    throw std::invalid_argument("solve_sdr: d_hat has wrong length");

  const detail::ULayout ly(n_tx, n_cols);
  conic::ConicProblem prob;
  prob.n = ly.n;

  // Objective: lambda * sum_m (alpha P_d(m) - a_m^H (sum S_c) a_m)^2
  //            + (rho/2)(sum Tr S_c - 2 Re{p^H d_hat}).
  // Tr Q - 1 = sum Tr S_c since the per-antenna equalities fix the total.
  prob.q = MatR::Zero(ly.n, ly.n);
  prob.lin = VecR::Zero(ly.n);
  if (lambda > 0.0) {
    for (Eigen::Index m = 0; m < radar.grid_size(); ++m) {
      const VecC a = steering_vector(radar.angle_grid_deg(m), n_tx, spacing);
      VecR g = -detail::beam_row(ly, a);
      g(0) += radar.desired_pattern(m);
      prob.q.noalias() += (2.0 * lambda) * (g * g.transpose());
    }
  }
  for (int c = 0; c < n_cols; ++c) {
    for (int i = 0; i < n_tx; ++i) {
      prob.lin(ly.s_diag(c, i)) += 0.5 * rho;
      const cxd dv = d_hat((first_col + c) * n_tx + i);
      prob.lin(ly.p_re(c, i)) -= rho * dv.real();
      prob.lin(ly.p_im(c, i)) -= rho * dv.imag();
    }
  }

  // alpha >= alpha_min keeps the feasible set closed. A generous upper bound
  // makes it compact: without one, a lambda = 0 objective has no alpha term
  // and the barrier would push alpha toward infinity. Any optimal alpha is at
  // most max_theta P_t(theta) / P_d <= N * P_t / max P_d, far below the cap.
  constexpr double kAlphaMin = 1e-6;
  const double alpha_max =
      1e3 * std::max(1.0, n_tx * sc.system.total_power /
                              std::max(radar.desired_pattern.maxCoeff(), 1e-12));
  {
    conic::QuadConstraint g;
    g.b = VecR::Zero(ly.n);
    g.b(0) = -1.0;
    g.d = kAlphaMin;
    prob.ineqs.push_back(std::move(g));
    conic::QuadConstraint hi;
    hi.b = VecR::Zero(ly.n);
    hi.b(0) = 1.0;
    hi.d = -alpha_max;
    prob.ineqs.push_back(std::move(hi));
  }

  // Per-antenna equality: sum_c S_c(i,i) = Pt / N.
  prob.eq_a = MatR::Zero(n_tx, ly.n);
  prob.eq_b = VecR::Constant(n_tx, cap);
  for (int i = 0; i < n_tx; ++i)
    for (int c = 0; c < n_cols; ++c) prob.eq_a(i, ly.s_diag(c, i)) = 1.0;

  for (int c = 0; c < n_cols; ++c)
    prob.lmis.push_back(detail::schur_block(ly, c));

  // Strictly feasible warm start near the proximal pull: take the d_hat
  // columns scaled inside the per-antenna ball, then fill the diagonal slack.
  conic::SolveOptions opts;
  {
    VecR x0 = VecR::Zero(ly.n);
    x0(0) = std::max(1.0, kAlphaMin * 10.0);
    MatC p0(n_tx, n_cols);
    for (int c = 0; c < n_cols; ++c)
      p0.col(c) = d_hat.segment((first_col + c) * n_tx, n_tx);
    double max_row = 0.0;
    for (int i = 0; i < n_tx; ++i)
      max_row = std::max(max_row, p0.row(i).squaredNorm());
    if (max_row > 0.0) p0 *= std::sqrt(0.5 * cap / max_row);
    for (int i = 0; i < n_tx; ++i) {
      const double fill = (cap - p0.row(i).squaredNorm()) / n_cols;
      for (int c = 0; c < n_cols; ++c) {
        x0(ly.p_re(c, i)) = p0(i, c).real();
        x0(ly.p_im(c, i)) = p0(i, c).imag();
        x0(ly.s_diag(c, i)) = std::norm(p0(i, c)) + fill;
      }
    }
    for (int c = 0; c < n_cols; ++c) {
      const MatC outer = p0.col(c) * p0.col(c).adjoint();
      for (int i = 0; i < n_tx; ++i)
        for (int j = i + 1; j < n_tx; ++j) {
          x0(ly.s_off_re(c, i, j)) = outer(i, j).real();
          x0(ly.s_off_im(c, i, j)) = outer(i, j).imag();
        }
    }
    opts.x0 = x0;
  }

  const conic::ConicSolution sol = conic::solve(prob, opts);
  if (sol.status != conic::SolveStatus::Optimal)
    throw SolverFailure("u-update SDP solve failed: " + sol.message +
                            " (status " + conic::to_string(sol.status) + ")",
                        conic::dump_problem(prob));

  SdrResult res;
  res.alpha = sol.x(0);
  res.p_u = VecC::Zero(static_cast<Eigen::Index>(n_tx) * total_cols);
  res.s_blocks.assign(static_cast<std::size_t>(total_cols),
                      MatC::Zero(n_tx, n_tx));
  for (int c = 0; c < n_cols; ++c) {
    res.p_u.segment((first_col + c) * n_tx, n_tx) = ly.unpack_p(sol.x, c);
    res.s_blocks[static_cast<std::size_t>(first_col + c)] = ly.unpack_s(sol.x, c);
  }
  res.diagnostics.newton_iters = sol.newton_iters;
  res.diagnostics.pattern_mse =
      [&] {
        MatC s_sum = MatC::Zero(n_tx, n_tx);
        for (const MatC& s : res.s_blocks) s_sum += s;
        double mse = 0.0;
        for (Eigen::Index m = 0; m < radar.grid_size(); ++m) {
          const VecC a = steering_vector(radar.angle_grid_deg(m), n_tx, spacing);
          const double pt = std::real((a.adjoint() * s_sum * a)(0, 0));
          const double e = res.alpha * radar.desired_pattern(m) - pt;
          mse += e * e;
        }
        return mse;
      }();
  {
    double trace = 0.0;
    for (const MatC& s : res.s_blocks) trace += std::real(s.trace());
    res.diagnostics.prox_value =
        0.5 * rho * (trace - 2.0 * std::real(res.p_u.dot(d_hat)));
  }
  // Reconstruct the lifting R = blockdiag(S_c - p_c p_c^H) + p p^H to report
  // the Schur gap and the rank profile of Q = [[R, p],[p^H, 1]].
  {
    const Eigen::Index np = res.p_u.size();
    MatC r = res.p_u * res.p_u.adjoint();
    double gap_sq = 0.0;
    for (int c = 0; c < total_cols; ++c) {
      const VecC pc = res.p_u.segment(c * n_tx, n_tx);
      const MatC slack = res.s_blocks[static_cast<std::size_t>(c)] -
                         pc * pc.adjoint();
      gap_sq += slack.squaredNorm();
      r.block(c * n_tx, c * n_tx, n_tx, n_tx) += slack;
    }
    res.diagnostics.schur_gap = std::sqrt(gap_sq);
    MatC qmat(np + 1, np + 1);
    qmat.topLeftCorner(np, np) = r;
    qmat.topRightCorner(np, 1) = res.p_u;
    qmat.bottomLeftCorner(1, np) = res.p_u.adjoint();
    qmat(np, np) = 1.0;
    Eigen::JacobiSVD<MatC> svd(qmat);
    const VecR sv = svd.singularValues();
    res.diagnostics.rank_ratio = sv.size() > 1 && sv(0) > 0.0 ? sv(1) / sv(0)
                                                              : 0.0;
  }
  return res;
}

// Assembles the ADMM-side u vector [alpha; c-slots (zero); vec(P)] so that
// the precoder selection D_p u reproduces p_u exactly.
inline VecR assemble_u(const SdrResult& res, int k_users) {
  const Eigen::Index np = res.p_u.size();
  VecR u(1 + k_users + 2 * np);
  u.setZero();
  u(0) = res.alpha;
  u.segment(1 + k_users, np) = res.p_u.real();
  u.segment(1 + k_users + np, np) = res.p_u.imag();
  return u;
}

// D_p selection applied to an assembled u vector.
inline VecC select_precoder(const VecR& u, int n_tx, int k_users) {
  const Eigen::Index np = static_cast<Eigen::Index>(n_tx) * (k_users + 1);
  VecC p(np);
  p.real() = u.segment(1 + k_users, np);
  p.imag() = u.segment(1 + k_users + np, np);
  return p;
}

inline MatC unvec_precoder(const VecC& p, int n_tx, int k_users) {
  MatC out(n_tx, k_users + 1);
  for (int c = 0; c <= k_users; ++c) out.col(c) = p.segment(c * n_tx, n_tx);
  return out;
}

inline VecC vec_precoder(const MatC& p) {
  VecC out(p.rows() * p.cols());
  for (Eigen::Index c = 0; c < p.cols(); ++c)
    out.segment(c * p.rows(), p.rows()) = p.col(c);
  return out;
}

}  // namespace dfrc

#endif  // DFRC_SDR_HPP
