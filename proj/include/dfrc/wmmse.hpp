// The v-update of the ADMM split: SAA AR-WMMSE alternating optimization for
// the AWSR-maximization subproblem. Each AO iteration recomputes the closed
// form MMSE equalizers/weights, averages the SAF parameters over the SAA set,
// and solves the resulting convex QCQP through the conic backend.
#ifndef DFRC_WMMSE_HPP
#define DFRC_WMMSE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfrc/channel.hpp"
#include "dfrc/common.hpp"
#include "dfrc/config.hpp"
#include "dfrc/conic.hpp"
#include "dfrc/errors.hpp"
#include "dfrc/rates.hpp"

namespace dfrc {

// One stream/decoder pairing in the SIC chain. `col` is the signal column of
// the N x (K+1) precoder (0 = common), `interf` the columns still treated as
// interference by this decoder.
struct SicPair {
  int user;                // decoder (column of H)
  int col;                 // signal column in P
  std::vector<int> interf;
  bool common = false;     // RSMA common-stream pair
  int stream;              // owning stream id (user k, or NOMA order slot)
};

inline std::vector<SicPair> make_sic_pairs(AccessMode mode, int k_users,
                                           const std::vector<int>& order = {}) {
  std::vector<SicPair> pairs;
  auto privates_except = [&](int k) {
    std::vector<int> cols;
    for (int j = 0; j < k_users; ++j)
      if (j != k) cols.push_back(j + 1);
    return cols;
  };
  switch (mode) {
    case AccessMode::RSMA:
      for (int k = 0; k < k_users; ++k) {
        std::vector<int> all_priv;
        for (int j = 0; j < k_users; ++j) all_priv.push_back(j + 1);
        pairs.push_back({k, 0, all_priv, true, k});
        pairs.push_back({k, k + 1, privates_except(k), false, k});
      }
      break;
    case AccessMode::SDMA:
      for (int k = 0; k < k_users; ++k)
        pairs.push_back({k, k + 1, privates_except(k), false, k});
      break;
    case AccessMode::NOMA:
      for (int i = 0; i < k_users; ++i)
        for (int k = i; k < k_users; ++k) {
          std::vector<int> later;
          for (int j = i + 1; j < k_users; ++j)
            later.push_back(order[static_cast<std::size_t>(j)] + 1);
          pairs.push_back({order[static_cast<std::size_t>(k)],
                           order[static_cast<std::size_t>(i)] + 1, later,
                           false, i});
        }
      break;
  }
  return pairs;
}

// Per-pair MMSE equalizers and weights for every SAA realization.
struct EqualizerWeights {
  // indexed [pair][m]
  std::vector<std::vector<cxd>> g;
  std::vector<std::vector<double>> w;
};

// Closed forms: g = p_s^H h / T with T = |h^H p_s|^2 + sum_I |h^H p_j|^2 +
// sigma_n^2, w = 1/eps^MMSE with eps^MMSE = 1 - |h^H p_s|^2 / T.
inline EqualizerWeights mmse_equalizers(const MatC& p,
                                        const std::vector<SicPair>& pairs,
                                        const SaaSampleSet& saa,
                                        double noise_power) {
  EqualizerWeights ew;
  ew.g.resize(pairs.size());
  ew.w.resize(pairs.size());
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const SicPair& pr = pairs[q];
    ew.g[q].reserve(saa.realizations.size());
    ew.w[q].reserve(saa.realizations.size());
    for (const MatC& h : saa.realizations) {
      const VecC hk = h.col(pr.user);
      const cxd sig = hk.dot(p.col(pr.col));  // h^H p_s
      double t = std::norm(sig) + noise_power;
      for (int j : pr.interf) t += std::norm(hk.dot(p.col(j)));
      const cxd g = std::conj(sig) / t;
      const double eps = 1.0 - std::norm(sig) / t;  // in (0, 1]
      ew.g[q].push_back(g);
      ew.w[q].push_back(1.0 / eps);
    }
  }
  return ew;
}

inline double mmse_weight(double eps_mmse) { return 1.0 / eps_mmse; }

// Sample-average SAF parameters of one pair.
struct Saf {
  double t_bar = 0.0;
  MatC psi_bar;   // Hermitian PSD
  VecC f_bar;
  double w_bar = 0.0;
  double v_bar = 0.0;
};

using SafBundle = std::vector<Saf>;  // indexed like the pair list

inline SafBundle build_safs(const std::vector<SicPair>& pairs,
                            const SaaSampleSet& saa,
                            const EqualizerWeights& ew) {
  const int n = static_cast<int>(saa.realizations.front().rows());
  const double inv_m = 1.0 / static_cast<double>(saa.realizations.size());
  SafBundle bundle(pairs.size());
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    Saf& s = bundle[q];
    s.psi_bar = MatC::Zero(n, n);
    s.f_bar = VecC::Zero(n);
    for (std::size_t m = 0; m < saa.realizations.size(); ++m) {
      const VecC h = saa.realizations[m].col(pairs[q].user);
      const cxd g = ew.g[q][m];
      const double w = ew.w[q][m];
      const double t = w * std::norm(g);
      s.t_bar += t;
      s.psi_bar.noalias() += t * (h * h.adjoint());
      s.f_bar.noalias() += (w * std::conj(g)) * h;  // f = w h g^H
      s.w_bar += w;
      s.v_bar += std::log2(w);
    }
    s.t_bar *= inv_m;
    s.psi_bar *= inv_m;
    s.f_bar *= inv_m;
    s.w_bar *= inv_m;
    s.v_bar *= inv_m;
  }
  return bundle;
}

// Expanded AWMSE of one pair as a function of P (W, G fixed):
// xi(P) = sum_{j in {s} u I} p_j^H Psi p_j + sigma^2 t - 2 Re{f^H p_s} + w - v.
inline double awmse_value(const Saf& s, const SicPair& pr, const MatC& p,
                          double noise_power) {
  double v = noise_power * s.t_bar + s.w_bar - s.v_bar;
  v += (p.col(pr.col).adjoint() * s.psi_bar * p.col(pr.col)).real()(0);
  for (int j : pr.interf)
    v += (p.col(j).adjoint() * s.psi_bar * p.col(j)).real()(0);
  v -= 2.0 * std::real(s.f_bar.dot(p.col(pr.col)));
  return v;
}

// ADMM linear coupling for the v-update proximal term
// (rho/2)||vec(P) - D_p u + d||^2.
struct AdmmLinear {
  VecC target;   // D_p u^t - d^t, length N(K+1); empty disables the term
  double rho = 0.0;
};

namespace detail {

// Real-lifted variable layout for the v-update QCQP:
// x = [extras (K or 0); per variable column: Re p, Im p].
struct VLayout {
  int n_tx;
  int n_extra;
  std::vector<int> var_cols;  // precoder columns that are free variables
  int n = 0;

  VLayout(AccessMode mode, int n_tx_, int k_users) : n_tx(n_tx_) {
    n_extra = (mode == AccessMode::SDMA) ? 0 : k_users;
    const int first = (mode == AccessMode::RSMA) ? 0 : 1;  // pin p_c otherwise
    for (int c = first; c <= k_users; ++c) var_cols.push_back(c);
    n = n_extra + 2 * n_tx * static_cast<int>(var_cols.size());
  }

  int col_pos(int col) const {
    for (std::size_t q = 0; q < var_cols.size(); ++q)
      if (var_cols[q] == col) return static_cast<int>(q);
    return -1;
  }
  int re_index(int row, int pos) const { return n_extra + 2 * n_tx * pos + row; }
  int im_index(int row, int pos) const {
    return n_extra + 2 * n_tx * pos + n_tx + row;
  }

  MatC unpack(const VecR& x, int k_users) const {
    MatC p = MatC::Zero(n_tx, k_users + 1);
    for (std::size_t q = 0; q < var_cols.size(); ++q)
      for (int i = 0; i < n_tx; ++i)
        p(i, var_cols[q]) = cxd(x(re_index(i, static_cast<int>(q))),
                                x(im_index(i, static_cast<int>(q))));
    return p;
  }

  VecR pack(const MatC& p, const VecR& extras) const {
    VecR x = VecR::Zero(n);
    x.head(n_extra) = extras;
    for (std::size_t q = 0; q < var_cols.size(); ++q)
      for (int i = 0; i < n_tx; ++i) {
        x(re_index(i, static_cast<int>(q))) = p(i, var_cols[q]).real();
        x(im_index(i, static_cast<int>(q))) = p(i, var_cols[q]).imag();
      }
    return x;
  }
};

// Accumulates value = x^T S x + b.x + c, then converts to the conic form
// 0.5 x^T A x + b.x + d with A = 2S.
struct QuadAccum {
  MatR s;
  VecR b;
  double c = 0.0;
  explicit QuadAccum(int n) : s(MatR::Zero(n, n)), b(VecR::Zero(n)) {}

  // += coeff * p_col^H A p_col for Hermitian A via the real embedding.
  void add_hermitian(const VLayout& ly, int pos, const MatC& a, double coeff) {
    const int nb = ly.n_tx;
    const int r0 = ly.re_index(0, pos);
    const int i0 = ly.im_index(0, pos);
    const MatR ar = coeff * a.real();
    const MatR ai = coeff * a.imag();
    s.block(r0, r0, nb, nb) += ar;
    s.block(i0, i0, nb, nb) += ar;
    s.block(r0, i0, nb, nb) -= ai;
    s.block(i0, r0, nb, nb) += ai;
  }

  // += coeff * Re{f^H p_col}
  void add_real_inner(const VLayout& ly, int pos, const VecC& f, double coeff) {
    const int nb = ly.n_tx;
    b.segment(ly.re_index(0, pos), nb) += coeff * f.real();
    b.segment(ly.im_index(0, pos), nb) += coeff * f.imag();
  }

  // += coeff * xi_pair(P)
  void add_awmse(const VLayout& ly, const Saf& saf, const SicPair& pr,
                 double noise_power, double coeff) {
    add_hermitian(ly, ly.col_pos(pr.col), saf.psi_bar, coeff);
    for (int j : pr.interf) add_hermitian(ly, ly.col_pos(j), saf.psi_bar, coeff);
    add_real_inner(ly, ly.col_pos(pr.col), saf.f_bar, -2.0 * coeff);
    c += coeff * (noise_power * saf.t_bar + saf.w_bar - saf.v_bar);
  }

  conic::QuadConstraint to_constraint() const {
    conic::QuadConstraint g;
    if (s.cwiseAbs().maxCoeff() > 0.0) g.a = 2.0 * s;
    g.b = b;
    g.d = c;
    return g;
  }
};

}  // namespace detail

struct QcqpResult {
  MatC p;
  VecR extras;       // xbar (RSMA), stream rates (NOMA), empty (SDMA)
  double objective;  // subproblem objective at the optimum
};

// Assembles and solves the convex v-update QCQP for the given mode.
inline QcqpResult solve_qcqp(const Scenario& sc, const std::vector<SicPair>& pairs,
                             const SafBundle& safs, const AdmmLinear& admm,
                             AccessMode mode, const std::vector<int>& order,
                             const MatC& p_hint) {
  const int n_tx = sc.n_tx();
  const int k_users = sc.n_users();
  const double noise = sc.system.noise_power_user;
  const detail::VLayout ly(mode, n_tx, k_users);

  conic::ConicProblem prob;
  prob.n = ly.n;

  detail::QuadAccum obj(ly.n);
  if (mode == AccessMode::NOMA) {
    for (int i = 0; i < k_users; ++i)
      obj.b(i) = -sc.system.weights[static_cast<std::size_t>(
          order[static_cast<std::size_t>(i)])];
  } else if (mode == AccessMode::RSMA) {
    for (int k = 0; k < k_users; ++k)
      obj.b(k) = sc.system.weights[static_cast<std::size_t>(k)];
  }
  if (mode != AccessMode::NOMA) {
    for (std::size_t q = 0; q < pairs.size(); ++q)
      if (!pairs[q].common)
        obj.add_awmse(ly, safs[q], pairs[q], noise,
                      sc.system.weights[static_cast<std::size_t>(pairs[q].user)]);
  }
  if (admm.rho > 0.0) {
    // (rho/2)||vec(P) - target||^2; pinned columns contribute a constant.
    for (int c = 0; c <= k_users; ++c) {
      const int pos = ly.col_pos(c);
      const VecC tgt = admm.target.segment(c * n_tx, n_tx);
      if (pos < 0) {
        obj.c += 0.5 * admm.rho * tgt.squaredNorm();
        continue;
      }
      for (int i = 0; i < n_tx; ++i) {
        const int ri = ly.re_index(i, pos), ii = ly.im_index(i, pos);
        obj.s(ri, ri) += 0.5 * admm.rho;
        obj.s(ii, ii) += 0.5 * admm.rho;
        obj.b(ri) -= admm.rho * tgt(i).real();
        obj.b(ii) -= admm.rho * tgt(i).imag();
        obj.c += 0.5 * admm.rho * std::norm(tgt(i));
      }
    }
  }
  prob.q = 2.0 * obj.s;
  prob.lin = obj.b;
  prob.constant = obj.c;

  // Per-antenna power rows: sum_c |P(i,c)|^2 <= Pt/N.
  for (int i = 0; i < n_tx; ++i) {
    detail::QuadAccum g(ly.n);
    for (std::size_t q = 0; q < ly.var_cols.size(); ++q) {
      const int ri = ly.re_index(i, static_cast<int>(q));
      const int ii = ly.im_index(i, static_cast<int>(q));
      g.s(ri, ri) += 1.0;
      g.s(ii, ii) += 1.0;
    }
    g.c = -sc.per_antenna_power();
    prob.ineqs.push_back(g.to_constraint());
  }

  std::vector<std::size_t> qos_constraints;  // index into prob.ineqs per user
  if (mode == AccessMode::RSMA) {
    // Common AWMSE: xi_{c,k} - 1 - sum xbar <= 0.
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      if (!pairs[q].common) continue;
      detail::QuadAccum g(ly.n);
      g.add_awmse(ly, safs[q], pairs[q], noise, 1.0);
      for (int k = 0; k < k_users; ++k) g.b(k) -= 1.0;
      g.c -= 1.0;
      prob.ineqs.push_back(g.to_constraint());
    }
    // xbar <= 0.
    for (int k = 0; k < k_users; ++k) {
      conic::QuadConstraint g;
      g.b = VecR::Zero(ly.n);
      g.b(k) = 1.0;
      prob.ineqs.push_back(g);
    }
    // QoS: xbar_k + xi_k - 1 + Rth_k <= 0.
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      if (pairs[q].common) continue;
      const int k = pairs[q].user;
      detail::QuadAccum g(ly.n);
      g.add_awmse(ly, safs[q], pairs[q], noise, 1.0);
      g.b(k) += 1.0;
      g.c += sc.system.qos_rate[static_cast<std::size_t>(k)] - 1.0;
      qos_constraints.push_back(prob.ineqs.size());
      prob.ineqs.push_back(g.to_constraint());
    }
  } else if (mode == AccessMode::SDMA) {
    // QoS: xi_k - 1 + Rth_k <= 0.
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      const int k = pairs[q].user;
      const double rth = sc.system.qos_rate[static_cast<std::size_t>(k)];
      if (rth <= 0.0) continue;
      detail::QuadAccum g(ly.n);
      g.add_awmse(ly, safs[q], pairs[q], noise, 1.0);
      g.c += rth - 1.0;
      qos_constraints.push_back(prob.ineqs.size());
      prob.ineqs.push_back(g.to_constraint());
    }
  } else {  // NOMA: r_i - 1 + xi_{pair} <= 0 per decoder; QoS r_i >= Rth.
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      detail::QuadAccum g(ly.n);
      g.add_awmse(ly, safs[q], pairs[q], noise, 1.0);
      g.b(pairs[q].stream) += 1.0;
      g.c -= 1.0;
      prob.ineqs.push_back(g.to_constraint());
    }
    for (int i = 0; i < k_users; ++i) {
      const int user = order[static_cast<std::size_t>(i)];
      conic::QuadConstraint g;
      g.b = VecR::Zero(ly.n);
      g.b(i) = -1.0;
      g.d = sc.system.qos_rate[static_cast<std::size_t>(user)];
      qos_constraints.push_back(prob.ineqs.size());
      prob.ineqs.push_back(g);
    }
  }

  // Strictly feasible hint from the incumbent precoder pulled slightly inward.
  conic::SolveOptions opts;
  {
    const MatC p0 = 0.995 * p_hint;
    VecR extras = VecR::Zero(ly.n_extra);
    if (mode == AccessMode::RSMA) {
      double max_xi_c = -std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < pairs.size(); ++q)
        if (pairs[q].common)
          max_xi_c = std::max(max_xi_c, awmse_value(safs[q], pairs[q], p0, noise));
      if (max_xi_c < 1.0)
        extras.setConstant((max_xi_c - 1.0) * (1.0 - 1e-6) /
                           static_cast<double>(k_users));
    } else if (mode == AccessMode::NOMA) {
      for (int i = 0; i < k_users; ++i) {
        double min_rate = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < pairs.size(); ++q)
          if (pairs[q].stream == i)
            min_rate = std::min(min_rate,
                                1.0 - awmse_value(safs[q], pairs[q], p0, noise));
        extras(i) = min_rate - 1e-8;
      }
    }
    opts.x0 = ly.pack(p0, extras);
  }

  const conic::ConicSolution sol = conic::solve(prob, opts);
  if (sol.status == conic::SolveStatus::Infeasible) {
    // Identify which QoS constraints are unsatisfiable at the returned point.
    std::vector<int> bad;
    for (std::size_t idx = 0; idx < qos_constraints.size(); ++idx) {
      const auto& g = prob.ineqs[qos_constraints[idx]];
      double v = g.d + g.b.dot(sol.x);
      if (g.a.size()) v += 0.5 * sol.x.dot(g.a * sol.x);
      if (v > 1e-9) bad.push_back(static_cast<int>(idx));
    }
    throw InfeasibleQos("v-update QCQP infeasible (QoS too tight)", bad);
  }
  if (sol.status != conic::SolveStatus::Optimal)
    throw SolverFailure("v-update QCQP solve failed: " + sol.message,
                        conic::dump_problem(prob));

  QcqpResult res;
  res.p = ly.unpack(sol.x, k_users);
  res.extras = sol.x.head(ly.n_extra);
  res.objective = sol.objective;
  return res;
}

// MRT-SVD initialization: private MRT beams plus a common beam along the
// dominant left singular vector, split t : (1-t), rows rescaled into the
// per-antenna power region.
inline MatC mrt_svd_init(const Scenario& sc, const MatC& h_est,
                         AccessMode mode, double t_split = 0.5) {
  const int n_tx = sc.n_tx();
  const int k_users = sc.n_users();
  const double pt = sc.system.total_power;
  MatC p = MatC::Zero(n_tx, k_users + 1);
  const bool with_common = (mode == AccessMode::RSMA);
  const double t = with_common ? t_split : 1.0;
  const double qp = pt * t / static_cast<double>(k_users);
  for (int k = 0; k < k_users; ++k) {
    const double nrm = h_est.col(k).norm();
    if (nrm > 0.0) p.col(k + 1) = std::sqrt(qp) * h_est.col(k) / nrm;
  }
  if (with_common) {
    Eigen::JacobiSVD<MatC> svd(h_est, Eigen::ComputeThinU);
    p.col(0) = std::sqrt(pt * (1.0 - t)) * svd.matrixU().col(0);
  }
  const double cap = sc.per_antenna_power();
  for (int i = 0; i < n_tx; ++i) {
    const double rp = p.row(i).squaredNorm();
    if (rp > cap) p.row(i) *= std::sqrt(cap / rp);
  }
  return p;
}

struct AoTraceRow {
  int iter;
  double awsr;       // actual SAA average weighted sum-rate at the iterate
  double penalty;    // proximal term value
  double objective;  // full subproblem objective (monotone non-increasing)
};

struct AoResult {
  MatC p;
  VecR extras;                  // xbar (RSMA) / stream rates (NOMA)
  std::vector<int> order;       // NOMA decoding order (empty otherwise)
  std::vector<AoTraceRow> trace;
  double awsr = 0.0;
  double objective = 0.0;
  bool converged = false;
};

// Actual (non-surrogate) AWSR of an iterate, using the SAA rate averages.
inline double evaluate_awsr(const Scenario& sc, const MatC& p, const VecR& extras,
                            AccessMode mode, const std::vector<int>& order,
                            const SaaSampleSet& saa) {
  const double noise = sc.system.noise_power_user;
  const auto& mu = sc.system.weights;
  if (mode == AccessMode::NOMA) {
    const MatC p_priv = p.rightCols(p.cols() - 1);
    double total = 0.0;
    const VecR rates = noma_average_stream_rates(p_priv, saa, order, noise);
    for (int i = 0; i < rates.size(); ++i)
      total += mu[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] *
               rates(i);
    return total;
  }
  const AverageRates ar = average_rates(p, saa, noise);
  double total = 0.0;
  for (int k = 0; k < sc.n_users(); ++k) {
    const double split = (mode == AccessMode::RSMA) ? -extras(k) : 0.0;
    total += mu[static_cast<std::size_t>(k)] * (split + ar.priv(k));
  }
  return total;
}

// Algorithm: alternate closed-form (W, G) updates with the convex QCQP until
// |AWSR^[n] - AWSR^[n-1]| <= epsilon or the iteration cap.
inline AoResult run_ao(const Scenario& sc, const MatC& h_est,
                       const SaaSampleSet& saa, const AdmmLinear& admm,
                       const MatC& p_init) {
  const AccessMode mode = sc.system.access_mode;
  const double noise = sc.system.noise_power_user;
  std::vector<int> order;
  if (mode == AccessMode::NOMA) order = noma_decoding_order(h_est);
  const std::vector<SicPair> pairs = make_sic_pairs(mode, sc.n_users(), order);

  AoResult res;
  res.p = p_init;
  res.order = order;
  res.extras = VecR::Zero(mode == AccessMode::SDMA ? 0 : sc.n_users());
  double last_awsr = evaluate_awsr(sc, p_init, res.extras, mode, order, saa);
  for (int n = 0; n < sc.solver.max_ao_iters; ++n) {
    const EqualizerWeights ew = mmse_equalizers(res.p, pairs, saa, noise);
    const SafBundle safs = build_safs(pairs, saa, ew);
    const QcqpResult q = solve_qcqp(sc, pairs, safs, admm, mode, order, res.p);
    res.p = q.p;
    res.extras = q.extras;
    res.objective = q.objective;

    double penalty = 0.0;
    if (admm.rho > 0.0) {
      VecC vp(res.p.size());
      for (int c = 0; c < res.p.cols(); ++c)
        vp.segment(c * res.p.rows(), res.p.rows()) = res.p.col(c);
      penalty = 0.5 * admm.rho * (vp - admm.target).squaredNorm();
    }
    res.awsr = evaluate_awsr(sc, res.p, res.extras, mode, order, saa);
    res.trace.push_back({n, res.awsr, penalty, q.objective});
    if (std::abs(res.awsr - last_awsr) <= sc.solver.ao_tol) {
      res.converged = true;
      break;
    }
    last_awsr = res.awsr;
  }
  return res;
}

}  // namespace dfrc

#endif  // DFRC_WMMSE_HPP
