// Minimal conic backend: a log-barrier interior-point method for the two
// problem shapes the optimizer emits,
//   (a) convex QCQPs  (PSD quadratic objective, convex quadratic and linear
//       inequalities, linear equalities), and
//   (b) small SDPs with linear-matrix-inequality blocks M(x) = C + sum x_i B_i >= 0.
//
// Everything is real-valued; complex callers lift via (Re, Im) stacking.
#ifndef DFRC_CONIC_HPP
#define DFRC_CONIC_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dfrc/common.hpp"

namespace dfrc::conic {

// 0.5 x'Ax + b'x + d <= 0. A may be empty (size 0) for a linear constraint.
struct QuadConstraint {
  MatR a;
  VecR b;
  double d = 0.0;
};

// C + sum_i x_{terms[i].first} * terms[i].second  must be PSD.
struct LmiBlock {
  MatR c;
  std::vector<std::pair<int, MatR>> terms;

  MatR eval(const VecR& x) const {
    MatR m = c;
    for (const auto& [idx, b] : terms) m.noalias() += x(idx) * b;
    return m;
  }
};

struct ConicProblem {
  int n = 0;
  MatR q;     // objective quadratic part (PSD); empty means zero
  VecR lin;   // objective linear part
  double constant = 0.0;
  std::vector<QuadConstraint> ineqs;
  MatR eq_a;  // eq_a x = eq_b; zero rows allowed
  VecR eq_b;
  std::vector<LmiBlock> lmis;

  double objective(const VecR& x) const {
    double v = constant + (lin.size() ? lin.dot(x) : 0.0);
    if (q.size()) v += 0.5 * x.dot(q * x);
    return v;
  }
};

enum class SolveStatus { Optimal, Infeasible, MaxIter, NumericalFailure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

struct ConicSolution {
  VecR x;
  double objective = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  double max_violation = 0.0;
  int newton_iters = 0;
  std::string message;
};

struct SolveOptions {
  double tol = 1e-8;        // target barrier gap, relative to 1 + |objective|
  double feas_tol = 1e-6;
  int max_newton = 2000;
  double mu = 10.0;         // barrier multiplier
  std::optional<VecR> x0;   // strictly feasible hint, used when valid
};

namespace detail {

inline double quad_value(const QuadConstraint& g, const VecR& x) {
  double v = g.d + g.b.dot(x);
  if (g.a.size()) v += 0.5 * x.dot(g.a * x);
  return v;
}

inline VecR quad_grad(const QuadConstraint& g, const VecR& x) {
  if (g.a.size()) return g.a * x + g.b;
  return g.b;
}

inline bool strictly_feasible(const ConicProblem& p, const VecR& x, double margin = 0.0) {
  for (const auto& g : p.ineqs)
    if (quad_value(g, x) >= -margin) return false;
  for (const auto& lmi : p.lmis) {
    Eigen::LLT<MatR> llt(lmi.eval(x) - margin * MatR::Identity(lmi.c.rows(), lmi.c.cols()));
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

inline double constraint_violation(const ConicProblem& p, const VecR& x) {
  double v = 0.0;
  for (const auto& g : p.ineqs) v = std::max(v, quad_value(g, x));
  for (const auto& lmi : p.lmis) {
    Eigen::SelfAdjointEigenSolver<MatR> es(lmi.eval(x), Eigen::EigenvaluesOnly);
    v = std::max(v, -es.eigenvalues().minCoeff());
  }
  if (p.eq_a.rows() > 0)
    v = std::max(v, (p.eq_a * x - p.eq_b).template lpNorm<Eigen::Infinity>());
  return v;
}

// Scaled barrier f0 + (1/t)(sum -log(-g_i) + sum -log det M_j); +inf outside.
// The 1/t scaling keeps magnitudes near the objective's at every t, so the
// line-search comparisons stay resolvable in double precision.
inline double barrier_value(const ConicProblem& p, const VecR& x, double t) {
  double phi = p.objective(x);
  for (const auto& g : p.ineqs) {
    const double v = quad_value(g, x);
    if (v >= 0.0) return std::numeric_limits<double>::infinity();
    phi -= std::log(-v) / t;
  }
  for (const auto& lmi : p.lmis) {
    Eigen::LLT<MatR> llt(lmi.eval(x));
    if (llt.info() != Eigen::Success)
      return std::numeric_limits<double>::infinity();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < lmi.c.rows(); ++i)
      logdet += std::log(llt.matrixL()(i, i));
    phi -= 2.0 * logdet / t;
  }
  return phi;
}

struct NewtonResult {
  bool converged = false;
  bool numerical_failure = false;
  int iters = 0;
};

// Equality-constrained Newton minimization of the barrier at fixed t.
// x must enter strictly feasible with eq_a x = eq_b already satisfied.
// stop(x), when given, ends centering early (used by phase I, whose barrier
// is unbounded below in the original variables once feasibility is certain).
inline NewtonResult newton_center(
    const ConicProblem& p, VecR& x, double t, int max_iters, double ntol = 1e-9,
    const std::function<bool(const VecR&)>& stop = {}) {
  NewtonResult res;
  const int n = p.n;
  const int me = static_cast<int>(p.eq_a.rows());
  for (; res.iters < max_iters; ++res.iters) {
    VecR grad = p.lin.size() ? VecR(p.lin) : VecR(VecR::Zero(n));
    MatR hess = MatR::Zero(n, n);
    if (p.q.size()) {
      grad.noalias() += p.q * x;
      hess = p.q;
    }
    for (const auto& g : p.ineqs) {
      const double v = quad_value(g, x);
      const VecR dg = quad_grad(g, x);
      grad.noalias() += dg / (-v * t);
      hess.noalias() += dg * dg.transpose() / (v * v * t);
      if (g.a.size()) hess.noalias() += g.a / (-v * t);
    }
    for (const auto& lmi : p.lmis) {
      const MatR m = lmi.eval(x);
      Eigen::LLT<MatR> llt(m);
      if (llt.info() != Eigen::Success) {
        res.numerical_failure = true;
        return res;
      }
      const MatR minv = llt.solve(MatR::Identity(m.rows(), m.cols()));
      const int nt = static_cast<int>(lmi.terms.size());
      std::vector<MatR> u(static_cast<std::size_t>(nt));
      for (int i = 0; i < nt; ++i) {
        u[static_cast<std::size_t>(i)].noalias() = minv * lmi.terms[static_cast<std::size_t>(i)].second;
        grad(lmi.terms[static_cast<std::size_t>(i)].first) -=
            u[static_cast<std::size_t>(i)].trace() / t;
      }
      for (int i = 0; i < nt; ++i)
        for (int j = i; j < nt; ++j) {
          const double hij =
              (u[static_cast<std::size_t>(i)].array() *
               u[static_cast<std::size_t>(j)].transpose().array()).sum() / t;
          const int a = lmi.terms[static_cast<std::size_t>(i)].first;
          const int b = lmi.terms[static_cast<std::size_t>(j)].first;
          hess(a, b) += hij;
          if (a != b) hess(b, a) += hij;
        }
    }
    hess.diagonal().array() += 1e-12;

    VecR dx(n);
    if (me > 0) {
      MatR kkt = MatR::Zero(n + me, n + me);
      kkt.topLeftCorner(n, n) = hess;
      kkt.topRightCorner(n, me) = p.eq_a.transpose();
      kkt.bottomLeftCorner(me, n) = p.eq_a;
      VecR rhs = VecR::Zero(n + me);
      rhs.head(n) = -grad;
      Eigen::PartialPivLU<MatR> lu(kkt);
      const VecR sol = lu.solve(rhs);
      dx = sol.head(n);
    } else {
      dx = Eigen::LDLT<MatR>(hess).solve(-grad);
    }
    if (!dx.allFinite()) {
      res.numerical_failure = true;
      return res;
    }
    const double phi0 = barrier_value(p, x, t);
    const double lambda_sq = -grad.dot(dx);
    if (lambda_sq / 2.0 <= ntol * (1.0 + std::abs(phi0))) {
      res.converged = true;
      return res;
    }

    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const VecR xn = x + step * dx;
      const double phin = barrier_value(p, xn, t);
      if (std::isfinite(phin) && phin <= phi0 + 0.25 * step * grad.dot(dx)) {
        x = xn;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (accepted && stop && stop(x)) {
      res.converged = true;
      ++res.iters;
      return res;
    }
    if (!accepted) {
      // Stalled line search at a reasonable decrement: accept centering as done.
      res.converged = lambda_sq / 2.0 <= 1e-5 * (1.0 + std::abs(phi0));
      return res;
    }
  }
  return res;
}

// Projects x onto eq_a x = eq_b (minimum-norm correction).
inline void project_equalities(const ConicProblem& p, VecR& x) {
  if (p.eq_a.rows() == 0) return;
  const VecR r = p.eq_b - p.eq_a * x;
  x += p.eq_a.transpose() *
       (p.eq_a * p.eq_a.transpose()).ldlt().solve(r).eval();
}

// Phase I: minimize s subject to g_i(x) <= s, M_j(x) + s I >= 0, eq_a x = eq_b.
// Returns a strictly feasible x when one exists.
inline bool phase_one(const ConicProblem& p, VecR& x, const SolveOptions& opts,
                      int& newton_budget) {
  ConicProblem ph;
  ph.n = p.n + 1;
  const int si = p.n;
  ph.lin = VecR::Zero(ph.n);
  ph.lin(si) = 1.0;
  for (const auto& g : p.ineqs) {
    QuadConstraint gs;
    if (g.a.size()) {
      gs.a = MatR::Zero(ph.n, ph.n);
      gs.a.topLeftCorner(p.n, p.n) = g.a;
    }
    gs.b = VecR::Zero(ph.n);
    gs.b.head(p.n) = g.b;
    gs.b(si) = -1.0;
    gs.d = g.d;
    ph.ineqs.push_back(std::move(gs));
  }
  for (const auto& lmi : p.lmis) {
    LmiBlock l = lmi;
    l.terms.emplace_back(si, MatR::Identity(lmi.c.rows(), lmi.c.cols()));
    ph.lmis.push_back(std::move(l));
  }
  if (p.eq_a.rows() > 0) {
    ph.eq_a = MatR::Zero(p.eq_a.rows(), ph.n);
    ph.eq_a.leftCols(p.n) = p.eq_a;
    ph.eq_b = p.eq_b;
  }
  // Keep s from running to -inf once feasibility is certain.
  QuadConstraint floor_s;
  floor_s.b = VecR::Zero(ph.n);
  floor_s.b(si) = -1.0;
  floor_s.d = -1.0;  // s >= -1
  ph.ineqs.push_back(std::move(floor_s));

  VecR z(ph.n);
  z.head(p.n) = x;
  z(si) = 0.0;
  z(si) = constraint_violation(p, x) + 1.0;
  if (z(si) > 0.9) z(si) = std::min(z(si), 1e8);  // keep the s>=-1 floor slack sane

  double t = 1.0;
  const double m_total = static_cast<double>(ph.ineqs.size()) +
                         [&] {
                           double d = 0;
                           for (const auto& l : ph.lmis) d += static_cast<double>(l.c.rows());
                           return d;
                         }();
  const auto deep_enough = [&](const VecR& w) { return w(si) < -1e-6; };
  for (int outer = 0; outer < 60 && newton_budget > 0; ++outer) {
    const auto r = newton_center(ph, z, t, std::min(newton_budget, 100), 1e-8,
                                 deep_enough);
    newton_budget -= r.iters;
    if (r.numerical_failure) return false;
    if (z(si) < -1e-9 && strictly_feasible(p, z.head(p.n), 0.0)) {
      x = z.head(p.n);
      return true;
    }
    if (m_total / t < 1e-9) break;
    t *= opts.mu;
  }
  if (z(si) < 0.0 && strictly_feasible(p, z.head(p.n), 0.0)) {
    x = z.head(p.n);
    return true;
  }
  return false;
}

}  // namespace detail

inline ConicSolution solve(const ConicProblem& problem, SolveOptions opts = {}) {
  ConicSolution sol;
  VecR x = opts.x0 && opts.x0->size() == problem.n ? *opts.x0
                                                   : VecR::Zero(problem.n);
  detail::project_equalities(problem, x);

  int budget = opts.max_newton;
  if (!detail::strictly_feasible(problem, x, 0.0)) {
    if (!detail::phase_one(problem, x, opts, budget)) {
      sol.x = x;
      sol.objective = problem.objective(x);
      sol.max_violation = detail::constraint_violation(problem, x);
      sol.status = SolveStatus::Infeasible;
      sol.message = "phase I could not find a strictly feasible point";
      sol.newton_iters = opts.max_newton - budget;
      return sol;
    }
  }

  double m_total = static_cast<double>(problem.ineqs.size());
  for (const auto& l : problem.lmis) m_total += static_cast<double>(l.c.rows());
  if (m_total == 0.0) m_total = 1.0;

  double t = std::max(1.0, m_total / (1.0 + std::abs(problem.objective(x))));
  int iters_used = opts.max_newton - budget;
  bool converged = false;
  for (int outer = 0; outer < 80; ++outer) {
    if (budget <= 0) break;
    // Cap each centering: near the numerical floor at large t the decrement
    // test may be unreachable, and raising t is the productive move anyway.
    const auto r = detail::newton_center(problem, x, t, std::min(budget, 60), 1e-9);
    budget -= r.iters;
    iters_used += r.iters;
#ifdef DFRC_CONIC_TRACE
    std::fprintf(stderr, "outer=%d t=%.3e iters=%d conv=%d obj=%.9f viol=%.2e\n",
                 outer, t, r.iters, int(r.converged), problem.objective(x),
                 detail::constraint_violation(problem, x));
#endif
    if (r.numerical_failure) {
      sol.status = SolveStatus::NumericalFailure;
      sol.message = "Newton step failed (indefinite or non-finite system)";
      sol.x = x;
      sol.objective = problem.objective(x);
      sol.max_violation = detail::constraint_violation(problem, x);
      sol.newton_iters = iters_used;
      return sol;
    }
    if (m_total / t <= opts.tol * (1.0 + std::abs(problem.objective(x)))) {
      converged = true;
      break;
    }
    t *= opts.mu;
  }

  sol.x = x;
  sol.objective = problem.objective(x);
  sol.max_violation = detail::constraint_violation(problem, x);
  sol.newton_iters = iters_used;
  if (converged && sol.max_violation <= opts.feas_tol) {
    sol.status = SolveStatus::Optimal;
  } else if (!converged) {
    sol.status = SolveStatus::MaxIter;
    sol.message = "barrier gap target not reached within iteration budget";
  } else {
    sol.status = SolveStatus::NumericalFailure;
    sol.message = "converged point violates constraints beyond feas_tol";
  }
  return sol;
}

// Self-describing text dump for cross-solver debugging.
inline std::string dump_problem(const ConicProblem& p) {
  std::string out = "conic_problem n=" + std::to_string(p.n) + "\n";
  auto mat = [&](const MatR& m) {
    std::string s;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        s += (c ? "," : "") + std::to_string(m(r, c));
      s += "\n";
    }
    return s;
  };
  if (p.q.size()) out += "objective_quadratic\n" + mat(p.q);
  if (p.lin.size()) out += "objective_linear\n" + mat(p.lin.transpose());
  for (std::size_t i = 0; i < p.ineqs.size(); ++i) {
    out += "ineq " + std::to_string(i) + " d=" + std::to_string(p.ineqs[i].d) + "\n";
    if (p.ineqs[i].a.size()) out += mat(p.ineqs[i].a);
    out += mat(p.ineqs[i].b.transpose());
  }
  if (p.eq_a.rows()) out += "equalities\n" + mat(p.eq_a) + mat(p.eq_b.transpose());
  for (std::size_t j = 0; j < p.lmis.size(); ++j) {
    out += "lmi " + std::to_string(j) + " dim=" + std::to_string(p.lmis[j].c.rows()) + "\n";
    out += mat(p.lmis[j].c);
    for (const auto& [idx, b] : p.lmis[j].terms)
      out += "var " + std::to_string(idx) + "\n" + mat(b);
  }
  return out;
}

}  // namespace dfrc::conic

#endif  // DFRC_CONIC_HPP
