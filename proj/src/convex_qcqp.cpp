#include "scobb/convex_qcqp.hpp"

#include "scobb/simplex.hpp"
#include "scobb/spectral.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>

namespace scobb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BarrierProblem {
  QuadForm objective;
  std::vector<QuadForm> quads;      // <= 0
  std::vector<LinearIneq> lins;     // a'y <= b
  Vector lower, upper;

  Eigen::Index dim() const { return lower.size(); }
  Eigen::Index cone_count() const {
    return static_cast<Eigen::Index>(quads.size() + lins.size()) + 2 * dim();
  }

  bool strictly_feasible(const Vector& y) const {
    if (!((y.array() > lower.array()).all() && (y.array() < upper.array()).all())) return false;
    for (const auto& li : lins)
      if (!(li.a.dot(y) < li.b)) return false;
    for (const auto& g : quads)
      if (!(g.eval(y) < 0.0)) return false;
    return true;
  }

  // phi(y) = t*f(y) - sum log(-g_j) - sum log(b - a'y) - sum log box slacks.
  double phi(double t, const Vector& y) const {
    double v = t * objective.eval(y);
    for (const auto& g : quads) {
      const double gv = g.eval(y);
      if (gv >= 0.0) return kInf;
      v -= std::log(-gv);
    }
    for (const auto& li : lins) {
      const double s = li.b - li.a.dot(y);
      if (s <= 0.0) return kInf;
      v -= std::log(s);
    }
    for (Eigen::Index i = 0; i < dim(); ++i) {
      const double sl = y[i] - lower[i], su = upper[i] - y[i];
      if (sl <= 0.0 || su <= 0.0) return kInf;
      v -= std::log(sl) + std::log(su);
    }
    return v;
  }

  void grad_hess(double t, const Vector& y, Vector& g, Matrix& h) const {
    const Eigen::Index n = dim();
    g = t * objective.gradient(y);
    h = (2.0 * t) * objective.Q.mat();
    for (const auto& q : quads) {
      const double qv = q.eval(y);
      const Vector qg = q.gradient(y);
      g += qg / (-qv);
      h += (2.0 / (-qv)) * q.Q.mat();
      h.noalias() += (qg / qv) * (qg / qv).transpose();
    }
    for (const auto& li : lins) {
      const double s = li.b - li.a.dot(y);
      g += li.a / s;
      h.noalias() += (li.a / s) * (li.a / s).transpose();
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sl = y[i] - lower[i], su = upper[i] - y[i];
      g[i] += 1.0 / su - 1.0 / sl;
      h(i, i) += 1.0 / (su * su) + 1.0 / (sl * sl);
    }
  }

  // Largest step that keeps y + alpha*d strictly inside every constraint.
  double max_step(const Vector& y, const Vector& d) const {
    double amax = kInf;
    auto cap = [&](double a) {
      if (a >= 0.0 && a < amax) amax = a;
    };
    for (Eigen::Index i = 0; i < dim(); ++i) {
      if (d[i] > 0.0) cap((upper[i] - y[i]) / d[i]);
      if (d[i] < 0.0) cap((lower[i] - y[i]) / d[i]);
    }
    for (const auto& li : lins) {
      const double ad = li.a.dot(d);
      if (ad > 0.0) cap((li.b - li.a.dot(y)) / ad);
    }
    for (const auto& q : quads) {
      const double c2 = d.dot(q.Q.mat() * d);
      const double c1 = q.gradient(y).dot(d);
      const double c0 = q.eval(y);  // < 0
      if (c2 > 1e-300) {
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        cap((-c1 + std::sqrt(std::max(0.0, disc))) / (2.0 * c2));
      } else if (c1 > 1e-300) {
        cap(-c0 / c1);
      }
    }
    return amax;
  }
};

// Golden-section minimization of the strictly convex 1-D slice
// alpha -> phi(y + alpha*d) over [0, alpha_hi].
double line_search(const BarrierProblem& p, double t, const Vector& y, const Vector& d,
                   double alpha_hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = alpha_hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = p.phi(t, y + x1 * d);
  double f2 = p.phi(t, y + x2 * d);
  for (int it = 0; it < 60 && (b - a) > 1e-14 * alpha_hi; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = p.phi(t, y + x1 * d);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = p.phi(t, y + x2 * d);
    }
  }
  return 0.5 * (a + b);
}

struct CenterOutcome {
  bool ok = false;
  std::string message;
};

CenterOutcome center(const BarrierProblem& p, double t, Vector& y,
                     const std::function<bool(const Vector&)>& early_exit = nullptr,
                     int max_newton = 120) {
  const bool dbg = std::getenv("SCOBB_DEBUG_BARRIER") != nullptr;
  Vector g;
  Matrix h;
  const Eigen::Index n = p.dim();
  for (int it = 0; it < max_newton; ++it) {
    if (early_exit && early_exit(y)) return {true, ""};
    p.grad_hess(t, y, g, h);
    Vector d;
    double ridge = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::LLT<Matrix> llt(h + ridge * Matrix::Identity(n, n));
      if (llt.info() == Eigen::Success) {
        d = llt.solve(-g);
        break;
      }
      ridge = (ridge == 0.0) ? 1e-12 * (1.0 + h.diagonal().cwiseAbs().maxCoeff()) : 10.0 * ridge;
      if (attempt == 11) return {false, "Newton system not positive definite after regularization"};
    }
    const double decrement2 = -g.dot(d);
    if (decrement2 <= 2e-11) return {true, ""};
    const double amax = p.max_step(y, d);
    if (dbg) {
      std::fprintf(stderr, "    [newton %2d] t=%.3e dec2=%.3e amax=%.3e phi=%.10e\n", it, t,
                   decrement2, amax, p.phi(t, y));
    }
    if (!(amax > 0.0)) return {false, "no strictly feasible step available"};
    const double alpha = line_search(p, t, y, d, std::min(1e8, 0.999 * amax));
    if (dbg) std::fprintf(stderr, "               alpha=%.3e\n", alpha);
    if (alpha <= 1e-17) {
      // Stalled; accept if nearly centered, fail otherwise.
      return decrement2 <= 1e-6 ? CenterOutcome{true, ""}
                                : CenterOutcome{false, "line search stalled"};
    }
    y += alpha * d;
  }
  return {true, ""};  // good enough: decrement shrinks geometrically near the center
}

struct BarrierOutcome {
  Vector y;
  SolveStatus status;
  int outer = 0;
  double t_final = 1.0;
};

BarrierOutcome barrier_minimize(const BarrierProblem& p, Vector y, double tol_gap, int max_outer,
                                const std::function<bool(const Vector&)>& early_exit = nullptr) {
  const double m_total = static_cast<double>(p.cone_count());
  double t = 1.0;
  BarrierOutcome out;
  int outer = 0;
  for (; outer < max_outer; ++outer) {
    const CenterOutcome c = center(p, t, y);
    if (!c.ok) {
      out.y = y;
      out.status = {SolveKind::NumericalFailure, "centering failed: " + c.message};
      out.outer = outer;
      out.t_final = t;
      return out;
    }
    if (early_exit && early_exit(y)) break;
    if (m_total / t <= tol_gap) break;
    t *= 20.0;
  }
  out.y = y;
  out.outer = outer;
  out.t_final = t;
  out.status = (outer < max_outer)
                   ? SolveStatus{SolveKind::Optimal, ""}
                   : SolveStatus{SolveKind::IterLimit, "barrier outer iteration limit reached"};
  return out;
}

// Interior point of the (box + linear) polytope via a Chebyshev-style LP:
// maximize eps s.t. a'y + ||a|| * eps <= b, lower + eps <= y <= upper - eps.
struct PolytopeInterior {
  Vector y;
  bool found = false;
};

PolytopeInterior polytope_interior(const QcqpInstance& inst) {
  const Eigen::Index n = inst.dim();
  PolytopeInterior out;
  if (inst.linear_ineqs.empty()) {
    out.y = 0.5 * (inst.lower + inst.upper);
    out.found = (inst.upper - inst.lower).minCoeff() > 0.0;
    return out;
  }
  std::vector<LinearIneq> rows;
  for (const auto& li : inst.linear_ineqs) {
    LinearIneq r;
    r.a.resize(n + 1);
    r.a.head(n) = li.a;
    r.a[n] = li.a.norm();
    r.b = li.b;
    rows.push_back(std::move(r));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    LinearIneq up;
    up.a = Vector::Zero(n + 1);
    up.a[i] = 1.0;
    up.a[n] = 1.0;
    up.b = inst.upper[i];
    rows.push_back(std::move(up));
    LinearIneq lo;
    lo.a = Vector::Zero(n + 1);
    lo.a[i] = -1.0;
    lo.a[n] = 1.0;
    lo.b = -inst.lower[i];
    rows.push_back(std::move(lo));
  }
  Vector obj = Vector::Zero(n + 1);
  obj[n] = 1.0;
  // eps is capped so the LP stays bounded even for a very roomy polytope.
  LinearIneq cap;
  cap.a = Vector::Zero(n + 1);
  cap.a[n] = 1.0;
  cap.b = 1.0 + (inst.upper - inst.lower).cwiseAbs().maxCoeff();
  rows.push_back(std::move(cap));

  const LpResult lp = solve_lp(obj, rows, {});
  if (!lp.status.ok() || lp.x[n] <= 1e-12 * (1.0 + inst.upper.cwiseAbs().maxCoeff())) {
    return out;
  }
  out.y = lp.x.head(n);
  out.found = true;
  return out;
}

double psd_violation(const SymMatrix& Q) {
  if (Q.max_abs() == 0.0) return 0.0;
  const EigenDecomposition ed = jacobi_eigs(Q);
  return std::max(0.0, -ed.values.minCoeff());
}

}  // namespace

ConvexSolveResult solve_convex_qcqp(const QcqpInstance& inst, double tol, int max_iter) {
  inst.validate();
  ConvexSolveResult res;
  const Eigen::Index n = inst.dim();

  if (!inst.lower.allFinite() || !inst.upper.allFinite()) {
    res.status = {SolveKind::NumericalFailure, "box bounds must be finite"};
    return res;
  }
  const double psd_tol = 1e-8;
  if (psd_violation(inst.objective.Q) > psd_tol * (1.0 + inst.objective.Q.max_abs())) {
    res.status = {SolveKind::NumericalFailure, "objective matrix is not PSD within tolerance"};
    return res;
  }
  for (std::size_t j = 0; j < inst.constraints.size(); ++j) {
    if (psd_violation(inst.constraints[j].Q) > psd_tol * (1.0 + inst.constraints[j].Q.max_abs())) {
      res.status = {SolveKind::NumericalFailure,
                    "constraint " + std::to_string(j) + " matrix is not PSD within tolerance"};
      return res;
    }
  }
  if ((inst.upper - inst.lower).minCoeff() <= 0.0) {
    res.status = {SolveKind::NumericalFailure, "box has an empty interior"};
    return res;
  }

  const PolytopeInterior pc = polytope_interior(inst);
  if (!pc.found) {
    res.status = {SolveKind::Infeasible, "box/linear polytope has no interior point"};
    return res;
  }
  Vector y = pc.y;

  // Phase 1: drive max_j g_j below zero if the polytope center misses it.
  double maxres = -kInf;
  for (const auto& g : inst.constraints) maxres = std::max(maxres, g.eval(y));
  const double res_scale = 1.0 + std::abs(maxres);
  if (!inst.constraints.empty() && maxres >= -1e-12 * res_scale) {
    BarrierProblem ph1;
    const Eigen::Index ne = n + 1;
    ph1.objective = QuadForm(SymMatrix::Zero(ne), Vector::Unit(ne, n), 0.0);
    for (const auto& g : inst.constraints) {
      Matrix q = Matrix::Zero(ne, ne);
      q.topLeftCorner(n, n) = g.Q.mat();
      Vector lin = Vector::Zero(ne);
      lin.head(n) = g.q;
      lin[n] = -1.0;
      ph1.quads.emplace_back(SymMatrix(q), lin, g.c);
    }
    for (const auto& li : inst.linear_ineqs) {
      LinearIneq e;
      e.a = Vector::Zero(ne);
      e.a.head(n) = li.a;
      e.b = li.b;
      ph1.lins.push_back(std::move(e));
    }
    ph1.lower.resize(ne);
    ph1.upper.resize(ne);
    ph1.lower.head(n) = inst.lower;
    ph1.upper.head(n) = inst.upper;
    ph1.lower[n] = -2.0 * res_scale;
    ph1.upper[n] = maxres + res_scale;

    Vector z(ne);
    z.head(n) = y;
    z[n] = maxres + 0.5 * res_scale;

    auto strictly_ok = [&](const Vector& cur) {
      double mr = -kInf;
      for (const auto& g : inst.constraints) mr = std::max(mr, g.eval(Vector(cur.head(n))));
      return mr < -1e-10 * res_scale;
    };
    const BarrierOutcome ph = barrier_minimize(ph1, z, 1e-9 * res_scale, 48, strictly_ok);
    if (ph.status.kind == SolveKind::NumericalFailure) {
      res.status = ph.status;
      return res;
    }
    y = ph.y.head(n);
    maxres = -kInf;
    for (const auto& g : inst.constraints) maxres = std::max(maxres, g.eval(y));
    if (maxres >= 0.0) {
      std::ostringstream msg;
      msg << "phase-1 minimum residual " << maxres << " cannot reach below zero";
      res.status = {SolveKind::Infeasible, msg.str()};
      return res;
    }
  }

  BarrierProblem main;
  main.objective = inst.objective;
  main.quads = inst.constraints;
  main.lins = inst.linear_ineqs;
  main.lower = inst.lower;
  main.upper = inst.upper;

  const BarrierOutcome bo = barrier_minimize(main, y, tol, max_iter);
  res.y = bo.y;
  res.value = inst.objective.eval(bo.y);
  res.barrier_outer_steps = bo.outer;
  res.status = bo.status;

  // Scaled KKT stationarity residual with the barrier multipliers at the
  // final centering parameter.
  Vector g;
  Matrix h;
  main.grad_hess(bo.t_final, bo.y, g, h);
  const Vector grad0 = inst.objective.gradient(bo.y);
  res.kkt_residual = (g / bo.t_final).norm() / (1.0 + grad0.norm());
  return res;
}

}  // namespace scobb
