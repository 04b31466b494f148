#include "scobb/sco.hpp"

#include <algorithm>
#include <cmath>

namespace scobb {

namespace {

QuadForm linearize_minus(const QuadForm& form, const SpectralSplit& split, const Vector& u) {
  if (!split.has_minus()) return form;
  const Matrix& mn = split.minus.mat();
  return QuadForm(split.plus, Vector(form.q - 2.0 * (mn * u)), form.c + u.dot(mn * u));
}

}  // namespace

QcqpInstance build_upper_relaxation(const DcInstance& dc, const Vector& u) {
  if (u.size() != dc.base.dim()) {
    throw std::invalid_argument("build_upper_relaxation: expansion point has wrong length");
  }
  QcqpInstance rel = dc.base;
  rel.objective = linearize_minus(dc.base.objective, dc.objective_split(), u);
  for (std::size_t j = 0; j < dc.base.constraints.size(); ++j) {
    rel.constraints[j] = linearize_minus(dc.base.constraints[j], dc.constraint_split(j), u);
  }
  return rel;
}

ScoResult run_sco(const DcInstance& dc, const Vector& y0, double eps, int max_iter,
                  double feas_tol) {
  if (!is_feasible(dc.base, y0, feas_tol)) {
    throw std::invalid_argument("run_sco: starting point is not feasible for the base instance");
  }
  const double tol_inner = std::min(1e-8, eps / 10.0);

  ScoResult out;
  Vector u = y0;
  out.y = y0;
  out.value = dc.base.objective.eval(y0);

  for (int k = 0; k < max_iter; ++k) {
    const QcqpInstance rel = build_upper_relaxation(dc, u);
    const ConvexSolveResult inner = solve_convex_qcqp(rel, tol_inner);
    if (!inner.status.ok()) {
      out.trace.status = inner.status;
      out.trace.status.message = "inner solve failed at step " + std::to_string(k) +
                                 (inner.status.message.empty() ? "" : ": " + inner.status.message);
      return out;
    }
    const double step = (inner.y - u).norm();
    u = inner.y;
    out.y = inner.y;
    out.value = dc.base.objective.eval(inner.y);
    out.trace.iterates.push_back({inner.y, out.value, step});
    if (step < eps) {
      out.trace.status = {SolveKind::Optimal, ""};
      return out;
    }
  }
  out.trace.status = {SolveKind::IterLimit, "SCO iteration limit reached"};
  return out;
}

}  // namespace scobb
