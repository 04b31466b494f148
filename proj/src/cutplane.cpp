#include "scobb/cutplane.hpp"

#include "scobb/simplex.hpp"
#include "scobb/triangle2d.hpp"

#include <cmath>

namespace scobb {

namespace {

// The combined quadratic Q0 + t1*Q1 + t2*Q2 is block-diagonal per asset in
// the (y1_i, y2_i) coordinate pair; assemble the 2x2 pieces directly.
std::pair<double, Vector> lagrangian_min_impl(const QcqpInstance& inst,
                                              const LiquidationParams& p, double t1, double t2) {
  const Eigen::Index m = p.m;
  const Matrix& q0 = inst.objective.Q.mat();
  const Matrix& q1 = inst.constraints[0].Q.mat();
  const Matrix& q2 = inst.constraints[1].Q.mat();
  const Vector lin = inst.objective.q + t1 * inst.constraints[0].q + t2 * inst.constraints[1].q;
  double theta = inst.objective.c + t1 * inst.constraints[0].c + t2 * inst.constraints[1].c;

  Vector y(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Triangle2dProblem sub;
    sub.H(0, 0) = q0(i, i) + t1 * q1(i, i) + t2 * q2(i, i);
    sub.H(1, 1) = q0(m + i, m + i) + t1 * q1(m + i, m + i) + t2 * q2(m + i, m + i);
    sub.H(0, 1) = sub.H(1, 0) = q0(i, m + i) + t1 * q1(i, m + i) + t2 * q2(i, m + i);
    sub.b = {-lin[i], -lin[m + i]};
    sub.x0i = p.x0[i];
    const Triangle2dResult r = triangle2d_min(sub);
    y[i] = r.y[0];
    y[m + i] = r.y[1];
    theta += r.value;
  }
  return {theta, y};
}

}  // namespace

std::pair<double, Vector> lagrangian_min(const LiquidationParams& p, double t1, double t2) {
  if (t1 < 0.0 || t2 < 0.0) {
    throw std::invalid_argument("lagrangian_min: multipliers must be nonnegative");
  }
  return lagrangian_min_impl(build_qcqp(p), p, t1, t2);
}

RestrictedDual restricted_dual(const std::vector<Cut>& cuts, double bound) {
  if (cuts.empty()) throw std::invalid_argument("restricted_dual: need at least one cut");
  // Variables (z, t1, t2); z free.
  std::vector<LinearIneq> rows;
  for (const auto& c : cuts) {
    LinearIneq r;
    r.a.resize(3);
    r.a << 1.0, -c.gval, -c.hval;
    r.b = c.fval;
    rows.push_back(std::move(r));
  }
  for (int j = 1; j <= 2; ++j) {
    LinearIneq r;
    r.a = Vector::Zero(3);
    r.a[j] = 1.0;
    r.b = bound;
    rows.push_back(std::move(r));
  }
  Vector obj(3);
  obj << 1.0, 0.0, 0.0;
  const LpResult lp = solve_lp(obj, rows, {1, 2});

  RestrictedDual out;
  out.status = lp.status;
  if (!lp.status.ok()) {
    out.status.kind = SolveKind::NumericalFailure;
    out.status.message = "restricted dual LP: " + std::string(to_string(lp.status.kind)) +
                         (lp.status.message.empty() ? "" : " (" + lp.status.message + ")");
    return out;
  }
  out.z = lp.x[0];
  out.t1 = lp.x[1];
  out.t2 = lp.x[2];
  return out;
}

CutPlaneResult run_cutplane(const LiquidationParams& p, double tol, int max_iter, double bound) {
  const QcqpInstance inst = build_qcqp(p);
  CutPlaneResult res;

  Vector y0(2 * p.m);
  y0.head(p.m) = -0.5 * p.x0;
  y0.tail(p.m) = -0.5 * p.x0;
  if (!is_feasible(inst, y0, 1e-12)) {
    throw std::invalid_argument(
        "run_cutplane: half-sale start point is infeasible; the model assumptions do not hold");
  }

  auto add_cut = [&](std::vector<Cut>& cuts, const Vector& y) {
    Cut c;
    c.fval = inst.objective.eval(y);
    c.gval = inst.constraints[0].eval(y);
    c.hval = inst.constraints[1].eval(y);
    c.y = y;
    cuts.push_back(std::move(c));
    return cuts.back();
  };

  std::vector<Cut> cuts;
  const Cut first = add_cut(cuts, y0);
  double best_f = first.fval;
  res.feasible_point = y0;

  for (int k = 1; k <= max_iter; ++k) {
    const RestrictedDual rd = restricted_dual(cuts, bound);
    if (!rd.status.ok()) {
      res.status = rd.status;
      res.iterations = k;
      return res;
    }
    const auto [theta, yk] = lagrangian_min_impl(inst, p, rd.t1, rd.t2);
    res.trace.emplace_back(rd.z, theta);
    res.t1 = rd.t1;
    res.t2 = rd.t2;
    res.dual_value = theta;
    res.iterations = k;

    const Cut c = add_cut(cuts, yk);
    if (c.gval <= 0.0 && c.hval <= 0.0 && c.fval < best_f) {
      best_f = c.fval;
      res.feasible_point = yk;
    }
    if (rd.z <= theta + tol * (1.0 + std::abs(rd.z))) {
      res.status = {SolveKind::Optimal, ""};
      return res;
    }
  }
  res.status = {SolveKind::IterLimit, "cut-plane iteration limit reached"};
  return res;
}

}  // namespace scobb
