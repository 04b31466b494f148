#include "scobb/liquidation.hpp"

#include <cmath>
#include <sstream>

namespace scobb {

void LiquidationParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("LiquidationParams: " + what); };
  if (m < 1) fail("m must be >= 1");
  const auto n = static_cast<Eigen::Index>(m);
  if (lambda.size() != n || gamma.size() != n || p0.size() != n || x0.size() != n) {
    fail("lambda, gamma, p0, x0 must all have length m");
  }
  if (!(lambda.array() > 0.0).all()) fail("all components of lambda must be positive");
  if (!(gamma.array() > 0.0).all()) fail("all components of gamma must be positive");
  if (!(x0.array() > 0.0).all()) fail("all components of x0 must be positive");
  if (pi < 0.0 || pi > 1.0) fail("pi must lie in [0, 1]");
  if (delta < 0.0) fail("delta must be >= 0");
  if (!(rho1 * e0 - l0 < 0.0)) {
    std::ostringstream msg;
    msg << "initial leverage must violate the first-period cap: rho1*e0 - l0 = "
        << rho1 * e0 - l0 << " must be < 0";
    fail(msg.str());
  }
}

QcqpInstance build_qcqp(const LiquidationParams& p) {
  p.validate();
  const Eigen::Index m = p.m;
  const Eigen::Index n = 2 * m;
  const Vector gx0 = p.gamma.cwiseProduct(p.x0);  // Gamma * x0

  Matrix Q0 = Matrix::Zero(n, n);
  Matrix Q1 = Matrix::Zero(n, n);
  Matrix Q2 = Matrix::Zero(n, n);
  Vector q0(n), q1(n), q2(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double lam = p.lambda[i], gam = p.gamma[i];
    const double a = lam - 0.5 * gam;  // Lambda - Gamma/2
    const double b = lam + 0.5 * gam;  // Lambda + Gamma/2

    Q0(i, i) = a;
    Q0(m + i, m + i) = p.pi * a;
    Q0(i, m + i) = Q0(m + i, i) = -0.5 * p.pi * gam;

    Q1(i, i) = p.rho1 * a + b;

    Q2(i, i) = Q2(m + i, m + i) = b + p.rho2 * a;
    Q2(i, m + i) = Q2(m + i, i) = 0.5 * (1.0 - p.rho2) * gam;

    q0[i] = -gx0[i];
    q0[m + i] = -p.pi * gx0[i];
    q1[i] = p.p0[i] - p.rho1 * gx0[i];
    q1[m + i] = 0.0;
    q2[i] = q2[m + i] = p.p0[i] - p.rho2 * gx0[i];
  }
  const double c0 = p.pi * p.delta - p.e0;
  const double c1 = p.l0 - p.rho1 * p.e0;
  const double c2 = p.l0 - p.rho2 * p.e0 + (p.rho2 + 1.0) * p.delta;

  QcqpInstance inst;
  inst.objective = QuadForm(SymMatrix(Q0), q0, c0);
  inst.constraints.emplace_back(SymMatrix(Q1), q1, c1);
  inst.constraints.emplace_back(SymMatrix(Q2), q2, c2);
  inst.lower.setZero(n);
  inst.upper.setZero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    inst.lower[i] = inst.lower[m + i] = -p.x0[i];
  }
  // Per-asset total-sale cap: -(y1_i + y2_i) <= x0_i.
  for (Eigen::Index i = 0; i < m; ++i) {
    LinearIneq li;
    li.a.setZero(n);
    li.a[i] = -1.0;
    li.a[m + i] = -1.0;
    li.b = p.x0[i];
    inst.linear_ineqs.push_back(std::move(li));
  }
  return inst;
}

PeriodState first_period_state(const LiquidationParams& p, const Vector& y1) {
  if (y1.size() != p.m) throw std::invalid_argument("first_period_state: y1 must have length m");
  const Vector lam_minus = p.lambda - 0.5 * p.gamma;
  const Vector lam_plus = p.lambda + 0.5 * p.gamma;
  const double e1 = p.e0 + p.x0.cwiseProduct(p.gamma).dot(y1) - y1.dot(lam_minus.cwiseProduct(y1));
  const double l1 = p.l0 + p.p0.dot(y1) + y1.dot(lam_plus.cwiseProduct(y1));
  return PeriodState::make(e1, l1);
}

PeriodState second_period_state(const LiquidationParams& p, const Vector& y, double shock) {
  const Eigen::Index m = p.m;
  if (y.size() != 2 * m) throw std::invalid_argument("second_period_state: y must have length 2m");
  const Vector y1 = y.head(m), y2 = y.tail(m);
  const Vector gx0 = p.gamma.cwiseProduct(p.x0);
  const Vector lam_minus = p.lambda - 0.5 * p.gamma;
  const Vector lam_plus = p.lambda + 0.5 * p.gamma;

  // Block quadratics [[L +- G/2, +-G/2], [+-G/2, L +- G/2]] expanded per asset.
  double quad_l = 0.0, quad_e = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    quad_l += lam_plus[i] * (y1[i] * y1[i] + y2[i] * y2[i]) + p.gamma[i] * y1[i] * y2[i];
    quad_e += lam_minus[i] * (y1[i] * y1[i] + y2[i] * y2[i]) - p.gamma[i] * y1[i] * y2[i];
  }
  const double l2 = p.l0 + shock + p.p0.dot(y1 + y2) + quad_l;
  const double e2 = p.e0 - shock + gx0.dot(y1 + y2) - quad_e;
  return PeriodState::make(e2, l2);
}

double expected_equity(const LiquidationParams& p, const Vector& y) {
  if (y.size() != 2 * static_cast<Eigen::Index>(p.m)) {
    throw std::invalid_argument("expected_equity: y must have length 2m");
  }
  const PeriodState s1 = first_period_state(p, y.head(p.m));
  const PeriodState s2 = second_period_state(p, y, p.delta);
  return (1.0 - p.pi) * s1.e + p.pi * s2.e;
}

namespace {

// Cash-generation objective G(y1, y2) of the shock-capacity problem:
// rho2*e2 - l2 at zero shock minus its value at no trade.
double eval_g(const LiquidationParams& p, const Vector& y1, const Vector& y2) {
  double val = 0.0;
  for (Eigen::Index i = 0; i < p.m; ++i) {
    const double t = p.rho2 * (p.lambda[i] - 0.5 * p.gamma[i]) + (p.lambda[i] + 0.5 * p.gamma[i]);
    const double s = 0.5 * (1.0 - p.rho2) * p.gamma[i];
    const double lin = p.rho2 * p.gamma[i] * p.x0[i] - p.p0[i];
    val += lin * (y1[i] + y2[i]);
    val -= t * (y1[i] * y1[i] + y2[i] * y2[i]) + 2.0 * s * y1[i] * y2[i];
  }
  return val;
}

void require_half_sale_assumption(const LiquidationParams& p) {
  const double at_zero = p.rho1 * p.e0 - p.l0;
  if (!(at_zero < 0.0)) {
    std::ostringstream msg;
    msg << "shock_capacity: rho1*e1 - l1 at y1 = 0 must be < 0 (got " << at_zero << ")";
    throw std::invalid_argument(msg.str());
  }
  const PeriodState s = first_period_state(p, Vector(-0.5 * p.x0));
  const double at_half = p.rho1 * s.e - s.l;
  if (!(at_half > 0.0)) {
    std::ostringstream msg;
    msg << "shock_capacity: rho1*e1 - l1 at y1 = -x0/2 must be > 0 (got " << at_half << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ShockCapacity shock_capacity(const LiquidationParams& p, double grid_resolution) {
  p.validate();
  require_half_sale_assumption(p);

  // Per-asset sign cases on w = rho2*(lambda - gamma) + (lambda + gamma); the
  // price floor below makes y = (-x0/2, -x0/2) the maximizer of G.
  bool all_ok = true;
  for (Eigen::Index i = 0; i < p.m; ++i) {
    const double lam = p.lambda[i], gam = p.gamma[i], x = p.x0[i];
    const double w = p.rho2 * (lam - gam) + (lam + gam);
    bool ok;
    if (w > 0.0) {
      ok = p.p0[i] > (p.rho2 + 1.0) * lam * x + gam * x;
    } else if (w == 0.0) {
      ok = p.p0[i] > p.rho2 * gam * x;
    } else {
      ok = p.p0[i] > 0.5 * (p.rho2 + 1.0) * (lam + gam) * x;
    }
    all_ok = all_ok && ok;
  }

  ShockCapacity out;
  out.closed_form_valid = all_ok;
  if (all_ok) {
    const Vector half = -0.5 * p.x0;
    out.g_star = eval_g(p, half, half);
  } else {
    if (p.m > 2) {
      throw std::invalid_argument(
          "shock_capacity: sufficient conditions fail and the grid fallback is limited to m <= 2");
    }
    // Maximize G over y1 in [-x0, 0]^m and s = y1 + y2 in [-x0, 0]^m,
    // filtered by the first-period leverage constraint (a function of y1).
    double best = -std::numeric_limits<double>::infinity();
    const Eigen::Index m = p.m;
    std::vector<Eigen::Index> steps(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
      steps[static_cast<std::size_t>(i)] =
          std::max<Eigen::Index>(2, static_cast<Eigen::Index>(std::ceil(1.0 / grid_resolution)));
    }
    Vector y1(m), s(m);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(2 * m), 0);
    const Eigen::Index dims = 2 * m;
    while (true) {
      for (Eigen::Index i = 0; i < m; ++i) {
        y1[i] = -p.x0[i] + p.x0[i] * static_cast<double>(idx[static_cast<std::size_t>(i)]) /
                               static_cast<double>(steps[static_cast<std::size_t>(i)]);
        s[i] = -p.x0[i] + p.x0[i] * static_cast<double>(idx[static_cast<std::size_t>(m + i)]) /
                              static_cast<double>(steps[static_cast<std::size_t>(i)]);
      }
      const PeriodState st = first_period_state(p, y1);
      if (p.rho1 * st.e - st.l >= 0.0) {
        const double g = eval_g(p, y1, Vector(s - y1));
        if (g > best) best = g;
      }
      Eigen::Index d = 0;
      for (; d < dims; ++d) {
        auto& k = idx[static_cast<std::size_t>(d)];
        if (++k <= steps[static_cast<std::size_t>(d % m)]) break;
        k = 0;
      }
      if (d == dims) break;
    }
    if (!std::isfinite(best)) {
      throw std::runtime_error("shock_capacity: no grid point satisfies the first-period constraint");
    }
    out.g_star = best;
  }
  out.delta_max = (p.rho2 * p.e0 - p.l0 + out.g_star) / (p.rho2 + 1.0);
  return out;
}

ActivityReport check_optimality_activity(const LiquidationParams& p, const Vector& y, double tol) {
  const QcqpInstance inst = build_qcqp(p);
  if (!is_feasible(inst, y, tol)) {
    throw std::invalid_argument("check_optimality_activity: point is not feasible within tol");
  }
  const PeriodState s2 = second_period_state(p, y, p.delta);
  ActivityReport r;
  r.residual = std::abs(p.rho2 * s2.e - s2.l);
  r.leverage_defined = s2.leverage_defined;
  r.leverage = s2.leverage;
  r.active = r.residual <= tol * (1.0 + std::abs(s2.l));
  return r;
}

AssumptionReport check_assumptions(const LiquidationParams& p) {
  AssumptionReport rep;
  rep.leverage_crisis_value = p.rho1 * p.e0 - p.l0;
  rep.leverage_crisis = rep.leverage_crisis_value < 0.0;

  const PeriodState s = first_period_state(p, Vector(-0.5 * p.x0));
  rep.half_sale_value = p.rho1 * s.e - s.l;
  rep.half_sale_recovers = rep.half_sale_value > 0.0;

  // Strict-interior search: the box midpoint (= (-x0/2, -x0/2)) sits on the
  // total-sale hyperplane, so also try copies pulled toward the origin.
  QcqpInstance inst;
  try {
    inst = build_qcqp(p);
  } catch (const std::invalid_argument&) {
    return rep;  // parameters invalid; slater stays false
  }
  const Vector mid = 0.5 * (inst.lower + inst.upper);
  for (double scale : {1.0, 0.95, 0.9, 0.75, 0.5, 0.25}) {
    const Vector y = scale * mid;
    bool strict = (y.array() > inst.lower.array()).all() && (y.array() < inst.upper.array()).all();
    for (const auto& li : inst.linear_ineqs) strict = strict && (li.a.dot(y) < li.b);
    for (const auto& g : inst.constraints) strict = strict && (g.eval(y) < 0.0);
    if (strict) {
      rep.slater = true;
      rep.slater_point = y;
      break;
    }
  }
  return rep;
}

}  // namespace scobb
