// Two-period portfolio deleveraging model: a firm holding x0 > 0 of m assets
// sells y1 in period one and y2 in period two (both <= 0) under linear price
// impact, a leverage cap in each period, and a Bernoulli equity withdrawal of
// size delta (probability pi) before period two. Maximizing expected final
// equity is a 2m-variable QCQP with two quadratic constraints.
#pragma once

#include "scobb/types.hpp"

#include <optional>

namespace scobb {

struct LiquidationParams {
  int m = 0;        // asset count
  Vector lambda;    // temporary impact (diagonal of Lambda), > 0
  Vector gamma;     // permanent impact (diagonal of Gamma), > 0
  Vector p0;        // initial prices
  Vector x0;        // initial holdings, > 0
  double e0 = 0.0;  // initial equity
  double l0 = 0.0;  // initial liabilities
  double rho1 = 0.0;
  double rho2 = 0.0;
  double pi = 0.0;     // shock probability
  double delta = 0.0;  // shock size (equity units)

  /// Throws std::invalid_argument naming the violated requirement.
  void validate() const;
};

struct PeriodState {
  double e = 0.0;
  double l = 0.0;
  double leverage = 0.0;        // l/e, meaningful only when leverage_defined
  bool leverage_defined = false;

  static PeriodState make(double e, double l) {
    PeriodState s;
    s.e = e;
    s.l = l;
    s.leverage_defined = e > 0.0;
    s.leverage = s.leverage_defined ? l / e : 0.0;
    return s;
  }
};

/// Assembles the 2m-variable min-form instance: objective (Q0, q0, c0) with
/// f(y) = -E[e2], constraint 0 = l1 - rho1*e1, constraint 1 = l2 - rho2*e2
/// at worst-case shock, box -x0 <= y1, y2 <= 0 and per-asset y1 + y2 >= -x0.
QcqpInstance build_qcqp(const LiquidationParams& p);

PeriodState first_period_state(const LiquidationParams& p, const Vector& y1);
PeriodState second_period_state(const LiquidationParams& p, const Vector& y, double shock);

/// (1 - pi) * e1(y1) + pi * e2(y, delta).
double expected_equity(const LiquidationParams& p, const Vector& y);

struct ShockCapacity {
  double delta_max = 0.0;
  bool closed_form_valid = false;  // all assets pass one of the sign-case conditions
  double g_star = 0.0;             // maximized cash-generation value G*
};

/// Largest withdrawal the second leverage constraint can absorb:
/// delta_max = (rho2*e0 - l0 + G*) / (rho2 + 1). When the per-asset
/// sufficient conditions hold, G* = G(-x0/2, -x0/2) in closed form;
/// otherwise G is maximized on a feasibility-filtered grid (m <= 2 only).
ShockCapacity shock_capacity(const LiquidationParams& p, double grid_resolution = 1e-3);

struct ActivityReport {
  double residual = 0.0;        // |rho2*e2 - l2|
  double leverage = 0.0;        // l2/e2 when defined
  bool leverage_defined = false;
  bool active = false;          // |rho2*e2 - l2| <= tol*(1 + |l2|)
};

/// Checks whether the second leverage constraint binds at y (worst-case
/// shock), the optimality property the model predicts for solver output.
ActivityReport check_optimality_activity(const LiquidationParams& p, const Vector& y, double tol);

struct AssumptionReport {
  bool leverage_crisis = false;      // rho1*e0 - l0 < 0
  double leverage_crisis_value = 0.0;
  bool half_sale_recovers = false;   // rho1*e1 - l1 > 0 at y1 = -x0/2
  double half_sale_value = 0.0;
  bool slater = false;               // strictly feasible interior point found
  std::optional<Vector> slater_point;

  bool all() const { return leverage_crisis && half_sale_recovers && slater; }
};

AssumptionReport check_assumptions(const LiquidationParams& p);

}  // namespace scobb
