// Cutting-plane maximization of the Lagrangian dual of the liquidation QCQP:
// the two quadratic constraints are dualized, the Lagrangian subproblem
// splits into one closed-form triangle problem per asset, and a restricted
// dual LP over the accumulated cuts is re-solved each round. Feasible
// subproblem minimizers are collected as starting points for SCO.
#pragma once

#include "scobb/liquidation.hpp"
#include "scobb/types.hpp"

#include <optional>

namespace scobb {

struct Cut {
  double fval = 0.0;
  double gval = 0.0;
  double hval = 0.0;
  Vector y;
};

struct CutPlaneResult {
  double t1 = 0.0;
  double t2 = 0.0;
  double dual_value = 0.0;  // theta(t1, t2) at termination
  std::optional<Vector> feasible_point;
  int iterations = 0;
  std::vector<std::pair<double, double>> trace;  // (z^k, theta^k)
  SolveStatus status;
};

/// theta(t1, t2) = min over the domain D of f + t1*g + t2*h, computed per
/// asset via triangle2d_min, plus the combined constant term. Also returns
/// the concatenated minimizer.
std::pair<double, Vector> lagrangian_min(const LiquidationParams& p, double t1, double t2);

struct RestrictedDual {
  double z = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  SolveStatus status;
};

/// max z s.t. z <= fval_i + t1*gval_i + t2*hval_i, 0 <= t1, t2 <= bound.
RestrictedDual restricted_dual(const std::vector<Cut>& cuts, double bound);

CutPlaneResult run_cutplane(const LiquidationParams& p, double tol = 1e-9, int max_iter = 200,
                            double bound = 1e6);

}  // namespace scobb
