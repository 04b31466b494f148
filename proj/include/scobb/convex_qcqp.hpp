// Convex QCQP solver: log-barrier interior-point method with damped Newton
// centering and golden-section line search. Phase 1 finds a strictly
// feasible point by minimizing the maximum quadratic-constraint residual
// over the (box + linear) polytope interior.
#pragma once

#include "scobb/types.hpp"

namespace scobb {

struct ConvexSolveResult {
  Vector y;
  double value = 0.0;
  SolveStatus status;
  double kkt_residual = 0.0;  // stationarity residual, scaled by 1 + |gradient|
  int barrier_outer_steps = 0;
};

/// Requires the objective and every constraint matrix PSD within 1e-8
/// (NumericalFailure otherwise) and a bounded box. `tol` bounds both the
/// duality gap at exit and the scaled KKT stationarity residual.
ConvexSolveResult solve_convex_qcqp(const QcqpInstance& inst, double tol = 1e-8, int max_iter = 64);

}  // namespace scobb
