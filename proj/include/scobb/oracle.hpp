// Exhaustive grid search over the box, the independent verifier used by the
// acceptance tests. Limited to n <= 4.
#pragma once

#include "scobb/types.hpp"

namespace scobb {

struct OracleResult {
  Vector y;
  double value = 0.0;
  SolveStatus status;
  double resolution = 0.0;      // realized max grid step
  double feasibility_tol = 0.0; // Lipschitz-scaled constraint tolerance used
};

/// Best feasible grid point at roughly the requested per-coordinate step.
/// The feasibility filter tolerance scales with the constraint Lipschitz
/// constants so a grid neighbor of any feasible point passes.
OracleResult brute_force_oracle(const QcqpInstance& inst, double resolution);

/// Upper bound on sup ||grad|| of a quadratic form over the instance box.
double lipschitz_bound(const QuadForm& form, const Vector& lower, const Vector& upper);

}  // namespace scobb
