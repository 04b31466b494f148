// Sequential convex optimization: at the current point u, each concave part
// -y'Q-y is replaced by its supporting hyperplane at u, giving a convex
// inner approximation whose feasible set sits inside the original one. The
// iteration descends monotonically to a feasible local solution.
#pragma once

#include "scobb/convex_qcqp.hpp"
#include "scobb/spectral.hpp"
#include "scobb/types.hpp"

namespace scobb {

struct ScoIterate {
  Vector y;
  double objective = 0.0;
  double step = 0.0;  // ||u_{k+1} - u_k||
};

struct ScoTrace {
  std::vector<ScoIterate> iterates;
  SolveStatus status;
};

struct ScoResult {
  Vector y;
  double value = 0.0;
  ScoTrace trace;
};

/// Convex majorant instance at expansion point u: every quadratic keeps its
/// PSD plus-part and linearizes the minus-part, tight at y = u.
QcqpInstance build_upper_relaxation(const DcInstance& dc, const Vector& u);

/// Iterates u <- argmin of the relaxation at u until the step drops below
/// eps. `y0` must be feasible for the base instance within feas_tol.
ScoResult run_sco(const DcInstance& dc, const Vector& y0, double eps = 1e-6, int max_iter = 100,
                  double feas_tol = 1e-9);

}  // namespace scobb
