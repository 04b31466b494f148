// Small dense LP solver (two-phase tableau simplex, Bland's rule):
//   maximize  c'x
//   s.t.      a_k'x <= b_k
//             x_i >= 0 for i in `nonneg`, remaining variables free.
#pragma once

#include "scobb/types.hpp"

namespace scobb {

struct LpResult {
  Vector x;
  double value = 0.0;
  SolveStatus status;
};

LpResult solve_lp(const Vector& objective, const std::vector<LinearIneq>& ineqs,
                  const std::vector<Eigen::Index>& nonneg);

}  // namespace scobb
