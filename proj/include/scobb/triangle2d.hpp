// Closed-form minimizer of nu(y) = y'Hy - b'y over the triangle with
// vertices O = (0,0), A = (-x0i, 0), B = (0, -x0i): the per-asset Lagrangian
// subproblem of the cut-plane method. The minimum is found by evaluating a
// finite candidate set: the vertices, the clamped stationary point of each
// edge, and the interior stationary point when H is positive definite.
#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace scobb {

struct Triangle2dProblem {
  Eigen::Matrix2d H;  // symmetric
  Eigen::Vector2d b;
  double x0i = 1.0;   // triangle scale, > 0
};

struct Triangle2dResult {
  Eigen::Vector2d y;
  double value = 0.0;
};

Triangle2dResult triangle2d_min(const Triangle2dProblem& p);

}  // namespace scobb
