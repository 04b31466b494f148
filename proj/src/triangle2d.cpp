#include "scobb/triangle2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace scobb {

namespace {

double clamp_to(double v, double lo, double hi) { return std::max(lo, std::min(hi, v)); }

// Degenerate edge curvature: the stationary candidate is skipped and the
// endpoints (already enumerated) cover the edge.
constexpr double kCurvatureFloor = 1e-14;

}  // namespace

Triangle2dResult triangle2d_min(const Triangle2dProblem& p) {
  if (!(p.x0i > 0.0)) throw std::invalid_argument("triangle2d_min: x0i must be positive");
  const double h11 = p.H(0, 0);
  const double h22 = p.H(1, 1);
  const double h12 = 0.5 * (p.H(0, 1) + p.H(1, 0));
  const double b1 = p.b[0], b2 = p.b[1];
  const double x = p.x0i;

  auto nu = [&](double y1, double y2) {
    return h11 * y1 * y1 + 2.0 * h12 * y1 * y2 + h22 * y2 * y2 - b1 * y1 - b2 * y2;
  };

  // Candidate order is load-bearing: ties go to the earliest candidate.
  std::array<Eigen::Vector2d, 7> cand;
  int count = 0;
  cand[count++] = {0.0, 0.0};  // O
  cand[count++] = {-x, 0.0};   // A
  cand[count++] = {0.0, -x};   // B

  if (std::abs(2.0 * h11) > kCurvatureFloor) {
    cand[count++] = {clamp_to(b1 / (2.0 * h11), -x, 0.0), 0.0};  // edge OA
  }
  if (std::abs(2.0 * h22) > kCurvatureFloor) {
    cand[count++] = {0.0, clamp_to(b2 / (2.0 * h22), -x, 0.0)};  // edge OB
  }
  const double ab_curv = 2.0 * (h11 + h22 - 2.0 * h12);
  if (std::abs(ab_curv) > kCurvatureFloor) {
    const double y_exp = (b1 - b2 + 2.0 * x * (h12 - h22)) / ab_curv;
    const double y1 = clamp_to(y_exp, -x, 0.0);
    cand[count++] = {y1, -x - y1};  // edge AB
  }
  // Interior stationary point 0.5*H^{-1}b, admitted only for H > 0 and only
  // when it lies in the closed triangle.
  const double det = h11 * h22 - h12 * h12;
  if (h11 > 0.0 && det > 0.0) {
    const double y1 = 0.5 * (h22 * b1 - h12 * b2) / det;
    const double y2 = 0.5 * (h11 * b2 - h12 * b1) / det;
    if (y1 <= 0.0 && y2 <= 0.0 && y1 + y2 >= -x) {
      cand[count++] = {y1, y2};
    }
  }

  Triangle2dResult best;
  best.y = cand[0];
  best.value = nu(cand[0][0], cand[0][1]);
  for (int i = 1; i < count; ++i) {
    const double v = nu(cand[i][0], cand[i][1]);
    if (v < best.value) {
      best.value = v;
      best.y = cand[i];
    }
  }
  return best;
}

}  // namespace scobb
