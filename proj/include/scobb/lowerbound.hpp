// Convex lower-bounding relaxations over a box. The default replaces each
// concave part -y'Q-y by the affine McCormick-style minorant derived from
// the overestimator x'Ax <= (xu + xl)'Ax - xu'A xl of a PSD quadratic form;
// the alternative bounds the concave part through lambda_max and per
// coordinate secant envelopes with auxiliary variables t_i >= y_i^2.
#pragma once

#include "scobb/spectral.hpp"
#include "scobb/types.hpp"

namespace scobb {

struct Box {
  Vector lower;
  Vector upper;

  double max_width() const { return (upper - lower).maxCoeff(); }
};

enum class RelaxationKind { McCormick, Secant };

struct BoxRelaxation {
  QcqpInstance instance;  // convex
  Box box;
  RelaxationKind kind = RelaxationKind::McCormick;
  Eigen::Index aux_count = 0;  // appended auxiliary variables (Secant only)
};

/// Affine majorant of x'Ax on [yl, yu] for PSD A, returned as coefficients
/// of linear'x + constant. Throws if A is not PSD within 1e-8.
std::pair<Vector, double> quad_overestimator(const SymMatrix& A, const Vector& yl,
                                             const Vector& yu);

/// McCormick envelope of omega = x*y on a rectangle: two underestimators
/// and two overestimators, each as (coef_x, coef_y, constant).
struct BilinearBounds {
  struct Affine {
    double cx = 0.0, cy = 0.0, c0 = 0.0;
    double eval(double x, double y) const { return cx * x + cy * y + c0; }
  };
  Affine under1, under2, over1, over2;
};

BilinearBounds mccormick_bilinear(double xl, double xu, double yl, double yu);

BoxRelaxation build_lower_relaxation_mccormick(const DcInstance& dc, const Box& box);
BoxRelaxation build_lower_relaxation_secant(const DcInstance& dc, const Box& box);

struct GapBound {
  double objective_gap = 0.0;
  Vector constraint_gaps;
};

/// Worst-case relaxation gaps (1/4)*||Q-||_2*||yu - yl||_2^2 for the
/// objective and each constraint.
GapBound gap_bound(const DcInstance& dc, const Box& box);

}  // namespace scobb
