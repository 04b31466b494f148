#include "scobb/lowerbound.hpp"

#include <cmath>

namespace scobb {

namespace {

void check_box(const DcInstance& dc, const Box& box) {
  const Eigen::Index n = dc.base.dim();
  if (box.lower.size() != n || box.upper.size() != n) {
    throw std::invalid_argument("box bounds must have instance dimension");
  }
  if ((box.lower.array() > box.upper.array()).any()) {
    throw std::invalid_argument("box is empty");
  }
}

// Affine overestimator of x'Ax on [l, u] for PSD A, with linear part
// A(l + u) and the smaller of two valid constants:
//   - per-term envelope: secants on the squares, averaged McCormick bounds
//     on each product y_i*y_j, picked over- or under-side by the sign of
//     A_ij (for elementwise-nonnegative A this reduces to -u'Al);
//   - ball bound around the box center m: -m'Am + (1/4)||A||_2 ||u - l||^2,
//     which caps the overestimation gap at (1/4)||A||_2 ||u - l||^2.
// The plain -u'Al constant alone fails when A has negative off-diagonal
// entries (mixed box vertices break the concavity argument behind it).
double over_constant(const SymMatrix& A, const Vector& l, const Vector& u, double norm2) {
  const Matrix& a = A.mat();
  const Eigen::Index n = A.n();
  double mixed = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    mixed += a(i, i) * l[i] * u[i];
    for (Eigen::Index j = i + 1; j < n; ++j) {
      mixed += (a(i, j) >= 0.0) ? a(i, j) * (u[i] * l[j] + l[i] * u[j])
                                : a(i, j) * (l[i] * l[j] + u[i] * u[j]);
    }
  }
  const Vector m = 0.5 * (l + u);
  const double ball = -m.dot(a * m) + 0.25 * norm2 * (u - l).squaredNorm();
  return std::min(-mixed, ball);
}

QuadForm minorize(const QuadForm& form, const SpectralSplit& split, const Box& box) {
  if (!split.has_minus()) return form;
  const Matrix& mn = split.minus.mat();
  const double cst = over_constant(split.minus, box.lower, box.upper, spectral_norm(split.minus));
  return QuadForm(split.plus, Vector(form.q - mn * (box.upper + box.lower)), form.c - cst);
}

}  // namespace

std::pair<Vector, double> quad_overestimator(const SymMatrix& A, const Vector& yl,
                                             const Vector& yu) {
  if (A.n() != yl.size() || A.n() != yu.size()) {
    throw std::invalid_argument("quad_overestimator: dimension mismatch");
  }
  if ((yl.array() > yu.array()).any()) {
    throw std::invalid_argument("quad_overestimator: yl > yu in some coordinate");
  }
  const EigenDecomposition ed = jacobi_eigs(A);
  if (ed.values.minCoeff() < -1e-8 * (1.0 + A.max_abs())) {
    throw std::invalid_argument("quad_overestimator: matrix must be PSD");
  }
  const double norm2 = ed.values.cwiseAbs().maxCoeff();
  return {Vector(A.mat() * (yu + yl)), over_constant(A, yl, yu, norm2)};
}

BilinearBounds mccormick_bilinear(double xl, double xu, double yl, double yu) {
  if (xl > xu || yl > yu) throw std::invalid_argument("mccormick_bilinear: empty rectangle");
  BilinearBounds b;
  b.under1 = {yl, xl, -xl * yl};
  b.under2 = {yu, xu, -xu * yu};
  b.over1 = {yl, xu, -xu * yl};
  b.over2 = {yu, xl, -xl * yu};
  return b;
}

BoxRelaxation build_lower_relaxation_mccormick(const DcInstance& dc, const Box& box) {
  check_box(dc, box);
  BoxRelaxation rel;
  rel.kind = RelaxationKind::McCormick;
  rel.box = box;
  rel.instance = dc.base;
  rel.instance.objective = minorize(dc.base.objective, dc.objective_split(), box);
  for (std::size_t j = 0; j < dc.base.constraints.size(); ++j) {
    rel.instance.constraints[j] = minorize(dc.base.constraints[j], dc.constraint_split(j), box);
  }
  rel.instance.lower = box.lower;
  rel.instance.upper = box.upper;
  return rel;
}

BoxRelaxation build_lower_relaxation_secant(const DcInstance& dc, const Box& box) {
  check_box(dc, box);
  const Eigen::Index n = dc.base.dim();
  const Eigen::Index ne = 2 * n;  // (y, t)

  auto extend = [&](const QuadForm& form, const SpectralSplit& split) {
    Matrix q = Matrix::Zero(ne, ne);
    q.topLeftCorner(n, n) = split.plus.mat();
    Vector lin = Vector::Zero(ne);
    lin.head(n) = form.q;
    const double lam = split.has_minus() ? spectral_norm(split.minus) : 0.0;
    lin.tail(n).setConstant(-lam);
    return QuadForm(SymMatrix(q), lin, form.c);
  };

  BoxRelaxation rel;
  rel.kind = RelaxationKind::Secant;
  rel.aux_count = n;
  rel.box = box;

  QcqpInstance& inst = rel.instance;
  inst.objective = extend(dc.base.objective, dc.objective_split());
  for (std::size_t j = 0; j < dc.base.constraints.size(); ++j) {
    inst.constraints.push_back(extend(dc.base.constraints[j], dc.constraint_split(j)));
  }
  // y_i^2 - t_i <= 0 plus the secant cap t_i <= (l_i + u_i) y_i - l_i u_i.
  for (Eigen::Index i = 0; i < n; ++i) {
    Matrix q = Matrix::Zero(ne, ne);
    q(i, i) = 1.0;
    Vector lin = Vector::Zero(ne);
    lin[n + i] = -1.0;
    inst.constraints.emplace_back(SymMatrix(q), lin, 0.0);
  }
  for (const auto& parent : dc.base.linear_ineqs) {
    LinearIneq li;
    li.a = Vector::Zero(ne);
    li.a.head(n) = parent.a;
    li.b = parent.b;
    inst.linear_ineqs.push_back(std::move(li));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    LinearIneq li;
    li.a = Vector::Zero(ne);
    li.a[n + i] = 1.0;
    li.a[i] = -(box.lower[i] + box.upper[i]);
    li.b = -box.lower[i] * box.upper[i];
    inst.linear_ineqs.push_back(std::move(li));
  }
  inst.lower.resize(ne);
  inst.upper.resize(ne);
  inst.lower.head(n) = box.lower;
  inst.upper.head(n) = box.upper;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = box.lower[i], u = box.upper[i];
    const double tmin = (l <= 0.0 && u >= 0.0) ? 0.0 : std::min(l * l, u * u);
    inst.lower[n + i] = tmin;
    inst.upper[n + i] = std::max(l * l, u * u) + 1e-12;
  }
  return rel;
}

GapBound gap_bound(const DcInstance& dc, const Box& box) {
  check_box(dc, box);
  const double w2 = (box.upper - box.lower).squaredNorm();
  GapBound g;
  g.objective_gap = 0.25 * spectral_norm(dc.objective_split().minus) * w2;
  g.constraint_gaps.resize(static_cast<Eigen::Index>(dc.base.constraints.size()));
  for (std::size_t j = 0; j < dc.base.constraints.size(); ++j) {
    g.constraint_gaps[static_cast<Eigen::Index>(j)] =
        0.25 * spectral_norm(dc.constraint_split(j).minus) * w2;
  }
  return g;
}

}  // namespace scobb
