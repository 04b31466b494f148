// Shared fixtures and independent oracles for the test suites. Everything
// here stays out of the library: oracles must not share code with the
// implementation paths they check.
#pragma once

#include "scobb/liquidation.hpp"
#include "scobb/triangle2d.hpp"
#include "scobb/types.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace scobb::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline Matrix random_symmetric(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = uniform(rng, -scale, scale);
  return 0.5 * (m + m.transpose());
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

inline Matrix random_psd(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  const Matrix m = random_symmetric(rng, n, scale);
  return m * m.transpose() / scale;
}

/// Eigen's (QR-based) symmetric eigensolver: the independent route against
/// which the in-repo Jacobi decomposition is checked.
inline Eigen::SelfAdjointEigenSolver<Matrix> eigen_oracle(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m);
}

/// Random nonconvex instance with a guaranteed strictly feasible midpoint:
/// indefinite quadratics, constants shifted so the box midpoint has slack.
inline QcqpInstance random_nonconvex_instance(std::mt19937_64& rng, Eigen::Index n,
                                              int n_constraints) {
  QcqpInstance inst;
  inst.lower = random_vector(rng, n, -1.5, -0.5);
  inst.upper = random_vector(rng, n, 0.5, 1.5);
  const Vector mid = 0.5 * (inst.lower + inst.upper);
  inst.objective =
      QuadForm(SymMatrix(random_symmetric(rng, n)), random_vector(rng, n, -1.0, 1.0), 0.0);
  for (int j = 0; j < n_constraints; ++j) {
    QuadForm g(SymMatrix(random_symmetric(rng, n)), random_vector(rng, n, -1.0, 1.0), 0.0);
    g.c = -g.eval(mid) - uniform(rng, 0.3, 1.0);
    inst.constraints.push_back(std::move(g));
  }
  return inst;
}

/// Small hand-pinned liquidation parameters (valid under rho = 2).
inline LiquidationParams small_params() {
  LiquidationParams p;
  p.m = 1;
  p.lambda = Vector::Constant(1, 1.0);
  p.gamma = Vector::Constant(1, 0.5);
  p.x0 = Vector::Constant(1, 1.0);
  p.p0 = Vector::Constant(1, 4.0);
  p.e0 = 10.0;
  p.l0 = 100.0;
  p.rho1 = 2.0;
  p.rho2 = 2.0;
  p.pi = 0.3;
  p.delta = 0.1;
  return p;
}

/// Like small_params but with liabilities low enough that the half-sale
/// recovery assumption holds (rho1*e1 - l1 = 0.5125 > 0 at y1 = -x0/2).
inline LiquidationParams shock_params() {
  LiquidationParams p = small_params();
  p.l0 = 20.3;
  return p;
}

/// Expansion oracle for the period states: assembles the displayed block
/// matrices explicitly and evaluates them with dense products, an
/// independent route against the per-asset loops in the library.
struct StateOracle {
  double e1, l1, e2, l2;

  StateOracle(const LiquidationParams& p, const Vector& y, double shock) {
    const Eigen::Index m = p.m;
    const Matrix lam = p.lambda.asDiagonal();
    const Matrix gam = p.gamma.asDiagonal();
    const Vector y1 = y.head(m), y2 = y.tail(m);

    l1 = p.l0 + p.p0.dot(y1) + y1.dot((lam + 0.5 * gam) * y1);
    e1 = p.e0 + p.x0.dot(gam * y1) - y1.dot((lam - 0.5 * gam) * y1);

    Matrix bl(2 * m, 2 * m), be(2 * m, 2 * m);
    bl << lam + 0.5 * gam, 0.5 * gam, 0.5 * gam, lam + 0.5 * gam;
    be << lam - 0.5 * gam, -0.5 * gam, -0.5 * gam, lam - 0.5 * gam;
    Vector pp(2 * m), gg(2 * m);
    pp << p.p0, p.p0;
    gg << gam * p.x0, gam * p.x0;
    l2 = p.l0 + shock + pp.dot(y) + y.dot(bl * y);
    e2 = p.e0 - shock + gg.dot(y) - y.dot(be * y);
  }
};

/// Grid minimization of nu(y) = y'Hy - b'y over the triangle O, (-x, 0),
/// (0, -x); row-sliced so the inner loop is a fused 1-D quadratic scan.
inline double triangle_grid_min(const Triangle2dProblem& p, double resolution) {
  const double x = p.x0i;
  const auto steps = static_cast<Eigen::Index>(std::ceil(x / resolution));
  const double h = x / static_cast<double>(steps);
  const double h11 = p.H(0, 0), h22 = p.H(1, 1), h12 = 0.5 * (p.H(0, 1) + p.H(1, 0));
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i <= steps; ++i) {
    const double y1 = -x + h * static_cast<double>(i);
    const double c0 = h11 * y1 * y1 - p.b[0] * y1;
    const double c1 = 2.0 * h12 * y1 - p.b[1];
    // y2 runs over [-x - y1, 0] = [-h*i, 0].
    for (Eigen::Index k = 0; k <= i; ++k) {
      const double y2 = -h * static_cast<double>(k);
      const double v = (h22 * y2 + c1) * y2 + c0;
      best = std::min(best, v);
    }
  }
  return best;
}

}  // namespace scobb::testing
