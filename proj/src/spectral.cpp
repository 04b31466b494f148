#include "scobb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace scobb {

EigenDecomposition jacobi_eigs(const SymMatrix& M, int max_sweeps) {
  const Eigen::Index n = M.n();
  Matrix a = M.mat();
  Matrix v = Matrix::Identity(n, n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
  };

  const double scale = std::max(1.0, M.max_abs());
  const double stop = 1e-15 * scale * static_cast<double>(n);

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= stop) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        // Rotation angle from the classic 2x2 symmetric Schur decomposition.
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (tau >= 0.0) {
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        } else {
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > stop) {
    std::ostringstream msg;
    msg << "jacobi_eigs: no convergence after " << max_sweeps << " sweeps (n=" << n
        << ", off-diagonal norm=" << off_norm() << ", max|entry|=" << M.max_abs() << ")";
    throw std::runtime_error(msg.str());
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  EigenDecomposition ed;
  ed.values.resize(n);
  ed.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ed.values[i] = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    ed.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return ed;
}

SpectralSplit spectral_split(const SymMatrix& M) {
  const EigenDecomposition ed = jacobi_eigs(M);
  const Eigen::Index n = M.n();
  Matrix plus = Matrix::Zero(n, n);
  Matrix minus = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector u = ed.vectors.col(i);
    if (ed.values[i] >= 0.0) {
      plus.noalias() += ed.values[i] * u * u.transpose();
    } else {
      minus.noalias() += (-ed.values[i]) * u * u.transpose();
    }
  }
  SpectralSplit s;
  s.plus = SymMatrix(plus);
  s.minus = SymMatrix(minus);
  s.eigvals = ed.values;
  s.eigvecs = ed.vectors;
  return s;
}

double spectral_norm(const SymMatrix& M) {
  if (M.max_abs() == 0.0) return 0.0;
  const EigenDecomposition ed = jacobi_eigs(M);
  return ed.values.cwiseAbs().maxCoeff();
}

DcInstance make_dc(QcqpInstance inst) {
  inst.validate();
  DcInstance dc;
  dc.splits.reserve(inst.constraints.size() + 1);
  dc.splits.push_back(spectral_split(inst.objective.Q));
  for (const auto& g : inst.constraints) dc.splits.push_back(spectral_split(g.Q));
  dc.base = std::move(inst);

  // Reconstruction guard: plus - minus must give back the original matrix.
  for (std::size_t j = 0; j < dc.splits.size(); ++j) {
    const SymMatrix& Q = (j == 0) ? dc.base.objective.Q : dc.base.constraints[j - 1].Q;
    const double norm = Q.max_abs();
    const double err =
        (dc.splits[j].plus.mat() - dc.splits[j].minus.mat() - Q.mat()).cwiseAbs().maxCoeff();
    if (err > 1e-9 * (1.0 + norm)) {
      throw std::runtime_error("make_dc: spectral split failed to reconstruct matrix " +
                               std::to_string(j) + " (error " + std::to_string(err) + ")");
    }
  }
  return dc;
}

}  // namespace scobb
