// Symmetric eigendecomposition (cyclic Jacobi) and the PSD/PSD difference
// split Q = Q+ - Q- that every relaxation in this project is built on.
#pragma once

#include "scobb/types.hpp"

namespace scobb {

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, vectors.col(i) pairs with values[i]
};

/// Cyclic Jacobi sweeps on a dense symmetric matrix. Deterministic: fixed
/// sweep order, eigenpairs sorted by value (ties keep sweep order).
/// Throws std::runtime_error with condition info if the off-diagonal mass
/// has not vanished after `max_sweeps`.
EigenDecomposition jacobi_eigs(const SymMatrix& M, int max_sweeps = 64);

/// Split of a symmetric M into PSD parts with M = plus - minus.
/// Zero eigenvalues land in `plus`.
struct SpectralSplit {
  SymMatrix plus;
  SymMatrix minus;
  Vector eigvals;
  Matrix eigvecs;

  bool has_minus() const { return minus.max_abs() > 0.0; }
};

SpectralSplit spectral_split(const SymMatrix& M);

/// Largest |eigenvalue| == operator 2-norm for symmetric M.
double spectral_norm(const SymMatrix& M);

/// A QCQP together with the spectral split of its objective and of every
/// quadratic constraint; the shared input of the SCO and bounding code.
struct DcInstance {
  QcqpInstance base;
  std::vector<SpectralSplit> splits;  // splits[0] = objective, splits[1+j] = constraint j

  const SpectralSplit& objective_split() const { return splits[0]; }
  const SpectralSplit& constraint_split(std::size_t j) const { return splits[1 + j]; }
};

DcInstance make_dc(QcqpInstance inst);

}  // namespace scobb
