// Core problem representation for box-constrained QCQP:
//   min  y'Q0 y + q0'y + c0
//   s.t. y'Qi y + qi'y + ci <= 0   (quadratic constraints)
//        a'y <= b                  (extra linear inequalities)
//        lower <= y <= upper
#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace scobb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense real symmetric matrix. Input is symmetrized on ingest so that
/// entries(i,j) == entries(j,i) holds exactly regardless of the source.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
      throw std::invalid_argument("SymMatrix: matrix must be square, n >= 1");
    }
    entries_ = 0.5 * (m + m.transpose());
  }

  static SymMatrix Zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix Identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }

  Eigen::Index n() const { return entries_.rows(); }
  const Matrix& mat() const { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  double max_abs() const { return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff(); }

 private:
  Matrix entries_;
};

/// One quadratic form y'Qy + q'y + c.
struct QuadForm {
  SymMatrix Q;
  Vector q;
  double c = 0.0;

  QuadForm() = default;
  QuadForm(SymMatrix Q_, Vector q_, double c_) : Q(std::move(Q_)), q(std::move(q_)), c(c_) {
    if (Q.n() != q.size()) {
      throw std::invalid_argument("QuadForm: dimension of Q and q disagree");
    }
  }

  Eigen::Index dim() const { return Q.n(); }

  double eval(const Vector& y) const {
    if (y.size() != dim()) {
      throw std::invalid_argument("QuadForm::eval: vector length " + std::to_string(y.size()) +
                                  " does not match dimension " + std::to_string(dim()));
    }
    return y.dot(Q.mat() * y) + q.dot(y) + c;
  }

  Vector gradient(const Vector& y) const { return 2.0 * (Q.mat() * y) + q; }
};

/// Linear inequality a'y <= b.
struct LinearIneq {
  Vector a;
  double b = 0.0;
};

struct QcqpInstance {
  QuadForm objective;
  std::vector<QuadForm> constraints;  // each <= 0
  Vector lower;
  Vector upper;
  std::vector<LinearIneq> linear_ineqs;

  Eigen::Index dim() const { return objective.dim(); }

  void validate() const {
    const Eigen::Index n = dim();
    if (lower.size() != n || upper.size() != n) {
      throw std::invalid_argument("QcqpInstance: box bounds must have length n");
    }
    if ((lower.array() > upper.array()).any()) {
      throw std::invalid_argument("QcqpInstance: lower > upper in some coordinate");
    }
    for (const auto& g : constraints) {
      if (g.dim() != n) throw std::invalid_argument("QcqpInstance: constraint dimension mismatch");
    }
    for (const auto& li : linear_ineqs) {
      if (li.a.size() != n) throw std::invalid_argument("QcqpInstance: linear inequality dimension mismatch");
    }
  }
};

/// Constraint values at y, in a fixed order:
///   [0, m)                quadratic constraint values g_j(y)
///   [m, m+l)              linear slacks a_k'y - b_k
///   [m+l, m+l+n)          lower-side box violations lower_i - y_i
///   [m+l+n, m+l+2n)       upper-side box violations y_i - upper_i
/// Every entry is <= 0 exactly when the corresponding constraint holds.
inline Vector residuals(const QcqpInstance& inst, const Vector& y) {
  const Eigen::Index n = inst.dim();
  if (y.size() != n) throw std::invalid_argument("residuals: dimension mismatch");
  const Eigen::Index m = static_cast<Eigen::Index>(inst.constraints.size());
  const Eigen::Index l = static_cast<Eigen::Index>(inst.linear_ineqs.size());
  Vector r(m + l + 2 * n);
  for (Eigen::Index j = 0; j < m; ++j) r[j] = inst.constraints[j].eval(y);
  for (Eigen::Index k = 0; k < l; ++k) r[m + k] = inst.linear_ineqs[k].a.dot(y) - inst.linear_ineqs[k].b;
  r.segment(m + l, n) = inst.lower - y;
  r.segment(m + l + n, n) = y - inst.upper;
  return r;
}

inline bool is_feasible(const QcqpInstance& inst, const Vector& y, double tol) {
  if (tol < 0) throw std::invalid_argument("is_feasible: tol must be >= 0");
  return (residuals(inst, y).array() <= tol).all();
}

enum class SolveKind { Optimal, Infeasible, Unbounded, IterLimit, NumericalFailure };

struct SolveStatus {
  SolveKind kind = SolveKind::NumericalFailure;
  std::string message;

  bool ok() const { return kind == SolveKind::Optimal; }
};

inline const char* to_string(SolveKind k) {
  switch (k) {
    case SolveKind::Optimal: return "Optimal";
    case SolveKind::Infeasible: return "Infeasible";
    case SolveKind::Unbounded: return "Unbounded";
    case SolveKind::IterLimit: return "IterLimit";
    case SolveKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

}  // namespace scobb
