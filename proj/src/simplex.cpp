#include "scobb/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scobb {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-9;

struct Tableau {
  Matrix a;           // rows x cols, constraint coefficients
  Vector rhs;         // >= 0 throughout
  Vector cost;        // current phase reduced-cost row (maximization)
  double cost_shift = 0.0;
  std::vector<Eigen::Index> basis;

  void pivot(Eigen::Index row, Eigen::Index col) {
    const double p = a(row, col);
    a.row(row) /= p;
    rhs[row] /= p;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == row) continue;
      const double f = a(r, col);
      if (f != 0.0) {
        a.row(r) -= f * a.row(row);
        rhs[r] -= f * rhs[row];
      }
    }
    const double f = cost[col];
    if (f != 0.0) {
      cost -= f * a.row(row).transpose();
      cost_shift += f * rhs[row];
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  // Bland's rule: smallest improving column, leaving row by min ratio with
  // smallest basis index on ties. Returns false when optimal; throws nothing.
  enum class Step { Optimal, Pivoted, Unbounded };
  Step step(Eigen::Index ncols_usable) {
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < ncols_usable; ++j) {
      if (cost[j] > kCostTol) {
        col = j;
        break;
      }
    }
    if (col < 0) return Step::Optimal;
    Eigen::Index row = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (a(r, col) > kPivotTol) {
        const double ratio = rhs[r] / a(r, col);
        if (ratio < best_ratio - 1e-14 ||
            (ratio < best_ratio + 1e-14 && row >= 0 &&
             basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(row)])) {
          best_ratio = ratio;
          row = r;
        }
      }
    }
    if (row < 0) return Step::Unbounded;
    pivot(row, col);
    return Step::Pivoted;
  }
};

}  // namespace

LpResult solve_lp(const Vector& objective, const std::vector<LinearIneq>& ineqs,
                  const std::vector<Eigen::Index>& nonneg) {
  const Eigen::Index n = objective.size();
  std::vector<bool> is_nonneg(static_cast<std::size_t>(n), false);
  for (Eigen::Index i : nonneg) {
    if (i < 0 || i >= n) throw std::invalid_argument("solve_lp: nonneg index out of range");
    is_nonneg[static_cast<std::size_t>(i)] = true;
  }

  // Column map: nonnegative variables get one column, free variables two
  // (positive and negative parts).
  std::vector<Eigen::Index> col_of(static_cast<std::size_t>(n));
  Eigen::Index nsplit = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    col_of[static_cast<std::size_t>(i)] = nsplit;
    nsplit += is_nonneg[static_cast<std::size_t>(i)] ? 1 : 2;
  }

  const auto m = static_cast<Eigen::Index>(ineqs.size());
  auto expand = [&](const Vector& v) {
    Vector out = Vector::Zero(nsplit);
    for (Eigen::Index i = 0; i < n; ++i) {
      out[col_of[static_cast<std::size_t>(i)]] = v[i];
      if (!is_nonneg[static_cast<std::size_t>(i)]) out[col_of[static_cast<std::size_t>(i)] + 1] = -v[i];
    }
    return out;
  };

  LpResult res;
  if (m == 0) {
    const Vector c = expand(objective);
    if ((c.array() > kCostTol).any()) {
      res.status = {SolveKind::Unbounded, "no constraints bound an improving variable"};
      res.x = Vector::Zero(n);
      return res;
    }
    res.x = Vector::Zero(n);
    res.value = 0.0;
    res.status = {SolveKind::Optimal, ""};
    return res;
  }

  // Standard form with one slack per row; rows with negative rhs are negated
  // and get an artificial variable for phase 1.
  Eigen::Index nart = 0;
  for (const auto& li : ineqs)
    if (li.b < 0.0) ++nart;
  const Eigen::Index total = nsplit + m + nart;

  Tableau t;
  t.a = Matrix::Zero(m, total);
  t.rhs.resize(m);
  t.basis.resize(static_cast<std::size_t>(m));
  Eigen::Index art = nsplit + m;
  Vector phase1_cost = Vector::Zero(total);
  for (Eigen::Index r = 0; r < m; ++r) {
    if (ineqs[static_cast<std::size_t>(r)].a.size() != n) {
      throw std::invalid_argument("solve_lp: inequality dimension mismatch");
    }
    Vector row = expand(ineqs[static_cast<std::size_t>(r)].a);
    double b = ineqs[static_cast<std::size_t>(r)].b;
    double slack = 1.0;
    if (b < 0.0) {
      row = -row;
      b = -b;
      slack = -1.0;
    }
    t.a.row(r).head(nsplit) = row.transpose();
    t.a(r, nsplit + r) = slack;
    t.rhs[r] = b;
    if (slack < 0.0) {
      t.a(r, art) = 1.0;
      phase1_cost[art] = -1.0;  // maximize -sum(artificials)
      t.basis[static_cast<std::size_t>(r)] = art;
      ++art;
    } else {
      t.basis[static_cast<std::size_t>(r)] = nsplit + r;
    }
  }

  auto run = [&](Eigen::Index usable_cols, int iter_cap) -> Tableau::Step {
    for (int it = 0; it < iter_cap; ++it) {
      const auto s = t.step(usable_cols);
      if (s != Tableau::Step::Pivoted) return s;
    }
    return Tableau::Step::Pivoted;  // hit the cap
  };
  const int cap = 20000 + 200 * static_cast<int>(total);

  if (nart > 0) {
    t.cost = phase1_cost;
    t.cost_shift = 0.0;
    // Price out the basic artificials.
    for (Eigen::Index r = 0; r < m; ++r) {
      const Eigen::Index bi = t.basis[static_cast<std::size_t>(r)];
      if (t.cost[bi] != 0.0) {
        const double f = t.cost[bi];
        t.cost -= f * t.a.row(r).transpose();
        t.cost_shift += f * t.rhs[r];
      }
    }
    const auto s = run(total, cap);
    if (s == Tableau::Step::Pivoted) {
      res.status = {SolveKind::NumericalFailure, "phase-1 simplex hit iteration cap"};
      return res;
    }
    const double infeas = -t.cost_shift;
    if (infeas > 1e-8 * (1.0 + t.rhs.cwiseAbs().maxCoeff())) {
      res.status = {SolveKind::Infeasible, "phase-1 optimum leaves positive infeasibility"};
      return res;
    }
    // Drive any residual basic artificial out (or its row is redundant).
    for (Eigen::Index r = 0; r < m; ++r) {
      if (t.basis[static_cast<std::size_t>(r)] >= nsplit + m) {
        for (Eigen::Index j = 0; j < nsplit + m; ++j) {
          if (std::abs(t.a(r, j)) > kPivotTol) {
            t.pivot(r, j);
            break;
          }
        }
      }
    }
  }

  t.cost = Vector::Zero(total);
  t.cost.head(nsplit) = expand(objective);
  t.cost_shift = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index bi = t.basis[static_cast<std::size_t>(r)];
    if (t.cost[bi] != 0.0) {
      const double f = t.cost[bi];
      t.cost -= f * t.a.row(r).transpose();
      t.cost_shift += f * t.rhs[r];
    }
  }
  const auto s = run(nsplit + m, cap);  // artificials stay out in phase 2
  if (s == Tableau::Step::Unbounded) {
    res.status = {SolveKind::Unbounded, "improving column with no blocking row"};
    return res;
  }
  if (s == Tableau::Step::Pivoted) {
    res.status = {SolveKind::NumericalFailure, "phase-2 simplex hit iteration cap"};
    return res;
  }

  Vector z = Vector::Zero(nsplit);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index bi = t.basis[static_cast<std::size_t>(r)];
    if (bi < nsplit) z[bi] = t.rhs[r];
  }
  res.x.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index c = col_of[static_cast<std::size_t>(i)];
    res.x[i] = is_nonneg[static_cast<std::size_t>(i)] ? z[c] : z[c] - z[c + 1];
  }
  res.value = objective.dot(res.x);
  res.status = {SolveKind::Optimal, ""};
  return res;
}

}  // namespace scobb
