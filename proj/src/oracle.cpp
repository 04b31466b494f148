#include "scobb/oracle.hpp"

#include "scobb/spectral.hpp"

#include <cmath>
#include <limits>

namespace scobb {

double lipschitz_bound(const QuadForm& form, const Vector& lower, const Vector& upper) {
  // sup ||2Qy + q|| <= 2||Q||_2 * max ||y|| + ||q|| over the box.
  const double corner_norm = lower.cwiseAbs().cwiseMax(upper.cwiseAbs()).norm();
  return 2.0 * spectral_norm(form.Q) * corner_norm + form.q.norm();
}

OracleResult brute_force_oracle(const QcqpInstance& inst, double resolution) {
  inst.validate();
  OracleResult out;
  const Eigen::Index n = inst.dim();
  if (n > 4) throw std::invalid_argument("brute_force_oracle: limited to n <= 4");
  if (!(resolution > 0.0)) throw std::invalid_argument("brute_force_oracle: resolution must be positive");

  std::vector<Eigen::Index> steps(static_cast<std::size_t>(n));
  double hmax = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = inst.upper[i] - inst.lower[i];
    steps[static_cast<std::size_t>(i)] =
        std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(w / resolution)));
    hmax = std::max(hmax, w / static_cast<double>(steps[static_cast<std::size_t>(i)]));
  }
  out.resolution = hmax;

  // The nearest grid neighbor of any feasible point is within hmax/2 per
  // coordinate, so this slack keeps it inside the filter.
  double lip = 0.0;
  for (const auto& g : inst.constraints) lip = std::max(lip, lipschitz_bound(g, inst.lower, inst.upper));
  for (const auto& li : inst.linear_ineqs) lip = std::max(lip, li.a.norm());
  const double feas_tol = 0.5 * lip * hmax * std::sqrt(static_cast<double>(n));
  out.feasibility_tol = feas_tol;

  // Iterate the grid with coordinate n-1 innermost; for each fixed prefix the
  // objective and constraints restrict to 1-D quadratics in the last
  // coordinate, so the inner loop is a fused polynomial evaluation.
  const Eigen::Index last = n - 1;
  const std::size_t nforms = 1 + inst.constraints.size();
  std::vector<const QuadForm*> forms(nforms);
  forms[0] = &inst.objective;
  for (std::size_t j = 1; j < nforms; ++j) forms[j] = &inst.constraints[j - 1];
  std::vector<double> a2(nforms), a1(nforms), a0(nforms);
  for (std::size_t j = 0; j < nforms; ++j) a2[j] = forms[j]->Q(last, last);

  const std::size_t nlin = inst.linear_ineqs.size();
  std::vector<double> l1(nlin), l0(nlin);
  for (std::size_t k = 0; k < nlin; ++k) l1[k] = inst.linear_ineqs[k].a[last];

  double best = std::numeric_limits<double>::infinity();
  Vector best_y(n);
  Vector y(n);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n), 0);

  while (true) {
    for (Eigen::Index i = 0; i < last; ++i) {
      const auto k = static_cast<double>(idx[static_cast<std::size_t>(i)]);
      const auto s = static_cast<double>(steps[static_cast<std::size_t>(i)]);
      y[i] = inst.lower[i] + (inst.upper[i] - inst.lower[i]) * k / s;
    }
    for (std::size_t j = 0; j < nforms; ++j) {
      double lin = forms[j]->q[last];
      double cst = forms[j]->c;
      for (Eigen::Index i = 0; i < last; ++i) {
        lin += 2.0 * forms[j]->Q(i, last) * y[i];
        cst += forms[j]->q[i] * y[i];
        for (Eigen::Index i2 = 0; i2 < last; ++i2) cst += forms[j]->Q(i, i2) * y[i] * y[i2];
      }
      a1[j] = lin;
      a0[j] = cst;
    }
    for (std::size_t k = 0; k < nlin; ++k) {
      double cst = -inst.linear_ineqs[k].b;
      for (Eigen::Index i = 0; i < last; ++i) cst += inst.linear_ineqs[k].a[i] * y[i];
      l0[k] = cst;
    }

    const Eigen::Index sl = steps[static_cast<std::size_t>(last)];
    const double lo = inst.lower[last], wid = inst.upper[last] - inst.lower[last];
    for (Eigen::Index k = 0; k <= sl; ++k) {
      const double v = lo + wid * static_cast<double>(k) / static_cast<double>(sl);
      bool ok = true;
      for (std::size_t j = 1; j < nforms && ok; ++j) {
        ok = (a2[j] * v + a1[j]) * v + a0[j] <= feas_tol;
      }
      for (std::size_t c = 0; c < nlin && ok; ++c) {
        ok = l1[c] * v + l0[c] <= feas_tol;
      }
      if (ok) {
        const double f = (a2[0] * v + a1[0]) * v + a0[0];
        if (f < best) {
          best = f;
          best_y.head(last) = y.head(last);
          best_y[last] = v;
        }
      }
    }

    Eigen::Index d = 0;
    for (; d < last; ++d) {
      auto& k = idx[static_cast<std::size_t>(d)];
      if (++k <= steps[static_cast<std::size_t>(d)]) break;
      k = 0;
    }
    if (d == last) break;
  }

  if (!std::isfinite(best)) {
    out.status = {SolveKind::Infeasible, "no grid point passes the feasibility filter"};
    return out;
  }
  out.y = best_y;
  out.value = best;
  out.status = {SolveKind::Optimal, ""};
  return out;
}

}  // namespace scobb
