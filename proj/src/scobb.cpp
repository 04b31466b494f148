#include "scobb/scobb.hpp"

#include "scobb/convex_qcqp.hpp"
#include "scobb/cutplane.hpp"
#include "scobb/sco.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <queue>

namespace scobb {

std::pair<BbNode, BbNode> branch(const BbNode& node) {
  const Vector width = node.box.upper - node.box.lower;
  Eigen::Index split = 0;
  width.maxCoeff(&split);
  if (!(width[split] > 0.0)) {
    throw std::invalid_argument("branch: box has zero width in every coordinate");
  }
  const double mid = 0.5 * (node.box.lower[split] + node.box.upper[split]);
  BbNode left = node, right = node;
  left.box.upper[split] = mid;
  right.box.lower[split] = mid;
  left.depth = right.depth = node.depth + 1;
  return {left, right};
}

namespace {

struct NodeOrder {
  bool operator()(const BbNode& a, const BbNode& b) const {
    return a.lower > b.lower || (a.lower == b.lower && a.id > b.id);
  }
};

struct ChildSolve {
  bool feasible = false;
  bool failed = false;
  double value = 0.0;
  Vector argmin;
};

ChildSolve solve_box(const DcInstance& dc, const Box& box, double tol) {
  ChildSolve out;
  const BoxRelaxation rel = build_lower_relaxation_mccormick(dc, box);
  const ConvexSolveResult r = solve_convex_qcqp(rel.instance, tol);
  if (r.status.kind == SolveKind::Infeasible) return out;
  if (!r.status.ok()) {
    out.failed = true;
    return out;
  }
  out.feasible = true;
  out.value = r.value;
  out.argmin = r.y;
  return out;
}

}  // namespace

SolveReport run_scobb(const DcInstance& dc, const std::optional<LiquidationParams>& liq,
                      double eps, const ScobbLimits& limits, const ProgressCallback& progress) {
  if (!(eps > 0.0)) throw std::invalid_argument("run_scobb: eps must be positive");
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  SolveReport rep;
  const double tol_inner = std::min(1e-9, 0.01 * eps);

  // Feasibility guard from the algorithm statement: the first quadratic
  // constraint at tolerance zero, the remaining ones at eps; box and linear
  // memberships hold by construction of the relaxations (small slack allowed
  // for solver round-off).
  auto guard_ok = [&](const Vector& y) {
    for (std::size_t j = 0; j < dc.base.constraints.size(); ++j) {
      const double tol_j = (j == 0) ? 0.0 : eps;
      if (dc.base.constraints[j].eval(y) > tol_j) return false;
    }
    const double side = 1e-9 * (1.0 + dc.base.upper.cwiseAbs().maxCoeff());
    if (((dc.base.lower - y).array() > side).any() || ((y - dc.base.upper).array() > side).any()) {
      return false;
    }
    for (const auto& li : dc.base.linear_ineqs) {
      if (li.a.dot(y) - li.b > side) return false;
    }
    return true;
  };

  auto take_incumbent = [&](const Vector& y, double value) {
    if (value < rep.upper) {
      rep.upper = value;
      rep.incumbent = y;
      rep.has_incumbent = true;
    }
  };

  auto try_sco = [&](const Vector& start, double feas_tol) {
    try {
      const ScoResult sr = run_sco(dc, start, limits.sco_eps, limits.sco_max_iter, feas_tol);
      if (sr.trace.status.kind != SolveKind::NumericalFailure) {
        take_incumbent(sr.y, sr.value);
        return true;
      }
    } catch (const std::invalid_argument&) {
    }
    return false;
  };

  // Initial incumbent: cut-plane start for the liquidation family, otherwise
  // a point of the (inner-approximating) upper relaxation found after the
  // root solve below.
  if (liq.has_value()) {
    const CutPlaneResult cp = run_cutplane(*liq);
    if (cp.feasible_point.has_value()) {
      take_incumbent(*cp.feasible_point, dc.base.objective.eval(*cp.feasible_point));
      try_sco(*cp.feasible_point, 1e-8);
    }
  }

  // Root relaxation.
  const Box root{dc.base.lower, dc.base.upper};
  const ChildSolve root_solve = solve_box(dc, root, tol_inner);
  rep.relaxations_solved = 1;
  if (root_solve.failed) {
    rep.status = {SolveKind::NumericalFailure, "root relaxation solve failed"};
    rep.wall_time_s = elapsed();
    return rep;
  }
  if (!root_solve.feasible) {
    rep.status = {SolveKind::Infeasible, "root relaxation is infeasible"};
    rep.wall_time_s = elapsed();
    return rep;
  }
  if (guard_ok(root_solve.argmin)) {
    take_incumbent(root_solve.argmin, dc.base.objective.eval(root_solve.argmin));
    if (!liq.has_value()) try_sco(root_solve.argmin, eps);
  } else if (!liq.has_value() && !rep.has_incumbent) {
    // The upper relaxation at the root argmin is an inner approximation of
    // the feasible set; any point of it is feasible for the base problem.
    const QcqpInstance inner = build_upper_relaxation(dc, root_solve.argmin);
    const ConvexSolveResult pr = solve_convex_qcqp(inner, tol_inner);
    if (pr.status.ok()) {
      take_incumbent(pr.y, dc.base.objective.eval(pr.y));
      try_sco(pr.y, eps);
    }
  }

  std::uint64_t next_id = 0;
  std::priority_queue<BbNode, std::vector<BbNode>, NodeOrder> pool;
  pool.push(BbNode{root, root_solve.value, root_solve.argmin, 0, next_id++});

  double min_pruned = std::numeric_limits<double>::infinity();
  int solver_failures = 0;
  rep.status = {SolveKind::Optimal, ""};

  while (!pool.empty()) {
    const BbNode node = pool.top();
    pool.pop();
    ++rep.nodes_processed;

    if (node.lower >= rep.upper - eps) {
      rep.lower = node.lower;
      break;  // best-first: every open node is bounded below by node.lower
    }
    if (rep.nodes_processed >= limits.max_nodes || elapsed() > limits.time_limit_s) {
      rep.lower = node.lower;
      rep.status = {SolveKind::IterLimit, "node or time limit reached"};
      break;
    }

    const auto [left, right] = branch(node);
    ChildSolve solved[2];
    if (limits.threads > 1) {
      auto fut = std::async(std::launch::async,
                            [&] { return solve_box(dc, left.box, tol_inner); });
      solved[1] = solve_box(dc, right.box, tol_inner);
      solved[0] = fut.get();
    } else {
      solved[0] = solve_box(dc, left.box, tol_inner);
      solved[1] = solve_box(dc, right.box, tol_inner);
    }
    rep.relaxations_solved += 2;

    const Box* boxes[2] = {&left.box, &right.box};
    int best_child = -1;
    for (int k = 0; k < 2; ++k) {
      if (solved[k].failed) {
        // Keep the region alive under the parent bound; shrinking boxes
        // usually recondition the solve.
        if (++solver_failures > 50) {
          rep.lower = node.lower;
          rep.status = {SolveKind::NumericalFailure, "too many node relaxation failures"};
          rep.wall_time_s = elapsed();
          return rep;
        }
        pool.push(BbNode{*boxes[k], node.lower, node.relax_argmin, node.depth + 1, next_id++});
        continue;
      }
      if (!solved[k].feasible) continue;
      if (best_child < 0 || solved[k].value < solved[best_child].value) best_child = k;
      if (solved[k].value < rep.upper - eps) {
        pool.push(BbNode{*boxes[k], solved[k].value, solved[k].argmin, node.depth + 1, next_id++});
      } else if (solved[k].value < min_pruned) {
        min_pruned = solved[k].value;
      }
    }

    if (best_child >= 0) {
      const Vector& y_hat = solved[best_child].argmin;
      const double f_hat = dc.base.objective.eval(y_hat);
      const bool improving =
          limits.restart_on_improving ? (f_hat < rep.upper) : (f_hat <= rep.upper - eps);
      if (guard_ok(y_hat) && improving) {
        take_incumbent(y_hat, f_hat);
        ++rep.sco_restarts;
        try_sco(y_hat, eps);
      } else if (!rep.has_incumbent && rep.nodes_processed % 32 == 0) {
        // Still no feasible point: pull one out of the inner approximation
        // anchored at the child argmin.
        const QcqpInstance inner = build_upper_relaxation(dc, y_hat);
        const ConvexSolveResult pr = solve_convex_qcqp(inner, tol_inner);
        if (pr.status.ok()) {
          take_incumbent(pr.y, dc.base.objective.eval(pr.y));
          try_sco(pr.y, eps);
        }
      }
    }

    if (progress) {
      const double open_low = pool.empty() ? rep.upper : pool.top().lower;
      progress(rep.nodes_processed, rep.upper, open_low, pool.size());
    }
  }

  if (pool.empty() && rep.status.ok() && !std::isfinite(rep.lower)) {
    if (!rep.has_incumbent) {
      rep.status = {SolveKind::Infeasible, "search exhausted without a feasible point"};
      rep.lower = std::numeric_limits<double>::infinity();
    } else {
      // Every subregion was pruned at upper - eps (or was infeasible).
      rep.lower = std::min(min_pruned, rep.upper);
    }
  }
  rep.gap = std::max(0.0, rep.upper - rep.lower);
  rep.wall_time_s = elapsed();
  if (liq.has_value() && rep.has_incumbent) {
    rep.activity = check_optimality_activity(*liq, rep.incumbent, 1e-4);
  }
  return rep;
}

std::uint64_t worst_case_nodes(const DcInstance& dc, const Box& box, double eps,
                               bool include_objective) {
  if (!(eps > 0.0)) throw std::invalid_argument("worst_case_nodes: eps must be positive");
  double c_norm = 0.0;
  for (std::size_t j = 0; j < dc.base.constraints.size(); ++j) {
    c_norm = std::max(c_norm, spectral_norm(dc.constraint_split(j).minus));
  }
  if (include_objective) {
    c_norm = std::max(c_norm, spectral_norm(dc.objective_split().minus));
  }
  const double denom = 2.0 * std::sqrt(eps);
  std::uint64_t prod = 1;
  for (Eigen::Index i = 0; i < box.lower.size(); ++i) {
    const double f = std::ceil(c_norm * (box.upper[i] - box.lower[i]) / denom);
    std::uint64_t factor = 1;
    if (f >= 1.0) {
      factor = (f >= 1e18) ? UINT64_MAX : static_cast<std::uint64_t>(f);
    }
    if (factor != 0 && prod > UINT64_MAX / factor) return UINT64_MAX;
    prod *= factor;
  }
  return prod;
}

}  // namespace scobb
