// Branch-and-bound global solver: SCO supplies incumbents (upper bounds),
// the McCormick box relaxation supplies node lower bounds, nodes are picked
// best-first and bisected on their longest edge. Terminates with an
// eps-optimal incumbent.
#pragma once

#include "scobb/liquidation.hpp"
#include "scobb/lowerbound.hpp"
#include "scobb/spectral.hpp"
#include "scobb/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace scobb {

struct BbNode {
  Box box;
  double lower = 0.0;   // relaxation optimal value on the box
  Vector relax_argmin;
  int depth = 0;
  std::uint64_t id = 0;
};

/// Bisects the longest edge (ties to the smallest index) at its midpoint.
std::pair<BbNode, BbNode> branch(const BbNode& node);

struct ScobbLimits {
  std::uint64_t max_nodes = 1'000'000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  int threads = 1;                    // >1 solves the two child relaxations concurrently
  bool restart_on_improving = false;  // run SCO on every improving node, not just the guard
  double sco_eps = 1e-6;
  int sco_max_iter = 100;
};

/// (nodes_processed, incumbent value, smallest open lower bound, open nodes).
using ProgressCallback =
    std::function<void(std::uint64_t, double, double, std::size_t)>;

struct SolveReport {
  Vector incumbent;
  bool has_incumbent = false;
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  std::uint64_t nodes_processed = 0;
  std::uint64_t relaxations_solved = 0;
  std::uint64_t sco_restarts = 0;
  SolveStatus status;
  double wall_time_s = 0.0;
  std::optional<ActivityReport> activity;  // populated when liquidation params are supplied
};

SolveReport run_scobb(const DcInstance& dc, const std::optional<LiquidationParams>& liq,
                      double eps, const ScobbLimits& limits = {},
                      const ProgressCallback& progress = nullptr);

/// Worst-case relaxation count before eps-optimality:
/// prod_i max(1, ceil(C * (upper_i - lower_i) / (2 sqrt(eps)))) where C is
/// the largest constraint minus-part norm (with `include_objective`, the
/// objective minus-part competes too). Saturates at UINT64_MAX.
std::uint64_t worst_case_nodes(const DcInstance& dc, const Box& box, double eps,
                               bool include_objective = false);

}  // namespace scobb
