#include "scobb/bench.hpp"

#include "scobb/cutplane.hpp"
#include "scobb/sco.hpp"
#include "scobb/scobb.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace scobb {

namespace {

struct SingleRun {
  double opt_val = 0.0;
  double time_s = 0.0;
  double iters = 0.0;
  double leverage = 0.0;
  double gap = 0.0;
};

SingleRun run_one(const std::string& algo, const LiquidationParams& p, double eps, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  SingleRun out;
  const DcInstance dc = make_dc(build_qcqp(p));

  if (algo == "scobb") {
    ScobbLimits lim;
    lim.threads = threads;
    lim.sco_eps = eps;
    const SolveReport rep = run_scobb(dc, p, eps, lim);
    if (!rep.has_incumbent) throw std::runtime_error("scobb returned no incumbent");
    out.opt_val = rep.upper;
    out.iters = static_cast<double>(rep.nodes_processed);
    out.gap = rep.gap;
    if (rep.activity) out.leverage = rep.activity->leverage;
  } else if (algo == "sco") {
    const CutPlaneResult cp = run_cutplane(p);
    const ScoResult sr = run_sco(dc, *cp.feasible_point, eps);
    out.opt_val = sr.value;
    out.iters = static_cast<double>(sr.trace.iterates.size());
    out.gap = 0.0;  // local method: no certified gap column
    const ActivityReport act = check_optimality_activity(p, sr.y, 1e-4);
    out.leverage = act.leverage;
  } else if (algo == "cutplane") {
    const CutPlaneResult cp = run_cutplane(p);
    out.opt_val = dc.base.objective.eval(*cp.feasible_point);
    out.iters = static_cast<double>(cp.iterations);
    out.gap = out.opt_val - cp.dual_value;
    const ActivityReport act = check_optimality_activity(p, *cp.feasible_point, 1e-2);
    out.leverage = act.leverage;
  } else {
    throw std::invalid_argument("unknown algo '" + algo + "' (expected scobb|sco|cutplane)");
  }
  out.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

std::vector<BenchRow> run_benchmark(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (int m : cfg.ms) {
    for (const std::string& algo : cfg.algos) {
      BenchRow row;
      row.m = m;
      row.pi = cfg.pi;
      row.delta_frac = cfg.delta_frac;
      row.algo = algo;
      const auto count = static_cast<double>(cfg.seeds.size());
      for (std::uint64_t seed : cfg.seeds) {
        GeneratorConfig gc;
        gc.seed = seed;
        gc.m = m;
        gc.pi = cfg.pi;
        gc.delta_frac = cfg.delta_frac;
        gc.rho1 = cfg.rho1;
        gc.rho2 = cfg.rho2;
        gc.regime = cfg.regime;
        const LiquidationParams p = generate_instance(gc);
        const SingleRun r = run_one(algo, p, cfg.eps, cfg.threads);
        row.opt_val += r.opt_val / count;
        row.time_s += r.time_s / count;
        row.iters += r.iters / count;
        row.leverage_ratio += r.leverage / count;
        row.gap = std::max(row.gap, r.gap);
      }
      if (cfg.deterministic) row.time_s = 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "m,pi,delta_frac,algo,opt_val,time_s,iters,leverage_ratio,gap\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.6g,%.6g,%s,%.10g,%.6f,%.3f,%.6f,%.6g\n", r.m, r.pi,
                  r.delta_frac, r.algo.c_str(), r.opt_val, r.time_s, r.iters, r.leverage_ratio,
                  r.gap);
    out << buf;
  }
}

void print_bench_table(std::ostream& out, const std::vector<BenchRow>& rows) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%6s %6s %8s %10s %14s %9s %8s %10s %10s\n", "m", "pi",
                "dfrac", "algo", "opt_val", "time_s", "iters", "lev_ratio", "gap");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%6d %6.2f %8.2f %10s %14.4f %9.3f %8.1f %10.4f %10.2e\n",
                  r.m, r.pi, r.delta_frac, r.algo.c_str(), r.opt_val, r.time_s, r.iters,
                  r.leverage_ratio, r.gap);
    out << buf;
  }
}

}  // namespace scobb
