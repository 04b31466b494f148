// Command-line front end: instance generation, solving, the brute-force
// oracle, benchmark tables, and assumption/activity checks.
//
// Exit codes: 0 Optimal, 1 usage or input error, 2 IterLimit, 3 Infeasible.

#include "scobb/bench.hpp"
#include "scobb/cutplane.hpp"
#include "scobb/generator.hpp"
#include "scobb/io.hpp"
#include "scobb/oracle.hpp"
#include "scobb/sco.hpp"
#include "scobb/scobb.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace scobb;

int log_level() {
  const char* env = std::getenv("QCQP_LOG");
  if (!env) return 0;
  const std::string v(env);
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

int status_exit_code(const SolveStatus& s) {
  switch (s.kind) {
    case SolveKind::Optimal: return 0;
    case SolveKind::IterLimit: return 2;
    case SolveKind::Infeasible: return 3;
    default: return 2;
  }
}

std::string format_point(const Vector& y) {
  std::ostringstream out;
  out << "[";
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", y[i]);
    out << (i ? ", " : "") << buf;
  }
  out << "]";
  return out.str();
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_generate(std::uint64_t seed, int m, double pi, double delta_frac, double rho1, double rho2,
                 const std::string& regime, const std::string& output) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.m = m;
  cfg.pi = pi;
  cfg.delta_frac = delta_frac;
  cfg.rho1 = rho1;
  cfg.rho2 = rho2;
  cfg.regime = regime_from_string(regime);

  InstanceFile file;
  file.liquidation = generate_instance(cfg);
  file.provenance["generator"] = "scobb";
  file.provenance["seed"] = std::to_string(seed);
  file.provenance["regime"] = regime;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "m=%d pi=%.6g delta_frac=%.6g rho1=%.6g rho2=%.6g", m, pi,
                delta_frac, rho1, rho2);
  file.provenance["settings"] = buf;

  if (output == "-") {
    std::cout << serialize_instance(file);
  } else {
    save_instance(output, file);
    std::cout << "wrote " << output << " (m=" << m << ", delta=" << file.liquidation->delta
              << ")\n";
  }
  return 0;
}

int cmd_solve(const std::string& path, const std::string& algo, double eps,
              std::uint64_t max_nodes, double time_limit, int threads, bool deterministic,
              const std::string& report_path) {
  const InstanceFile file = load_instance(path);
  const QcqpInstance inst = file.to_qcqp();
  const DcInstance dc = make_dc(inst);

  SolveStatus status;
  std::ostringstream report;
  char buf[256];

  if (algo == "cutplane") {
    if (!file.liquidation) {
      std::cerr << "error: cutplane initialization requires a liquidation instance\n";
      return 1;
    }
    const CutPlaneResult cp = run_cutplane(*file.liquidation, 1e-9, static_cast<int>(max_nodes));
    status = cp.status;
    std::snprintf(buf, sizeof(buf),
                  "algo: cutplane\nstatus: %s\ndual_value: %.10g\nt1: %.10g\nt2: %.10g\n"
                  "iterations: %d\n",
                  to_string(cp.status.kind), cp.dual_value, cp.t1, cp.t2, cp.iterations);
    report << buf;
    if (cp.feasible_point) {
      report << "feasible_point: " << format_point(*cp.feasible_point) << "\n";
      std::snprintf(buf, sizeof(buf), "feasible_value: %.10g\n",
                    inst.objective.eval(*cp.feasible_point));
      report << buf;
    }
  } else if (algo == "sco") {
    Vector y0;
    if (file.liquidation) {
      const CutPlaneResult cp = run_cutplane(*file.liquidation);
      y0 = *cp.feasible_point;
    } else {
      const BoxRelaxation rel = build_lower_relaxation_mccormick(dc, {inst.lower, inst.upper});
      const ConvexSolveResult root = solve_convex_qcqp(rel.instance, 1e-9);
      if (!root.status.ok()) {
        std::cerr << "error: could not find a starting point: " << root.status.message << "\n";
        return 3;
      }
      const ConvexSolveResult inner = solve_convex_qcqp(build_upper_relaxation(dc, root.y), 1e-9);
      if (!inner.status.ok()) {
        std::cerr << "error: no feasible starting point: " << inner.status.message << "\n";
        return 3;
      }
      y0 = inner.y;
    }
    const ScoResult sr = run_sco(dc, y0, eps);
    status = sr.trace.status;
    std::snprintf(buf, sizeof(buf), "algo: sco\nstatus: %s\nvalue: %.10g\niterations: %zu\n",
                  to_string(status.kind), sr.value, sr.trace.iterates.size());
    report << buf;
    report << "point: " << format_point(sr.y) << "\n";
    if (file.liquidation) {
      const ActivityReport act = check_optimality_activity(*file.liquidation, sr.y, 1e-4);
      std::snprintf(buf, sizeof(buf), "leverage_ratio: %.6f\nsecond_cap_active: %s\n",
                    act.leverage, act.active ? "true" : "false");
      report << buf;
    }
  } else if (algo == "scobb") {
    ScobbLimits lim;
    lim.max_nodes = max_nodes;
    lim.time_limit_s = time_limit;
    lim.threads = threads;
    lim.sco_eps = eps;
    ProgressCallback progress = nullptr;
    if (log_level() >= 1) {
      progress = [](std::uint64_t nodes, double upper, double lower, std::size_t open) {
        std::fprintf(stderr, "[scobb] nodes=%llu upper=%.10g lower=%.10g open=%zu\n",
                     static_cast<unsigned long long>(nodes), upper, lower, open);
      };
    }
    std::optional<LiquidationParams> liq;
    if (file.liquidation) liq = *file.liquidation;
    const SolveReport rep = run_scobb(dc, liq, eps, lim, progress);
    status = rep.status;
    std::snprintf(buf, sizeof(buf),
                  "algo: scobb\nstatus: %s\nupper: %.10g\nlower: %.10g\ngap: %.6g\n"
                  "nodes_processed: %llu\nrelaxations_solved: %llu\nsco_restarts: %llu\n",
                  to_string(rep.status.kind), rep.upper, rep.lower, rep.gap,
                  static_cast<unsigned long long>(rep.nodes_processed),
                  static_cast<unsigned long long>(rep.relaxations_solved),
                  static_cast<unsigned long long>(rep.sco_restarts));
    report << buf;
    std::snprintf(buf, sizeof(buf), "wall_time_s: %.6f\n", deterministic ? 0.0 : rep.wall_time_s);
    report << buf;
    if (rep.has_incumbent) {
      report << "incumbent: " << format_point(rep.incumbent) << "\n";
      if (rep.activity) {
        std::snprintf(buf, sizeof(buf), "leverage_ratio: %.6f\nsecond_cap_active: %s\n",
                      rep.activity->leverage, rep.activity->active ? "true" : "false");
        report << buf;
      }
    }
  } else {
    std::cerr << "error: unknown --algo '" << algo << "'\n";
    return 1;
  }

  std::cout << report.str();
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    out << report.str();
  }
  return status_exit_code(status);
}

int cmd_oracle(const std::string& path, double resolution) {
  const InstanceFile file = load_instance(path);
  const QcqpInstance inst = file.to_qcqp();
  const OracleResult r = brute_force_oracle(inst, resolution);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "status: %s\nvalue: %.10g\nresolution: %.6g\nfeas_tol: %.6g\n",
                to_string(r.status.kind), r.value, r.resolution, r.feasibility_tol);
  std::cout << buf;
  if (r.status.ok()) std::cout << "point: " << format_point(r.y) << "\n";
  return status_exit_code(r.status);
}

int cmd_check(const std::string& path, bool solve_for_activity, double eps) {
  const InstanceFile file = load_instance(path);
  if (!file.liquidation) {
    std::cerr << "error: check requires a liquidation instance\n";
    return 1;
  }
  const LiquidationParams& p = *file.liquidation;
  const AssumptionReport rep = check_assumptions(p);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "assumption1_leverage_crisis: %s (rho1*e0 - l0 = %.10g)\n"
                "assumption2_half_sale_recovers: %s (rho1*e1 - l1 at -x0/2 = %.10g)\n"
                "assumption3_slater: %s\n",
                rep.leverage_crisis ? "true" : "false", rep.leverage_crisis_value,
                rep.half_sale_recovers ? "true" : "false", rep.half_sale_value,
                rep.slater ? "true" : "false");
  std::cout << buf;

  const ShockCapacity cap = shock_capacity(p);
  std::snprintf(buf, sizeof(buf), "delta_max: %.10g (closed_form: %s)\ndelta: %.10g\n",
                cap.delta_max, cap.closed_form_valid ? "true" : "false", p.delta);
  std::cout << buf;

  if (solve_for_activity) {
    const DcInstance dc = make_dc(build_qcqp(p));
    const SolveReport sr = run_scobb(dc, p, eps);
    if (sr.has_incumbent && sr.activity) {
      std::snprintf(buf, sizeof(buf),
                    "solution_value: %.10g\nleverage_ratio: %.6f\nsecond_cap_active: %s\n",
                    sr.upper, sr.activity->leverage, sr.activity->active ? "true" : "false");
      std::cout << buf;
    }
  }
  return rep.all() ? 0 : 2;
}

int cmd_bench(const std::string& ms, const std::string& algos, int nseeds, double pi,
              double delta_frac, double rho1, double rho2, double eps, const std::string& regime,
              const std::string& out_path, bool deterministic, int threads) {
  BenchConfig cfg;
  cfg.ms.clear();
  for (const auto& tok : split_csv(ms)) cfg.ms.push_back(std::stoi(tok));
  cfg.algos = split_csv(algos);
  cfg.seeds.clear();
  for (int s = 1; s <= nseeds; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
  cfg.pi = pi;
  cfg.delta_frac = delta_frac;
  cfg.rho1 = rho1;
  cfg.rho2 = rho2;
  cfg.eps = eps;
  cfg.regime = regime_from_string(regime);
  cfg.deterministic = deterministic;
  cfg.threads = threads;

  const std::vector<BenchRow> rows = run_benchmark(cfg);
  print_bench_table(std::cout, rows);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open " << out_path << "\n";
      return 1;
    }
    write_bench_csv(out, rows);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global solver for nonconvex QCQP via DC splitting, SCO upper bounds, "
               "McCormick lower bounds, and branch-and-bound"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Generate a seeded liquidation instance");
  std::uint64_t seed = 1;
  int m = 1;
  double pi = 0.3, delta_frac = 0.8, rho1 = 18.0, rho2 = 18.0;
  std::string regime = "convex", output = "-";
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--m", m, "asset count")->check(CLI::PositiveNumber);
  gen->add_option("--pi", pi, "shock probability");
  gen->add_option("--delta-frac", delta_frac, "shock as a fraction of delta_max");
  gen->add_option("--rho1", rho1, "first-period leverage cap");
  gen->add_option("--rho2", rho2, "second-period leverage cap");
  gen->add_option("--regime", regime, "convex|indefinite");
  gen->add_option("-o,--output", output, "output path, or - for stdout");

  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  std::string solve_path, algo = "scobb", report_path;
  double eps = 1e-6, time_limit = std::numeric_limits<double>::infinity();
  std::uint64_t max_nodes = 1'000'000;
  int threads = 1;
  bool deterministic = false;
  solve->add_option("file", solve_path, "instance JSON")->required();
  solve->add_option("--algo", algo, "cutplane|sco|scobb");
  solve->add_option("--eps", eps, "optimality tolerance");
  solve->add_option("--max-nodes", max_nodes, "node limit (scobb) or iteration limit");
  solve->add_option("--time-limit", time_limit, "wall-clock limit in seconds");
  solve->add_option("--threads", threads, "child relaxations solved concurrently when > 1");
  solve->add_flag("--deterministic", deterministic, "byte-stable output (zeroes timings)");
  solve->add_option("--report", report_path, "also write the report to this path");

  auto* oracle = app.add_subcommand("oracle", "Brute-force grid oracle (n <= 4)");
  std::string oracle_path;
  double resolution = 1e-3;
  oracle->add_option("file", oracle_path, "instance JSON")->required();
  oracle->add_option("--resolution", resolution, "grid step per coordinate");

  auto* check = app.add_subcommand("check", "Model assumption and activity report");
  std::string check_path;
  bool no_solve = false;
  double check_eps = 1e-6;
  check->add_option("file", check_path, "instance JSON")->required();
  check->add_flag("--no-solve", no_solve, "skip solving for the activity check");
  check->add_option("--eps", check_eps, "tolerance for the activity solve");

  auto* bench = app.add_subcommand("bench", "Benchmark table over generated instances");
  std::string bench_ms = "10", bench_algos = "scobb,sco", bench_out, bench_regime = "convex";
  int bench_seeds = 5, bench_threads = 1;
  double bench_pi = 0.3, bench_dfrac = 0.8, bench_rho = 18.0, bench_eps = 1e-6;
  bool bench_det = false;
  bench->add_option("--m", bench_ms, "comma-separated asset counts");
  bench->add_option("--algos", bench_algos, "comma-separated algorithms");
  bench->add_option("--seeds", bench_seeds, "number of seeds to average");
  bench->add_option("--pi", bench_pi, "shock probability");
  bench->add_option("--delta-frac", bench_dfrac, "shock fraction of delta_max");
  bench->add_option("--rho", bench_rho, "leverage cap (rho1 = rho2)");
  bench->add_option("--eps", bench_eps, "scobb tolerance");
  bench->add_option("--regime", bench_regime, "convex|indefinite");
  bench->add_option("--out", bench_out, "CSV output path");
  bench->add_flag("--deterministic", bench_det, "byte-stable CSV (zeroes timings)");
  bench->add_option("--threads", bench_threads, "threads per solve");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(seed, m, pi, delta_frac, rho1, rho2, regime, output);
    }
    if (solve->parsed()) {
      return cmd_solve(solve_path, algo, eps, max_nodes, time_limit, threads, deterministic,
                       report_path);
    }
    if (oracle->parsed()) return cmd_oracle(oracle_path, resolution);
    if (check->parsed()) return cmd_check(check_path, !no_solve, check_eps);
    if (bench->parsed()) {
      return cmd_bench(bench_ms, bench_algos, bench_seeds, bench_pi, bench_dfrac, bench_rho,
                       bench_rho, bench_eps, bench_regime, bench_out, bench_det, bench_threads);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
