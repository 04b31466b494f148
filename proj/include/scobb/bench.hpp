// Benchmark runs over generated instances, reported one averaged row per
// (m, algo) like the reference table: value, time, iterations/nodes,
// second-period leverage ratio, and terminal gap.
#pragma once

#include "scobb/generator.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace scobb {

struct BenchRow {
  int m = 0;
  double pi = 0.0;
  double delta_frac = 0.0;
  std::string algo;
  double opt_val = 0.0;
  double time_s = 0.0;
  double iters = 0.0;  // seed-averaged nodes (scobb) or iterations (sco/cutplane)
  double leverage_ratio = 0.0;
  double gap = 0.0;
};

struct BenchConfig {
  std::vector<int> ms = {10};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  double pi = 0.3;
  double delta_frac = 0.8;
  double rho1 = 18.0;
  double rho2 = 18.0;
  double eps = 1e-6;
  std::vector<std::string> algos = {"scobb", "sco"};
  GeneratorRegime regime = GeneratorRegime::Convex;
  bool deterministic = false;  // zeroes wall-clock columns for byte-stable output
  int threads = 1;
};

std::vector<BenchRow> run_benchmark(const BenchConfig& cfg);

/// Fixed header m,pi,delta_frac,algo,opt_val,time_s,iters,leverage_ratio,gap.
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void print_bench_table(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace scobb
