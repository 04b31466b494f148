#include "scobb/generator.hpp"
#include "scobb/oracle.hpp"
#include "scobb/scobb.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace scobb;
using namespace scobb::testing;

TEST_CASE("branch splits the longest edge at its midpoint") {
  BbNode node;
  node.box.lower = Vector::Zero(2);
  node.box.upper.resize(2);
  node.box.upper << 1.0, 4.0;
  const auto [a, b] = branch(node);
  CHECK(a.box.upper[1] == doctest::Approx(2.0));
  CHECK(b.box.lower[1] == doctest::Approx(2.0));
  CHECK(a.box.upper[0] == doctest::Approx(1.0));

  node.box.upper << 1.0, 1.0;  // tie goes to the first coordinate
  const auto [c, d] = branch(node);
  CHECK(c.box.upper[0] == doctest::Approx(0.5));
  CHECK(d.box.lower[0] == doctest::Approx(0.5));

  node.box.upper = node.box.lower;
  CHECK_THROWS_AS(branch(node), std::invalid_argument);
}

TEST_CASE("branch children partition the parent") {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    BbNode node;
    node.box.lower = random_vector(rng, 3, -2.0, 0.0);
    node.box.upper = node.box.lower + random_vector(rng, 3, 0.1, 2.0);
    const auto [a, b] = branch(node);
    for (int i = 0; i < 3; ++i) {
      const double wa = a.box.upper[i] - a.box.lower[i];
      const double wb = b.box.upper[i] - b.box.lower[i];
      const double wp = node.box.upper[i] - node.box.lower[i];
      if (a.box.upper[i] != node.box.upper[i]) {
        CHECK(wa + wb == doctest::Approx(wp));
        CHECK(a.box.upper[i] == doctest::Approx(b.box.lower[i]));
      } else {
        CHECK(wa == doctest::Approx(wp));
        CHECK(wb == doctest::Approx(wp));
      }
    }
  }
}

TEST_CASE("convex instance terminates at the root") {
  GeneratorConfig cfg;
  cfg.seed = 2;
  cfg.m = 2;
  const LiquidationParams p = generate_instance(cfg);
  const DcInstance dc = make_dc(build_qcqp(p));
  const SolveReport rep = run_scobb(dc, p, 1e-6);
  REQUIRE(rep.status.ok());
  CHECK(rep.nodes_processed == 1);
  CHECK(rep.gap <= 1e-6);
  CHECK(is_feasible(dc.base, rep.incumbent, 1e-6));
}

TEST_CASE("seeded liquidation instances solve to the oracle value") {
  for (auto regime : {GeneratorRegime::Convex, GeneratorRegime::Indefinite}) {
    for (std::uint64_t seed : {1ULL, 2ULL}) {
      GeneratorConfig cfg;
      cfg.seed = seed;
      cfg.m = 1;
      cfg.regime = regime;
      const LiquidationParams p = generate_instance(cfg);
      const QcqpInstance inst = build_qcqp(p);
      const DcInstance dc = make_dc(inst);
      const SolveReport rep = run_scobb(dc, p, 1e-6);
      REQUIRE(rep.status.ok());
      REQUIRE(rep.has_incumbent);
      CHECK(rep.gap <= 1e-6 + 1e-12);

      const OracleResult orc = brute_force_oracle(inst, 1e-4 * p.x0[0]);
      REQUIRE(orc.status.ok());
      // Incumbent is feasible, the oracle point only filter-feasible: allow
      // the filter sensitivity in the lower direction.
      const double lip_f = lipschitz_bound(inst.objective, inst.lower, inst.upper);
      const double sens = orc.feasibility_tol * lip_f /
                          std::max(1.0, inst.constraints[1].gradient(orc.y).norm());
      CHECK(rep.upper >= orc.value - 1e-6);
      CHECK(rep.upper <= orc.value + lip_f * orc.resolution * 2.0 + sens + 1e-5);

      CHECK(std::max(rep.nodes_processed, rep.relaxations_solved) <=
            worst_case_nodes(dc, {inst.lower, inst.upper}, 1e-6));
    }
  }
}

TEST_CASE("bound sandwich on a general nonconvex instance") {
  std::mt19937_64 rng(82);
  for (int trial = 0; trial < 3; ++trial) {
    const QcqpInstance inst = random_nonconvex_instance(rng, 2, 1);
    const DcInstance dc = make_dc(inst);
    const SolveReport rep = run_scobb(dc, std::nullopt, 1e-5);
    REQUIRE(rep.status.ok());
    REQUIRE(rep.has_incumbent);
    CHECK(is_feasible(inst, rep.incumbent, 1e-5));
    CHECK(rep.lower <= rep.upper + 1e-12);
    CHECK(rep.gap <= 1e-5 + 1e-12);

    const OracleResult orc = brute_force_oracle(inst, 2e-3);
    REQUIRE(orc.status.ok());
    CHECK(rep.lower <= orc.value + 1e-5);
  }
}

TEST_CASE("worst_case_nodes formula") {
  GeneratorConfig cfg;
  cfg.seed = 1;
  cfg.m = 1;
  const DcInstance convex_dc = make_dc(build_qcqp(generate_instance(cfg)));
  const Box box{convex_dc.base.lower, convex_dc.base.upper};
  CHECK(worst_case_nodes(convex_dc, box, 0.01) == 1);  // convex constraints

  // Hand-set split: ||C-|| = 2, two unit widths, eps = 0.01 -> 100 nodes.
  QcqpInstance inst;
  Matrix q(2, 2);
  q << -2.0, 0.0, 0.0, 2.0;
  inst.objective = QuadForm(SymMatrix::Identity(2), Vector::Zero(2), 0.0);
  inst.constraints.push_back(QuadForm(SymMatrix(q), Vector::Zero(2), -1.0));
  inst.lower = Vector::Zero(2);
  inst.upper = Vector::Constant(2, 1.0);
  const DcInstance dc = make_dc(inst);
  CHECK(worst_case_nodes(dc, {inst.lower, inst.upper}, 0.01) == 100);
}

TEST_CASE("node limit reports IterLimit with the current gap") {
  GeneratorConfig cfg;
  cfg.seed = 3;
  cfg.m = 1;
  cfg.regime = GeneratorRegime::Indefinite;
  const LiquidationParams p = generate_instance(cfg);
  const DcInstance dc = make_dc(build_qcqp(p));
  ScobbLimits lim;
  lim.max_nodes = 1;
  const SolveReport rep = run_scobb(dc, p, 1e-10, lim);
  if (rep.status.kind == SolveKind::IterLimit) {
    CHECK(rep.nodes_processed <= 1);
    CHECK(std::isfinite(rep.gap));
  } else {
    CHECK(rep.status.ok());  // tiny instances may finish in one node
  }
}

TEST_CASE("single-thread and two-thread runs agree") {
  GeneratorConfig cfg;
  cfg.seed = 5;
  cfg.m = 1;
  cfg.regime = GeneratorRegime::Indefinite;
  const LiquidationParams p = generate_instance(cfg);
  const DcInstance dc = make_dc(build_qcqp(p));
  const SolveReport a = run_scobb(dc, p, 1e-6);
  ScobbLimits lim;
  lim.threads = 2;
  const SolveReport b = run_scobb(dc, p, 1e-6, lim);
  REQUIRE(a.status.ok());
  REQUIRE(b.status.ok());
  CHECK(a.upper == b.upper);
  CHECK(a.nodes_processed == b.nodes_processed);
  CHECK((a.incumbent - b.incumbent).norm() == 0.0);
}

TEST_CASE("progress callback sees monotone incumbents") {
  GeneratorConfig cfg;
  cfg.seed = 8;
  cfg.m = 1;
  cfg.regime = GeneratorRegime::Indefinite;
  const LiquidationParams p = generate_instance(cfg);
  const DcInstance dc = make_dc(build_qcqp(p));
  double last_upper = std::numeric_limits<double>::infinity();
  std::uint64_t calls = 0;
  const SolveReport rep = run_scobb(dc, p, 1e-6, {},
                                    [&](std::uint64_t, double upper, double, std::size_t) {
                                      CHECK(upper <= last_upper + 1e-12);
                                      last_upper = upper;
                                      ++calls;
                                    });
  REQUIRE(rep.status.ok());
  CHECK(calls >= rep.nodes_processed - 1);
}
