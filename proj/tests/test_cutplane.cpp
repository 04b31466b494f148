#include "scobb/cutplane.hpp"
#include "scobb/generator.hpp"
#include "scobb/oracle.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace scobb;
using namespace scobb::testing;

namespace {

LiquidationParams seeded(int m, std::uint64_t seed, GeneratorRegime regime) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.m = m;
  cfg.regime = regime;
  return generate_instance(cfg);
}

}  // namespace

TEST_CASE("lagrangian_min") {
  const LiquidationParams p = seeded(2, 3, GeneratorRegime::Convex);
  const QcqpInstance inst = build_qcqp(p);

  SUBCASE("negative multipliers are rejected") {
    CHECK_THROWS_AS(lagrangian_min(p, -1.0, 0.0), std::invalid_argument);
  }

  SUBCASE("at zero multipliers theta evaluates f at the minimizer") {
    const auto [theta, y] = lagrangian_min(p, 0.0, 0.0);
    CHECK(theta == doctest::Approx(inst.objective.eval(y)).epsilon(1e-11));
  }

  SUBCASE("theta lower-bounds the Lagrangian at sampled feasible points") {
    std::mt19937_64 rng(9);
    for (const auto& [t1, t2] : std::vector<std::pair<double, double>>{
             {0.0, 0.0}, {0.5, 0.0}, {0.0, 2.0}, {1.5, 3.0}}) {
      const auto [theta, y_min] = lagrangian_min(p, t1, t2);
      for (int trial = 0; trial < 50; ++trial) {
        Vector y(4);
        for (int i = 0; i < 2; ++i) {
          y[i] = uniform(rng, -p.x0[i], 0.0);
          y[2 + i] = uniform(rng, -p.x0[i] - y[i], 0.0);
        }
        const double lag = inst.objective.eval(y) + t1 * inst.constraints[0].eval(y) +
                           t2 * inst.constraints[1].eval(y);
        CHECK(theta <= lag + 1e-9 * (1.0 + std::abs(lag)));
      }
    }
  }

  SUBCASE("matches a grid scan of the Lagrangian on m = 1") {
    const LiquidationParams p1 = seeded(1, 5, GeneratorRegime::Indefinite);
    const QcqpInstance i1 = build_qcqp(p1);
    const double t1 = 0.7, t2 = 1.3;
    const auto [theta, y_min] = lagrangian_min(p1, t1, t2);
    double grid = 1e300;
    const int steps = 400;
    for (int a = 0; a <= steps; ++a) {
      const double y1 = -p1.x0[0] * a / static_cast<double>(steps);
      for (int b = 0; b <= steps - a; ++b) {
        const double y2 = -p1.x0[0] * b / static_cast<double>(steps);
        Vector y(2);
        y << y1, y2;
        const double lag = i1.objective.eval(y) + t1 * i1.constraints[0].eval(y) +
                           t2 * i1.constraints[1].eval(y);
        grid = std::min(grid, lag);
      }
    }
    CHECK(theta <= grid + 1e-9);
    CHECK(theta >= grid - 0.05);  // grid resolution slack
  }
}

TEST_CASE("restricted_dual") {
  SUBCASE("single cut with negative slopes pins multipliers at zero") {
    Cut c;
    c.fval = -3.0;
    c.gval = -1.0;
    c.hval = -2.0;
    const RestrictedDual rd = restricted_dual({c}, 1e6);
    REQUIRE(rd.status.ok());
    CHECK(rd.z == doctest::Approx(-3.0));
    CHECK(rd.t1 == doctest::Approx(0.0));
    CHECK(rd.t2 == doctest::Approx(0.0));
  }

  SUBCASE("bound zero pins z at the smallest cut value") {
    std::vector<Cut> cuts(3);
    cuts[0].fval = 2.0;
    cuts[1].fval = -1.0;
    cuts[2].fval = 0.5;
    for (auto& c : cuts) {
      c.gval = 1.0;
      c.hval = 1.0;
    }
    const RestrictedDual rd = restricted_dual(cuts, 0.0);
    REQUIRE(rd.status.ok());
    CHECK(rd.z == doctest::Approx(-1.0));
  }

  SUBCASE("two-cut intersection") {
    // z <= 1 + t, z <= 3 - t (t = t1, slopes via gval), t2 inert.
    Cut a, b;
    a.fval = 1.0;
    a.gval = 1.0;
    a.hval = 0.0;
    b.fval = 3.0;
    b.gval = -1.0;
    b.hval = 0.0;
    const RestrictedDual rd = restricted_dual({a, b}, 1e6);
    REQUIRE(rd.status.ok());
    CHECK(rd.z == doctest::Approx(2.0));
    CHECK(rd.t1 == doctest::Approx(1.0));
  }

  SUBCASE("empty cut list is rejected") {
    CHECK_THROWS_AS(restricted_dual({}, 1.0), std::invalid_argument);
  }
}

TEST_CASE("run_cutplane on seeded instances") {
  for (auto regime : {GeneratorRegime::Convex, GeneratorRegime::Indefinite}) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const LiquidationParams p = seeded(1, seed, regime);
      const QcqpInstance inst = build_qcqp(p);
      const CutPlaneResult res = run_cutplane(p);
      REQUIRE(res.status.kind != SolveKind::NumericalFailure);

      // z^k nonincreasing.
      for (std::size_t k = 1; k < res.trace.size(); ++k) {
        CHECK(res.trace[k].first <= res.trace[k - 1].first + 1e-12);
      }
      // Cut validity: while the loop continued, the dual point was cut away.
      for (std::size_t k = 0; k + 1 < res.trace.size(); ++k) {
        CHECK(res.trace[k].first > res.trace[k].second);
      }
      // A feasible point is returned under the model assumptions.
      REQUIRE(res.feasible_point.has_value());
      CHECK(is_feasible(inst, *res.feasible_point, 1e-9));

      // Weak duality against the primal grid optimum.
      const OracleResult orc = brute_force_oracle(inst, 5e-4 * p.x0.minCoeff());
      REQUIRE(orc.status.ok());
      const double lip = lipschitz_bound(inst.objective, inst.lower, inst.upper);
      CHECK(res.dual_value <= orc.value + lip * orc.resolution * 2.0 + orc.feasibility_tol + 1e-5);
    }
  }
}

TEST_CASE("cutplane terminates at the unconstrained optimum when caps are slack") {
  // Enlarge the shock capacity head-room so the leverage constraints stay
  // inactive at the box-constrained optimum: multipliers end near zero.
  LiquidationParams p = seeded(1, 7, GeneratorRegime::Convex);
  p.delta = 0.0;
  p.l0 = p.rho1 * p.e0 + 1e-9;  // barely in crisis; essentially slack caps
  const CutPlaneResult res = run_cutplane(p);
  REQUIRE(res.status.ok());
  const QcqpInstance inst = build_qcqp(p);
  const auto [theta0, y0] = lagrangian_min(p, 0.0, 0.0);
  CHECK(res.dual_value == doctest::Approx(theta0).epsilon(1e-6));
}
