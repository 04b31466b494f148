#include "scobb/generator.hpp"
#include "scobb/liquidation.hpp"
#include "scobb/oracle.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace scobb;
using namespace scobb::testing;

TEST_CASE("parameter validation names the broken requirement") {
  LiquidationParams p = small_params();
  p.e0 = 1000.0;  // rho1*e0 > l0
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("rho1*e0 - l0"), std::invalid_argument);
  p = small_params();
  p.gamma[0] = -0.1;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("gamma"), std::invalid_argument);
}

TEST_CASE("block matrices at pinned parameter values") {
  LiquidationParams p = small_params();

  SUBCASE("pi = 1, delta = 0") {
    p.pi = 1.0;
    p.delta = 0.0;
    const QcqpInstance inst = build_qcqp(p);
    const double a = p.lambda[0] - 0.5 * p.gamma[0];
    Matrix expected(2, 2);
    expected << a, -0.5 * p.gamma[0], -0.5 * p.gamma[0], a;
    CHECK((inst.objective.Q.mat() - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(inst.objective.c == doctest::Approx(-p.e0));
  }

  SUBCASE("pi = 0 kills the second-period objective block") {
    p.pi = 0.0;
    const QcqpInstance inst = build_qcqp(p);
    CHECK(inst.objective.Q(1, 1) == 0.0);
    CHECK(inst.objective.Q(0, 1) == 0.0);
    CHECK(inst.objective.q[1] == 0.0);
  }
}

TEST_CASE("objective equals negated expected equity") {
  std::mt19937_64 rng(21);
  GeneratorConfig cfg;
  cfg.seed = 5;
  cfg.m = 2;
  const LiquidationParams p = generate_instance(cfg);
  const QcqpInstance inst = build_qcqp(p);
  for (int trial = 0; trial < 100; ++trial) {
    Vector y(4);
    for (int i = 0; i < 2; ++i) {
      y[i] = uniform(rng, -p.x0[i], 0.0);
      y[2 + i] = uniform(rng, -p.x0[i] - y[i], 0.0);
    }
    CHECK(inst.objective.eval(y) ==
          doctest::Approx(-expected_equity(p, y)).epsilon(1e-12));
  }
}

TEST_CASE("constraints equal the leverage residuals") {
  std::mt19937_64 rng(22);
  GeneratorConfig cfg;
  cfg.seed = 8;
  cfg.m = 2;
  cfg.regime = GeneratorRegime::Indefinite;
  const LiquidationParams p = generate_instance(cfg);
  const QcqpInstance inst = build_qcqp(p);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector y = random_vector(rng, 4, -1.0, 0.0);
    const StateOracle st(p, y, p.delta);
    CHECK(inst.constraints[0].eval(y) ==
          doctest::Approx(st.l1 - p.rho1 * st.e1).epsilon(1e-11));
    CHECK(inst.constraints[1].eval(y) ==
          doctest::Approx(st.l2 - p.rho2 * st.e2).epsilon(1e-11));
  }
}

TEST_CASE("first period state at pinned values") {
  const LiquidationParams p = small_params();

  SUBCASE("no trade keeps the balance sheet") {
    const PeriodState s = first_period_state(p, Vector::Zero(1));
    CHECK(s.e == doctest::Approx(p.e0));
    CHECK(s.l == doctest::Approx(p.l0));
  }

  SUBCASE("hand expansion at y1 = -0.5") {
    const PeriodState s = first_period_state(p, Vector::Constant(1, -0.5));
    // e1 = 10 + 0.5*1*(-0.5) - 0.25*(1 - 0.25) = 9.5625
    // l1 = 100 + 4*(-0.5) + 0.25*(1 + 0.25) = 98.3125
    CHECK(s.e == doctest::Approx(9.5625));
    CHECK(s.l == doctest::Approx(98.3125));
  }

  SUBCASE("full liquidation balance identity") {
    const PeriodState s = first_period_state(p, Vector(-p.x0));
    CHECK(s.e + s.l == doctest::Approx(p.e0 + p.l0 - p.p0.dot(p.x0)).epsilon(1e-12));
  }
}

TEST_CASE("second period state") {
  const LiquidationParams p = small_params();

  SUBCASE("no trade, no shock") {
    const PeriodState s = second_period_state(p, Vector::Zero(2), 0.0);
    CHECK(s.e == doctest::Approx(p.e0));
    CHECK(s.l == doctest::Approx(p.l0));
  }

  SUBCASE("withdrawal moves equity to liabilities") {
    const PeriodState s = second_period_state(p, Vector::Zero(2), p.delta);
    CHECK(s.e == doctest::Approx(p.e0 - p.delta));
    CHECK(s.l == doctest::Approx(p.l0 + p.delta));
  }

  SUBCASE("matches the block expansion oracle on random trades") {
    std::mt19937_64 rng(31);
    GeneratorConfig cfg;
    cfg.seed = 3;
    cfg.m = 2;
    const LiquidationParams gp = generate_instance(cfg);
    for (int trial = 0; trial < 50; ++trial) {
      const Vector y = random_vector(rng, 4, -1.0, 0.0);
      const StateOracle st(gp, y, gp.delta);
      const PeriodState s = second_period_state(gp, y, gp.delta);
      CHECK(s.e == doctest::Approx(st.e2).epsilon(1e-12));
      CHECK(s.l == doctest::Approx(st.l2).epsilon(1e-12));
    }
  }
}

TEST_CASE("expected equity collapses at pi = 0 and pi = 1") {
  LiquidationParams p = small_params();
  const Vector y = Vector::Constant(2, -0.3);
  p.pi = 0.0;
  CHECK(expected_equity(p, y) == doctest::Approx(first_period_state(p, y.head(1)).e));
  p.pi = 1.0;
  CHECK(expected_equity(p, y) == doctest::Approx(second_period_state(p, y, p.delta).e));
}

TEST_CASE("eval of the pinned second constraint matches the state route") {
  LiquidationParams p = small_params();
  p.rho2 = 2.0;
  const QcqpInstance inst = build_qcqp(p);
  const Vector y = Vector::Constant(2, -0.5);
  const PeriodState s2 = second_period_state(p, y, p.delta);
  CHECK(inst.constraints[1].eval(y) == doctest::Approx(s2.l - p.rho2 * s2.e).epsilon(1e-12));
}

TEST_CASE("shock capacity closed form") {
  SUBCASE("pinned instance satisfies the first sign case") {
    // rho2*(lambda - gamma) + (lambda + gamma) = 2.5 > 0 and p0 = 4 > 3.5.
    const LiquidationParams p = shock_params();
    const ShockCapacity cap = shock_capacity(p);
    CHECK(cap.closed_form_valid);
    // Grid maximization agrees.
    LiquidationParams probe = p;
    probe.p0[0] = 3.4;  // breaks the price floor: forces the grid fallback
    const ShockCapacity grid = shock_capacity(probe, 1e-3);
    CHECK_FALSE(grid.closed_form_valid);
  }

  SUBCASE("closed form equals grid maximization") {
    const LiquidationParams p = shock_params();
    const ShockCapacity closed = shock_capacity(p);
    // Independent 2-D maximization of rho2*e2 - l2 at zero shock, offset by
    // the no-trade value, over (y1, y1+y2).
    double best = -1e300;
    const int steps = 1000;
    for (int i = 0; i <= steps; ++i) {
      const double y1 = -p.x0[0] + p.x0[0] * i / static_cast<double>(steps);
      const PeriodState s1 = first_period_state(p, Vector::Constant(1, y1));
      if (p.rho1 * s1.e - s1.l < 0.0) continue;
      for (int k = 0; k <= steps; ++k) {
        const double sum = -p.x0[0] + p.x0[0] * k / static_cast<double>(steps);
        Vector y(2);
        y << y1, sum - y1;
        const StateOracle st(p, y, 0.0);
        best = std::max(best, p.rho2 * st.e2 - st.l2 - (p.rho2 * p.e0 - p.l0));
      }
    }
    CHECK(closed.g_star == doctest::Approx(best).epsilon(1e-9));
  }

  SUBCASE("assumption violations are named") {
    LiquidationParams p = shock_params();
    p.x0[0] = 1e6;  // half sale can no longer recover the leverage cap
    CHECK_THROWS_WITH_AS(shock_capacity(p), doctest::Contains("-x0/2"), std::invalid_argument);
  }
}

TEST_CASE("activity check") {
  GeneratorConfig cfg;
  cfg.seed = 4;
  cfg.m = 1;
  const LiquidationParams p = generate_instance(cfg);

  SUBCASE("strictly slack feasible point is inactive") {
    GeneratorConfig slack_cfg;
    slack_cfg.seed = 4;
    slack_cfg.m = 1;
    slack_cfg.delta_frac = 0.0;  // second cap strictly slack at the half-sale point
    const LiquidationParams slack = generate_instance(slack_cfg);
    Vector y(2);
    y << -0.5 * slack.x0, -0.5 * slack.x0;
    const ActivityReport rep = check_optimality_activity(slack, y, 1e-6);
    CHECK_FALSE(rep.active);
    CHECK(rep.leverage_defined);
  }

  SUBCASE("grid optimum activates the second cap") {
    const QcqpInstance inst = build_qcqp(p);
    const OracleResult orc = brute_force_oracle(inst, 2e-4 * p.x0[0]);
    REQUIRE(orc.status.ok());
    const double tol = 2.0 * orc.feasibility_tol + 1e-6;
    const ActivityReport rep = check_optimality_activity(p, orc.y, tol);
    CHECK(rep.active);
  }

  SUBCASE("infeasible point is rejected") {
    Vector y = Vector::Constant(2, 1.0);  // outside the box
    CHECK_THROWS_AS(check_optimality_activity(p, y, 1e-8), std::invalid_argument);
  }
}

TEST_CASE("check_assumptions flags constructed violations") {
  SUBCASE("generated instances pass all three") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      GeneratorConfig cfg;
      cfg.seed = seed;
      cfg.m = 3;
      const AssumptionReport rep = check_assumptions(generate_instance(cfg));
      CHECK(rep.leverage_crisis);
      CHECK(rep.half_sale_recovers);
      CHECK(rep.slater);
    }
  }

  SUBCASE("large equity breaks the crisis assumption") {
    LiquidationParams p = small_params();
    p.e0 = 1e6;
    const AssumptionReport rep = check_assumptions(p);
    CHECK_FALSE(rep.leverage_crisis);
  }

  SUBCASE("scaled holdings break the half-sale recovery") {
    LiquidationParams p = small_params();
    p.x0[0] = 1e6;
    const AssumptionReport rep = check_assumptions(p);
    CHECK_FALSE(rep.half_sale_recovers);
  }
}

TEST_CASE("generator is deterministic and respects delta_frac") {
  GeneratorConfig cfg;
  cfg.seed = 9;
  cfg.m = 2;
  const LiquidationParams a = generate_instance(cfg);
  const LiquidationParams b = generate_instance(cfg);
  CHECK((a.lambda - b.lambda).norm() == 0.0);
  CHECK((a.p0 - b.p0).norm() == 0.0);
  CHECK(a.delta == b.delta);

  LiquidationParams zero_delta = a;
  zero_delta.delta = 0.0;
  const ShockCapacity cap = shock_capacity(zero_delta);
  CHECK(a.delta == doctest::Approx(0.8 * cap.delta_max).epsilon(1e-12));

  GeneratorConfig nodelta = cfg;
  nodelta.delta_frac = 0.0;
  const LiquidationParams c = generate_instance(nodelta);
  CHECK(c.delta == 0.0);
  const QcqpInstance inst = build_qcqp(c);
  CHECK(inst.constraints[1].c == doctest::Approx(c.l0 - c.rho2 * c.e0));
}

TEST_CASE("feasibility of the half-sale point under generated parameters") {
  GeneratorConfig cfg;
  cfg.seed = 12;
  cfg.m = 2;
  const LiquidationParams p = generate_instance(cfg);
  const QcqpInstance inst = build_qcqp(p);
  Vector y(4);
  y << -0.5 * p.x0, -0.5 * p.x0;
  CHECK(is_feasible(inst, y, 0.0));
}
