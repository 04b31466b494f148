#include "scobb/generator.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace scobb {

GeneratorRegime regime_from_string(const std::string& s) {
  if (s == "convex") return GeneratorRegime::Convex;
  if (s == "indefinite") return GeneratorRegime::Indefinite;
  throw std::invalid_argument("unknown regime '" + s + "' (expected convex|indefinite)");
}

const char* to_string(GeneratorRegime r) {
  return r == GeneratorRegime::Convex ? "convex" : "indefinite";
}

namespace {

// Platform-stable uniform in [lo, hi) from the raw 64-bit stream.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace

LiquidationParams generate_instance(const GeneratorConfig& cfg) {
  if (cfg.m < 1) throw std::invalid_argument("generate_instance: m must be >= 1");
  if (cfg.pi < 0.0 || cfg.pi > 1.0) throw std::invalid_argument("generate_instance: pi must be in [0, 1]");
  if (cfg.delta_frac < 0.0 || cfg.delta_frac >= 1.0) {
    throw std::invalid_argument("generate_instance: delta_frac must be in [0, 1)");
  }

  std::mt19937_64 rng(cfg.seed);
  std::string last_error;
  for (int attempt = 0; attempt < 100; ++attempt) {
    LiquidationParams p;
    p.m = cfg.m;
    p.rho1 = cfg.rho1;
    p.rho2 = cfg.rho2;
    p.pi = cfg.pi;
    p.lambda.resize(cfg.m);
    p.gamma.resize(cfg.m);
    p.x0.resize(cfg.m);
    p.p0.resize(cfg.m);
    for (int i = 0; i < cfg.m; ++i) {
      p.lambda[i] = uniform(rng, 0.5, 2.0);
      p.gamma[i] = (cfg.regime == GeneratorRegime::Convex)
                       ? uniform(rng, 0.1, p.lambda[i])
                       : uniform(rng, 2.1 * p.lambda[i], 2.8 * p.lambda[i]);
      p.x0[i] = uniform(rng, 1.0, 2.0);
      // Price floor that covers every shock-capacity sign case and leaves
      // room for the half-sale assumption.
      p.p0[i] = (cfg.rho2 + 2.0) * (p.lambda[i] + p.gamma[i]) * p.x0[i];
    }

    // Margin of the half-sale recovery at rho1*e0 - l0 = 0: with
    // l0 = rho1*e0 + K/2 the two assumption inequalities become -K/2 and K/2.
    double scale_p0 = 1.0;
    for (int grow = 0; grow < 40; ++grow) {
      const Vector p0 = scale_p0 * p.p0;
      const double k_margin = 0.5 * p0.dot(p.x0) -
                              0.25 * (p.rho1 + 1.0) * p.x0.dot(p.lambda.cwiseProduct(p.x0)) -
                              (0.375 * p.rho1 + 0.125) * p.x0.dot(p.gamma.cwiseProduct(p.x0));
      if (k_margin > 1e-6 * p0.dot(p.x0)) {
        p.p0 = p0;
        p.e0 = 0.05 * p0.dot(p.x0);
        p.l0 = p.rho1 * p.e0 + 0.5 * k_margin;
        break;
      }
      scale_p0 *= 2.0;
    }
    if (p.e0 <= 0.0) {
      last_error = "could not find a positive half-sale margin";
      continue;
    }

    try {
      p.delta = 0.0;
      const ShockCapacity cap = shock_capacity(p);
      if (!(cap.delta_max > 0.0)) {
        last_error = "nonpositive shock capacity";
        continue;
      }
      p.delta = cfg.delta_frac * cap.delta_max;
      const AssumptionReport rep = check_assumptions(p);
      if (!rep.all()) {
        last_error = "assumption check failed after draw";
        continue;
      }
      return p;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  std::ostringstream msg;
  msg << "generate_instance: 100 attempts failed validation (seed " << cfg.seed << ", m " << cfg.m
      << ", regime " << to_string(cfg.regime) << "); last error: " << last_error;
  throw std::runtime_error(msg.str());
}

}  // namespace scobb
