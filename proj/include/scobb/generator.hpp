// Seeded random liquidation instances. The paper-style regime keeps
// gamma < lambda (every quadratic block stays convex); the indefinite regime
// draws gamma in (2*lambda, 3*lambda) so objective and second constraint
// acquire genuine concave parts and the branch-and-bound path is exercised.
#pragma once

#include "scobb/liquidation.hpp"

#include <string>

namespace scobb {

enum class GeneratorRegime { Convex, Indefinite };

GeneratorRegime regime_from_string(const std::string& s);
const char* to_string(GeneratorRegime r);

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int m = 1;
  double pi = 0.3;
  double delta_frac = 0.8;  // delta = delta_frac * delta_max
  double rho1 = 18.0;
  double rho2 = 18.0;
  GeneratorRegime regime = GeneratorRegime::Convex;
};

/// Draws parameters until assumptions validate (at most 100 attempts) and
/// sets delta from the instance's own shock capacity. Deterministic per seed.
LiquidationParams generate_instance(const GeneratorConfig& cfg);

}  // namespace scobb
