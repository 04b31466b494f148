#include "scobb/generator.hpp"
#include "scobb/io.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

using namespace scobb;
using namespace scobb::testing;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("liquidation round trip is exact and byte-stable") {
  GeneratorConfig cfg;
  cfg.seed = 14;
  cfg.m = 3;
  InstanceFile file;
  file.liquidation = generate_instance(cfg);
  file.provenance["seed"] = "14";

  const std::string text = serialize_instance(file);
  const InstanceFile back = parse_instance(text);
  REQUIRE(back.liquidation.has_value());
  CHECK((back.liquidation->lambda - file.liquidation->lambda).norm() == 0.0);
  CHECK((back.liquidation->p0 - file.liquidation->p0).norm() == 0.0);
  CHECK(back.liquidation->delta == file.liquidation->delta);
  CHECK(back.provenance.at("seed") == "14");
  CHECK(serialize_instance(back) == text);
}

TEST_CASE("general-form round trip through a file") {
  std::mt19937_64 rng(15);
  InstanceFile file;
  file.general = random_nonconvex_instance(rng, 3, 3);

  const auto path = temp_file("scobb_io_test.json");
  save_instance(path.string(), file);
  const InstanceFile back = load_instance(path.string());
  std::filesystem::remove(path);

  REQUIRE(back.general.has_value());
  REQUIRE(back.general->constraints.size() == 3);
  CHECK((back.general->objective.Q.mat() - file.general->objective.Q.mat()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((back.general->lower - file.general->lower).norm() == 0.0);
  const Vector y = random_vector(rng, 3, -0.5, 0.5);
  CHECK(back.general->constraints[2].eval(y) == file.general->constraints[2].eval(y));
}

TEST_CASE("schema violations name the field") {
  CHECK_THROWS_WITH_AS(parse_instance("{"), doctest::Contains("instance file"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"schema_version": "1"})"),
                       doctest::Contains("liquidation"), std::invalid_argument);
  const char* missing_lambda = R"({
    "schema_version": "1",
    "liquidation": {"m": 1, "gamma": [0.5], "p0": [4.0], "x0": [1.0],
                     "e0": 10.0, "l0": 100.0, "rho1": 2.0, "rho2": 2.0,
                     "pi": 0.3, "delta": 0.1}
  })";
  CHECK_THROWS_WITH_AS(parse_instance(missing_lambda), doctest::Contains("lambda"),
                       std::invalid_argument);
  const char* both = R"({"schema_version": "1", "liquidation": {}, "general": {}})";
  CHECK_THROWS_WITH_AS(parse_instance(both), doctest::Contains("exactly one"),
                       std::invalid_argument);
}

TEST_CASE("parameter validation runs on load") {
  const char* bad = R"({
    "schema_version": "1",
    "liquidation": {"m": 1, "lambda": [1.0], "gamma": [0.5], "p0": [4.0], "x0": [1.0],
                     "e0": 10.0, "l0": 1.0, "rho1": 2.0, "rho2": 2.0,
                     "pi": 0.3, "delta": 0.1}
  })";
  CHECK_THROWS_WITH_AS(parse_instance(bad), doctest::Contains("rho1*e0 - l0"),
                       std::invalid_argument);
}
