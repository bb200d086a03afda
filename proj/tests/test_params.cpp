#include <catch_amalgamated.hpp>

#include <string>

#include "smlab/error.hpp"
#include "smlab/params.hpp"

using namespace smlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("derived constants", "[params]") {
  const auto p = ModelParams::make(2, 0.25, 1);
  CHECK_THAT(p.t_max(), WithinRel(4.0 / 3.0, 1e-15));
  CHECK_THAT(p.hardy_c(), WithinRel(1.5, 1e-15));
  CHECK_THAT(p.mink_dim(), WithinRel(4.0 / 3.0, 1e-15));
  CHECK_THAT(p.decay_exp(), WithinRel(2.0 + 2.0 / 1.5, 1e-15));
  CHECK_THAT(p.rate_exp(), WithinRel(4.0 / 3.0, 1e-15));
  CHECK(p.model_beta() == 0.0);

  const auto q = ModelParams::make(3, 0.2);
  CHECK_THAT(q.hardy_c(), WithinRel(1.6 / 1.2, 1e-15));
  CHECK_THAT(q.model_beta(), WithinAbs(-0.2, 1e-15));
  CHECK_THAT(q.mink_dim(), WithinRel(2.5, 1e-15));
}

TEST_CASE("rate exponent at N=2 equals 1/(1-gamma)", "[params]") {
  for (double g : {0.0, 0.1, 0.25, 0.4, 0.49}) {
    const auto p = ModelParams::make(2, g);
    CHECK_THAT(p.rate_exp(), WithinRel(1.0 / (1.0 - g), 1e-14));
  }
}

TEST_CASE("validation of N*gamma < 1", "[params]") {
  CHECK_THROWS_AS(ModelParams::make(2, 0.6), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(2, 0.5), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(3, 1.0 / 3.0), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(2, -0.1), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(1, 0.1), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(2, 0.1, 0, -1.0), ParameterError);
  try {
    ModelParams::make(2, 0.6);
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("N*gamma < 1") != std::string::npos);
  }
}

TEST_CASE("only |n| matters", "[params]") {
  CHECK(ModelParams::make(2, 0.1, -3).abs_mode() == 3);
}
