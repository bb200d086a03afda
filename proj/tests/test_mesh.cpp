#include <catch_amalgamated.hpp>

#include <cmath>

#include "smlab/mesh.hpp"

using namespace smlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
void check_increasing(const Mesh& m) {
  for (std::size_t i = 1; i < m.size(); ++i) {
    REQUIRE(m.node(i) >= m.node(i - 1));
    REQUIRE(m.length(i - 1) > 0.0);
  }
  CHECK(m.from_lo(0) == 0.0);
  CHECK(m.from_hi(m.size() - 1) == 0.0);
}
}  // namespace

TEST_CASE("uniform mesh", "[mesh]") {
  const auto m = Mesh::uniform(0.0, 2.0, 8);
  CHECK(m.size() == 9);
  CHECK_THAT(m.node(4), WithinAbs(1.0, 1e-15));
  CHECK_THAT(m.min_length(), WithinRel(0.25, 1e-14));
  check_increasing(m);
}

TEST_CASE("double-graded mesh", "[mesh]") {
  const auto m = Mesh::graded(0.0, 1.0, 1024, Grading::double_graded, 0.9, 1e-10);
  CHECK(m.elements() == 1024);
  check_increasing(m);
  CHECK_THAT(m.length(0), WithinRel(1e-10, 1e-6));
  CHECK_THAT(m.length(m.elements() - 1), WithinRel(1e-10, 1e-4));
  // the node next to hi is resolved at full precision in the far coordinate
  CHECK_THAT(m.from_hi(m.size() - 2), WithinRel(1e-10, 1e-6));
  CHECK_THAT(m.length(1) / m.length(0), WithinRel(1.0 / 0.9, 1e-8));
  CHECK_THROWS_AS(Mesh::graded(0.0, 1.0, 64, Grading::double_graded, 0.9, 1e-10), ParameterError);
  CHECK_THROWS_AS(Mesh::graded(0.0, 1.0, 1024, Grading::double_graded, 0.4, 1e-6), ParameterError);
}

TEST_CASE("geometric mesh", "[mesh]") {
  const auto m = Mesh::geometric(0.0, 1.0, 20, Grading::toward_right, 0.55);
  check_increasing(m);
  CHECK_THAT(m.from_hi(m.size() - 2), WithinRel(std::pow(0.55, 19), 1e-12));
  CHECK_THAT(m.from_hi(m.size() - 3) / m.from_hi(m.size() - 2), WithinRel(1.0 / 0.55, 1e-12));
}

TEST_CASE("refinement is nested", "[mesh]") {
  const auto m = Mesh::graded(0.0, 1.0, 1024, Grading::toward_right, 0.8, 1e-8);
  const auto r = m.refined();
  REQUIRE(r.size() == 2 * m.size() - 1);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(r.from_lo(2 * i) == m.from_lo(i));
    CHECK(r.from_hi(2 * i) == m.from_hi(i));
  }
  CHECK_THAT(r.max_length(), WithinRel(0.5 * m.max_length(), 1e-10));
  check_increasing(r);
}

TEST_CASE("from_nodes validation", "[mesh]") {
  CHECK_THROWS(Mesh::from_nodes({0.0, 0.5, 0.4, 1.0}));
  CHECK_THROWS_AS(Mesh::from_nodes({0.0}), InputError);
  const auto m = Mesh::from_nodes({0.0, 0.1, 0.5, 1.0});
  CHECK(m.elements() == 3);
  CHECK(!m.describe().empty());
}
