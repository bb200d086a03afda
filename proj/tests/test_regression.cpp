#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "smlab/regression.hpp"

using namespace smlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exact power data", "[regression]") {
  const auto x = log_space(1e-4, 1e-1, 10);
  std::vector<double> y;
  for (double e : x) y.push_back(3.0 * std::pow(e, 1.5));
  const auto f = fit_log_log(x, y);
  CHECK_THAT(f.exponent, WithinAbs(1.5, 1e-12));
  CHECK_THAT(f.intercept, WithinAbs(std::log(3.0), 1e-10));
  CHECK_THAT(f.r2, WithinAbs(1.0, 1e-12));
  CHECK(f.stderr_ < 1e-10);
  CHECK(f.points_used == 10);
}

TEST_CASE("noisy data keeps r2 in [0,1]", "[regression]") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{1, 5, 2, 4, 3};
  const auto f = fit_log_log(x, y);
  CHECK(f.r2 >= 0.0);
  CHECK(f.r2 <= 1.0);
  CHECK(f.stderr_ > 0.0);
}

TEST_CASE("fit errors", "[regression]") {
  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(fit_log_log(two, two), InsufficientDataError);
  const std::vector<double> same{1, 1, 1};
  CHECK_THROWS_AS(fit_log_log(same, std::vector<double>{1, 2, 3}), InputError);
  CHECK_THROWS_AS(fit_log_log(std::vector<double>{1, 2, 3}, std::vector<double>{1, -2, 3}), InputError);
}

TEST_CASE("log_space endpoints and ratio", "[regression]") {
  const auto g = log_space(3e-4, 3e-2, 12);
  REQUIRE(g.size() == 12);
  CHECK(g.front() == 3e-4);
  CHECK(g.back() == 3e-2);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK_THAT(g[i] / g[i - 1], WithinRel(std::pow(100.0, 1.0 / 11), 1e-12));
  CHECK_THROWS_AS(log_space(1.0, 0.5, 3), InputError);
}
