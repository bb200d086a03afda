#include <catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "oracles.hpp"
#include "smlab/assembly.hpp"
#include "smlab/geometry.hpp"
#include "smlab/pencil.hpp"
#include "smlab/quadrature.hpp"
#include "smlab/reduction.hpp"

using namespace smlab;
using namespace smlab::reduction;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("radial problem validation", "[reduction]") {
  CHECK_THROWS_AS(RadialProblem::make(0.5, 0), ParameterError);
  const auto p = RadialProblem::make(0.25, 2);
  CHECK_THAT(p.t_max, WithinRel(4.0 / 3.0, 1e-15));
  CHECK(p.t_max >= 1.0);
  CHECK(p.t_max < 2.0);
}

TEST_CASE("warp at gamma = 0 is the identity", "[reduction]") {
  const auto p = RadialProblem::make(0.0, 0);
  for (double t : {0.1, 0.5, 0.9}) {
    const auto v = warp(t, p);
    CHECK_THAT(v.w, WithinAbs(t, 1e-15));
    CHECK_THAT(v.d1, WithinAbs(1.0, 1e-15));
    CHECK(v.d2 == 0.0);
  }
}

TEST_CASE("warp endpoints and domain", "[reduction]") {
  const auto p = RadialProblem::make(0.25, 0);
  CHECK_THROWS_AS(warp(0.0, p), DomainError);
  CHECK_THROWS_AS(warp(p.t_max, p), DomainError);
  CHECK_THAT(warp(1e-12, p).w, WithinAbs(0.0, 1e-11));
  CHECK_THAT(warp(TPoint::from_tail(1e-12, p), p).w, WithinAbs(1.0, 1e-11));
  // 1 - w near t_max keeps relative precision
  CHECK_THAT(warp(TPoint::from_tail(1e-12, p), p).s, WithinRel(std::pow(1e-12 / p.t_max, p.t_max), 1e-12));
}

TEST_CASE("warp derivatives against finite differences", "[reduction]") {
  for (double g : {0.1, 0.25, 0.4}) {
    const auto p = RadialProblem::make(g, 0);
    const oracle::Warp o{g};
    const auto w = [&](double t) { return o.w(t); };
    const auto w1 = [&](double t) { return oracle::central_difference(w, t, 1e-3); };
    const auto w2 = [&](double t) { return oracle::central_difference(w1, t, 1e-3); };
    for (double f : {0.2, 0.6, 1.0}) {
      const double t = f * p.t_max * 0.9;
      const auto v = warp(t, p);
      CHECK_THAT(v.w, WithinAbs(o.w(t), 1e-14));
      CHECK_THAT(v.d1, WithinAbs(w1(t), 1e-6));
      CHECK_THAT(v.d2, WithinAbs(w2(t), 1e-6));
      CHECK_THAT(v.d3, WithinAbs(oracle::central_difference(w2, t, 1e-3), 1e-6));
    }
  }
}

TEST_CASE("warp is an increasing bijection consistent with the boundary distance", "[reduction][property]") {
  for (double g : {0.0, 0.1, 0.25, 0.4}) {
    const auto p = RadialProblem::make(g, 0);
    double prev = 0.0;
    for (int i = 1; i < 400; ++i) {
      const double t = p.t_max * i / 400.0;
      const auto v = warp(t, p);
      REQUIRE(v.w > prev);
      REQUIRE(v.w < 1.0);
      prev = v.w;
      REQUIRE_THAT(geometry::riem_dist_to_boundary(v.s, g), WithinAbs(p.t_max - t, 1e-13));
    }
  }
}

TEST_CASE("closed potential examples", "[reduction]") {
  CHECK_THAT(potential_closed(0.5, RadialProblem::make(0.0, 0)), WithinAbs(-1.0, 1e-14));
  CHECK_THAT(potential_closed(0.5, RadialProblem::make(0.0, 1)), WithinAbs(3.0, 1e-14));
  for (int n : {0, 1, 2, 3}) {
    CHECK_THAT(potential_derivative_form(0.3, RadialProblem::make(0.0, n)), WithinRel((n * n - 0.25) / 0.09, 1e-14));
  }
  CHECK_THROWS_AS(potential_closed(0.0, RadialProblem::make(0.1, 0)), DomainError);
  CHECK_THROWS_AS(potential_derivative_form(1.0 / 0.9, RadialProblem::make(0.1, 0)), DomainError);
}

TEST_CASE("closed and derivative forms agree", "[reduction][property]") {
  for (double g : {0.0, 0.1, 0.25, 0.4}) {
    for (int n : {0, 1, 2}) {
      const auto p = RadialProblem::make(g, n);
      const oracle::Warp o{g};
      for (int i = 0; i <= 500; ++i) {
        const double t = 0.01 + (p.t_max - 0.02) * i / 500.0;
        const double a = potential_closed(t, p);
        const double b = potential_derivative_form(t, p);
        REQUIRE_THAT(b, WithinRel(a, 1e-9));
        REQUIRE_THAT(a, WithinRel(o.closed_potential(t, n), 1e-9));
      }
    }
  }
  CHECK_THAT(potential_closed(1.0, RadialProblem::make(0.25, 0)),
             WithinRel(potential_derivative_form(1.0, RadialProblem::make(0.25, 0)), 1e-9));
  const auto p = RadialProblem::make(0.25, 1);
  CHECK(std::abs(potential_closed(0.5, p) - potential_derivative_form(0.5, p)) < 1e-9);
}

TEST_CASE("endpoint asymptotics", "[reduction]") {
  CHECK(potential_asymptotics(RadialProblem::make(0.1, 2)).coeff_origin == 3.75);
  const auto a = potential_asymptotics(RadialProblem::make(0.25, 0));
  CHECK_THAT(a.coeff_boundary, WithinRel(0.4375 / 2.25, 1e-14));
  CHECK_THAT(a.boundary_correction_order, WithinRel(2.0 / 3.0, 1e-14));
  CHECK(a.origin_correction_order == -1.0);

  // (t_max - t)^2 V at t = t_max - 10^-k converges at the stated order
  const auto p = RadialProblem::make(0.25, 0);
  for (int k = 2; k <= 6; ++k) {
    const double x = std::pow(10.0, -k);
    const double lim = x * x * potential_closed(TPoint::from_tail(x, p), p);
    CHECK(std::abs(lim - a.coeff_boundary) <= 10.0 * std::pow(x, 2 + 2.0 / 3.0) / (x * x) * x * x);
    CHECK(std::abs(lim - a.coeff_boundary) <= std::pow(10.0, -k * 2 * 0.25 / 0.75));
  }

  for (double g : {0.1, 0.25, 0.4}) {
    for (int n : {0, 1, 2}) {
      const auto r = potential_asymptotics(RadialProblem::make(g, n));
      CHECK(r.observed_origin_order >= r.origin_correction_order - 0.05);
      CHECK(r.observed_boundary_order >= r.boundary_correction_order - 0.05);
      CHECK_THAT(r.origin_limits.back(), WithinAbs(r.coeff_origin, 1e-4));
      CHECK_THAT(r.boundary_limits.back(), WithinAbs(r.coeff_boundary, 1e-4));
    }
  }
  // gamma = 0 has no correction at all
  CHECK(std::isinf(potential_asymptotics(RadialProblem::make(0.0, 1)).observed_origin_order));
}

TEST_CASE("transport of r gives t^(3/2) at gamma = 0", "[reduction]") {
  const auto p = RadialProblem::make(0.0, 1);
  const auto m = Mesh::uniform(0.0, 1.0, 64);
  std::vector<double> g;
  for (std::size_t i = 0; i < m.size(); ++i) g.push_back(m.node(i));
  const CubicInterpolant gi(m, g);
  std::vector<TPoint> ts;
  for (double t : {0.0, 0.1, 0.37, 0.8, 0.99}) ts.push_back(TPoint::at(t, p));
  const auto h = transport_eigenfunction(gi, p, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK_THAT(h[i], WithinAbs(std::pow(ts[i].t, 1.5), 1e-14));
  CHECK_THROWS_AS(CubicInterpolant(Mesh::uniform(0.0, 0.5, 8), std::vector<double>(9, 0.0))(0.7, 0.3), DomainError);
}

TEST_CASE("transport is an isometry and solves the Schrodinger equation", "[reduction]") {
  const double gamma = 0.25;
  const auto params = ModelParams::make(2, gamma, 1);
  const auto prob = RadialProblem::make(gamma, 1);
  auto mesh = std::make_shared<const Mesh>(Mesh::graded(0.0, 1.0, 2048, Grading::toward_right, 0.9, 1e-9));
  const auto pencil = assemble_radial(params, mesh, {Bc::dirichlet, false});
  const auto sp = eigenvalues_sturm(pencil, 1, 1e-12, true);
  const double lambda = sp.eigenvalues[0];
  const auto g = nodal_values(pencil, sp.eigenvectors[0]);
  const CubicInterpolant gi(*mesh, g);

  // weighted norm of the interpolant in r, then of h in t over the image mesh
  double nr = 0.0, nt = 0.0;
  for (std::size_t e = 0; e < mesh->elements(); ++e) {
    const double s0 = mesh->from_hi(e), s1 = mesh->from_hi(e + 1);
    nr += quad::gauss<8>([&](double s) { const double v = gi(1 - s, s); return v * v * (1 - s) * std::pow(s, -2 * gamma); },
                         s1, s0);
    // t-coordinates of the element ends, measured from t_max
    const double a0 = prob.t_max * std::pow(s0, 1.0 / prob.t_max);
    const double a1 = prob.t_max * std::pow(s1, 1.0 / prob.t_max);
    nt += quad::gauss<8>(
        [&](double tail) {
          const TPoint x = TPoint::from_tail(tail, prob);
          if (!(x.t > 0.0)) return 0.0;
          const double h = transport_eigenfunction(gi, prob, std::span<const TPoint>(&x, 1))[0];
          return h * h;
        },
        a1, a0);
  }
  CHECK_THAT(nt, WithinRel(nr, 1e-8));
  CHECK_THAT(nr, WithinRel(1.0, 1e-5));

  const double d = 2e-3;
  double worst = 0.0, hmax = 0.0;
  for (double t = 0.1; t < prob.t_max - 0.1; t += 0.05) {
    std::vector<TPoint> x{TPoint::at(t - d, prob), TPoint::at(t, prob), TPoint::at(t + d, prob)};
    const auto h = transport_eigenfunction(gi, prob, x);
    const double res = -(h[0] - 2 * h[1] + h[2]) / (d * d) + potential_closed(t, prob) * h[1] - lambda * h[1];
    worst = std::max(worst, std::abs(res));
    hmax = std::max(hmax, std::abs(h[1]));
  }
  CHECK(worst < 1e-4 * lambda * hmax);
}
