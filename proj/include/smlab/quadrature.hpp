#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "smlab/error.hpp"

namespace smlab::quad {

template <int N>
struct GaussLegendre {
  std::array<double, N> x{};  // nodes on [-1, 1]
  std::array<double, N> w{};
};

// Nodes by Newton iteration on P_N; computed once per order.
template <int N>
const GaussLegendre<N>& gauss_legendre() {
  static const GaussLegendre<N> rule = [] {
    GaussLegendre<N> r;
    for (int i = 0; i < (N + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= N; ++k) {
          const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = N * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      r.x[i] = -z;
      r.x[N - 1 - i] = z;
      r.w[i] = r.w[N - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

// Integral of f over [a, b] with an N-point Gauss-Legendre rule.
template <int N, class F>
double gauss(F&& f, double a, double b) {
  const auto& r = gauss_legendre<N>();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < N; ++i) s += r.w[i] * f(mid + half * r.x[i]);
  return s * half;
}

// Integral over [u0, u1] (0 <= u0 < u1) of u^p * sum_k c[k] u^k.
//
// Elements that touch or sit close to u = 0 use closed-form moments; elements
// far from the singular point use a 20-point Gauss rule, which is exact to
// roundoff there and avoids the cancellation in u1^q - u0^q.
inline double power_poly_integral(double u0, double u1, double p, const std::array<double, 4>& c) {
  if (!(u1 > u0) || u0 < 0.0) {
    if (u1 == u0) return 0.0;
    throw DomainError("power_poly_integral: need 0 <= u0 < u1");
  }
  if (u0 == 0.0 || u1 >= 2.0 * u0) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      if (c[k] == 0.0) continue;
      const double q = p + k + 1.0;
      if (u0 == 0.0 && q <= 0.0) {
        throw DomainError("power_poly_integral: divergent weight at the singular endpoint");
      }
      double m = 0.0;
      if (q == 0.0) {
        m = std::log(u1 / u0);
      } else if (u0 == 0.0) {
        m = std::pow(u1, q) / q;
      } else {
        m = (std::pow(u1, q) - std::pow(u0, q)) / q;
      }
      s += c[k] * m;
    }
    return s;
  }
  return gauss<20>(
      [&](double u) { return std::pow(u, p) * (c[0] + u * (c[1] + u * (c[2] + u * c[3]))); },
      u0, u1);
}

// Integrals over one linear element [u0, u1] of
//   u^p (c0 + c1 u) phi_a phi_b,
// where phi_near is the hat equal to 1 at u0 and phi_far the hat equal to 1 at u1.
enum class HatPair { near_near, near_far, far_far };

inline double p1_weighted(double u0, double u1, double p, double c0, double c1, HatPair pair) {
  const double h = u1 - u0;
  // phi_near = (u1 - u)/h, phi_far = (u - u0)/h
  std::array<double, 2> a{};
  std::array<double, 2> b{};
  switch (pair) {
    case HatPair::near_near:
      a = {u1 / h, -1.0 / h};
      b = a;
      break;
    case HatPair::near_far:
      a = {u1 / h, -1.0 / h};
      b = {-u0 / h, 1.0 / h};
      break;
    case HatPair::far_far:
      a = {-u0 / h, 1.0 / h};
      b = a;
      break;
  }
  if (u0 > 0.0 && u1 < 2.0 * u0) {
    return gauss<20>(
        [&](double u) {
          return std::pow(u, p) * (c0 + c1 * u) * (a[0] + a[1] * u) * (b[0] + b[1] * u);
        },
        u0, u1);
  }
  // Near the singular point expand in monomials. For u0 = 0 the far hat has no
  // constant term, so its coefficient is set to an exact zero.
  if (u0 == 0.0) {
    if (pair != HatPair::near_near) b[0] = 0.0;
    if (pair == HatPair::far_far) a[0] = 0.0;
  }
  const std::array<double, 3> ab{a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[1] * b[1]};
  const std::array<double, 4> poly{c0 * ab[0], c0 * ab[1] + c1 * ab[0], c0 * ab[2] + c1 * ab[1],
                                   c1 * ab[2]};
  return power_poly_integral(u0, u1, p, poly);
}

}  // namespace smlab::quad
