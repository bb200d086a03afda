#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "smlab/error.hpp"
#include "smlab/mesh.hpp"

namespace smlab::reduction {

// Radial problem on the unit disc after the change of variables
// r = warp(t) = 1 - (1 - t/t_max)^t_max, which maps the weighted radial
// eigenproblem onto -h'' + V(t) h = lambda h on (0, t_max).
struct RadialProblem {
  double gamma = 0.0;
  int mode = 0;
  double t_max = 1.0;

  static RadialProblem make(double gamma, int mode) {
    if (!(gamma >= 0.0 && gamma < 0.5)) {
      throw ParameterError("radial problem needs 0 <= gamma < 1/2 (N*gamma < 1 with N = 2)");
    }
    return RadialProblem{gamma, mode, 1.0 / (1.0 - gamma)};
  }

  // Coefficient of (t_max - t)^(-2) in V.
  double boundary_coeff() const { return (2.0 * gamma - gamma * gamma) / (4.0 * (1.0 - gamma) * (1.0 - gamma)); }

  // Coefficient of t^(-2) in V.
  double origin_coeff() const { return static_cast<double>(mode) * mode - 0.25; }
};

// A point of (0, t_max) carried together with its distance to t_max, so that
// quantities singular at t_max keep full relative precision.
struct TPoint {
  double t = 0.0;
  double tail = 0.0;  // t_max - t

  static TPoint at(double t, const RadialProblem& p) { return {t, p.t_max - t}; }
  static TPoint from_tail(double tail, const RadialProblem& p) { return {p.t_max - tail, tail}; }
};

struct WarpValue {
  double w = 0.0;   // r
  double s = 0.0;   // 1 - r
  double d1 = 0.0;  // w'
  double d2 = 0.0;  // w''
  double d3 = 0.0;  // w'''
};

namespace detail {

inline void check_open(const TPoint& x, const RadialProblem& p) {
  if (!(x.t > 0.0) || !(x.tail > 0.0) || !(x.t < p.t_max)) {
    throw DomainError("t must lie in the open interval (0, t_max)");
  }
}

}  // namespace detail

inline WarpValue warp(const TPoint& x, const RadialProblem& p) {
  detail::check_open(x, p);
  const double a = p.t_max;
  // u = 1 - t/t_max, taken from whichever end is closer
  const double u = x.tail < x.t ? x.tail / a : 1.0 - x.t / a;
  WarpValue v;
  if (x.t <= x.tail) {
    v.w = -std::expm1(a * std::log1p(-x.t / a));
    v.s = 1.0 - v.w;
  } else {
    v.s = std::pow(u, a);
    v.w = 1.0 - v.s;
  }
  v.d1 = std::pow(u, a - 1.0);
  v.d2 = -p.gamma * std::pow(u, a - 2.0);
  v.d3 = p.gamma * (2.0 * p.gamma - 1.0) * std::pow(u, a - 3.0);
  return v;
}

inline WarpValue warp(double t, const RadialProblem& p) { return warp(TPoint::at(t, p), p); }

// V(t) = kappa (t_max - t)^(-2) + (n^2 - 1/4) (1 - t/t_max)^(2 gamma t_max) / (1 - (1 - t/t_max)^t_max)^2
inline double potential_closed(const TPoint& x, const RadialProblem& p) {
  detail::check_open(x, p);
  const double a = p.t_max;
  const double u = x.tail < x.t ? x.tail / a : 1.0 - x.t / a;
  const double w = x.t <= x.tail ? -std::expm1(a * std::log1p(-x.t / a)) : 1.0 - std::pow(u, a);
  return p.boundary_coeff() / (x.tail * x.tail) + p.origin_coeff() * std::pow(u, 2.0 * p.gamma * a) / (w * w);
}

inline double potential_closed(double t, const RadialProblem& p) { return potential_closed(TPoint::at(t, p), p); }

// V = (3/4)(w''/w')^2 - w'''/(2 w') + (n^2 - 1/4)(w'/w)^2
inline double potential_derivative_form(const TPoint& x, const RadialProblem& p) {
  const WarpValue v = warp(x, p);
  const double q = v.d2 / v.d1;
  const double l = v.d1 / v.w;
  return 0.75 * q * q - v.d3 / (2.0 * v.d1) + p.origin_coeff() * l * l;
}

inline double potential_derivative_form(double t, const RadialProblem& p) {
  return potential_derivative_form(TPoint::at(t, p), p);
}

struct PotentialAsymptotics {
  double coeff_origin = 0.0;    // lim t^2 V
  double coeff_boundary = 0.0;  // lim (t_max - t)^2 V
  double origin_correction_order = -1.0;  // V - coeff_origin/t^2 = O(t^order)
  double boundary_correction_order = 0.0;  // V - coeff_boundary/(t_max-t)^2 = O((t_max-t)^order)
  // Observed orders from two-point ratios on dyadic sequences; +inf when the
  // correction vanishes identically.
  double observed_origin_order = 0.0;
  double observed_boundary_order = 0.0;
  std::vector<double> origin_steps;      // t values
  std::vector<double> origin_limits;     // t^2 V(t)
  std::vector<double> boundary_steps;    // t_max - t values
  std::vector<double> boundary_limits;   // (t_max - t)^2 V(t)
};

inline PotentialAsymptotics potential_asymptotics(const RadialProblem& p, int levels = 24) {
  PotentialAsymptotics r;
  r.coeff_origin = p.origin_coeff();
  r.coeff_boundary = p.boundary_coeff();
  r.boundary_correction_order = 2.0 * p.gamma / (1.0 - p.gamma);

  auto observed = [](const std::vector<double>& e) {
    // e(x) ~ C x^k on x = 2^-j: k = log2(e_j / e_{j+1}) from the last pair
    const std::size_t n = e.size();
    const double a = e[n - 2];
    const double b = e[n - 1];
    if (a == 0.0 && b == 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(a / b);
  };

  std::vector<double> e0, e1;
  for (int j = 4; j < 4 + levels; ++j) {
    const double x = std::ldexp(1.0, -j);
    const double v0 = potential_closed(TPoint::at(x, p), p);
    r.origin_steps.push_back(x);
    r.origin_limits.push_back(x * x * v0);
    e0.push_back(std::abs(v0 - r.coeff_origin / (x * x)));
    const double v1 = potential_closed(TPoint::from_tail(x, p), p);
    r.boundary_steps.push_back(x);
    r.boundary_limits.push_back(x * x * v1);
    e1.push_back(std::abs(v1 - r.coeff_boundary / (x * x)));
  }
  // Cancellation in V - c/t^2 grows as t -> 0; read the order off the first
  // well-conditioned pairs.
  r.observed_origin_order = observed({e0.begin(), e0.begin() + 8});
  r.observed_boundary_order = observed({e1.begin(), e1.begin() + 8});
  return r;
}

// Piecewise-cubic Lagrange interpolant of nodal values on an r-mesh of [lo, hi]
// inside [0, 1]. Nodes near r = 1 are addressed through 1 - r.
class CubicInterpolant {
 public:
  CubicInterpolant(const Mesh& mesh, std::vector<double> values) : mesh_(mesh), values_(std::move(values)) {
    if (values_.size() != mesh_.size()) throw InputError("interpolant: one value per mesh node required");
    if (mesh_.lo() < 0.0 || mesh_.hi() > 1.0) throw InputError("interpolant: r-mesh must lie inside [0, 1]");
  }

  // Value at radius r with s = 1 - r supplied separately for precision.
  double operator()(double r, double s) const {
    const double gap = 1.0 - mesh_.hi();
    const bool use_hi = r > 0.5;
    const double x = use_hi ? s - gap : r - mesh_.lo();  // distance from the chosen end
    const double span = mesh_.hi() - mesh_.lo();
    const double tol = 1e-14 * span;
    if (x < -tol || x > span + tol) throw DomainError("interpolant: point outside the mesh");
    const std::size_t n = mesh_.size();
    auto coord = [&](std::size_t i) { return use_hi ? mesh_.from_hi(i) : mesh_.from_lo(i); };

    // element e with coord(e) <= x <= coord(e+1) in r-order
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      const bool right = use_hi ? coord(mid) >= x : coord(mid) <= x;
      (right ? lo : hi) = mid;
    }
    const std::size_t e = lo;
    std::size_t first = e == 0 ? 0 : e - 1;
    if (first + 3 >= n) first = n >= 4 ? n - 4 : 0;
    const std::size_t count = std::min<std::size_t>(4, n);
    double sum = 0.0;
    for (std::size_t a = first; a < first + count; ++a) {
      double l = 1.0;
      for (std::size_t b = first; b < first + count; ++b) {
        if (b == a) continue;
        l *= (x - coord(b)) / (coord(a) - coord(b));
      }
      sum += l * values_[a];
    }
    return sum;
  }

  const Mesh& mesh() const { return mesh_; }

 private:
  Mesh mesh_;
  std::vector<double> values_;
};

// h(t) = g(warp(t)) * sqrt(warp(t) / warp'(t)).
inline std::vector<double> transport_eigenfunction(const CubicInterpolant& g, const RadialProblem& p,
                                                   std::span<const TPoint> t_points) {
  std::vector<double> h(t_points.size());
  for (std::size_t i = 0; i < t_points.size(); ++i) {
    const TPoint& x = t_points[i];
    if (x.t < 0.0 || x.tail < 0.0) throw DomainError("transport: t outside [0, t_max]");
    if (x.t == 0.0) {
      h[i] = 0.0;
      continue;
    }
    if (x.tail == 0.0) {
      if (g(1.0, 0.0) != 0.0) throw DomainError("transport: g must vanish at r = 1");
      h[i] = 0.0;
      continue;
    }
    const WarpValue v = warp(x, p);
    h[i] = g(v.w, v.s) * std::sqrt(v.w / v.d1);
  }
  return h;
}

}  // namespace smlab::reduction
