#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "smlab/error.hpp"
#include "smlab/params.hpp"
#include "smlab/regression.hpp"

namespace smlab::geometry {

// Euclidean distance from x to the unit circle.
inline double sigma_disc(double x, double y) {
  const double r = std::hypot(x, y);
  if (!(r <= 1.0)) throw DomainError("sigma_disc: point outside the closed unit disc");
  return 1.0 - r;
}

inline void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in [0, 1)");
}

// Riemannian distance to the boundary, d = sigma^(1-gamma)/(1-gamma).
inline double riem_dist_to_boundary(double sigma, double gamma) {
  check_gamma(gamma);
  if (!(sigma >= 0.0)) throw DomainError("riem_dist_to_boundary: sigma must be >= 0");
  return std::pow(sigma, 1.0 - gamma) / (1.0 - gamma);
}

inline double sigma_from_riem_dist(double d, double gamma) {
  check_gamma(gamma);
  if (!(d >= 0.0)) throw DomainError("sigma_from_riem_dist: d must be >= 0");
  return std::pow((1.0 - gamma) * d, 1.0 / (1.0 - gamma));
}

// Area of the unit sphere S^(N-1).
inline double sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

// Riemannian volume of {x : d(x) < eps} in the unit ball of R^N.
inline double collar_volume(double eps, const ModelParams& params) {
  params.validate();
  if (!(eps > 0.0)) throw DomainError("collar_volume: eps must be positive");
  const double g = params.gamma;
  const double s0 = sigma_from_riem_dist(eps, g);
  if (s0 >= 1.0) throw DomainError("collar_volume: collar threshold reaches the centre of the domain");

  if (params.dim == 2) {
    // 2 pi * int_0^s0 s^(-2g) (1 - s) ds
    return 2.0 * std::numbers::pi *
           (std::pow(s0, 1.0 - 2.0 * g) / (1.0 - 2.0 * g) - std::pow(s0, 2.0 - 2.0 * g) / (2.0 - 2.0 * g));
  }
  // int_0^s0 s^(-N g) (1-s)^(N-1) ds with u = s^(1 - N g) removing the endpoint singularity
  const int n = params.dim;
  const double e = 1.0 - n * g;
  const double u0 = std::pow(s0, e);
  auto integrand = [&](double u) {
    const double s = std::pow(u, 1.0 / e);
    return std::pow(1.0 - s, n - 1) / e;
  };
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, u0, 15, 1e-10, &err);
  return sphere_area(n) * v;
}

// Slope of log collar_volume against log eps; estimates N - mink_dim.
inline RateFit minkowski_fit(std::span<const double> eps_grid, const ModelParams& params) {
  if (eps_grid.size() < 4) throw InputError("minkowski_fit: need at least 4 grid points");
  std::vector<double> sorted(eps_grid.begin(), eps_grid.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("minkowski_fit: repeated eps in grid");
  }
  std::vector<double> vols(eps_grid.size());
  for (std::size_t i = 0; i < eps_grid.size(); ++i) vols[i] = collar_volume(eps_grid[i], params);
  return fit_log_log(eps_grid, vols);
}

struct GeodesicNode {
  double x = 0.0;
  double y = 0.0;
  double sigma = 0.0;
  double d_exact = 0.0;
  double d_graph = 0.0;
};

struct GeodesicField {
  int grid_size = 0;
  double spacing = 0.0;
  double gamma = 0.0;
  int stencil = 16;
  std::vector<GeodesicNode> nodes;  // row-major over the grid, disc interior only

  double max_relative_error() const {
    double m = 0.0;
    for (const auto& n : nodes) m = std::max(m, std::abs(n.d_graph - n.d_exact) / n.d_exact);
    return m;
  }

  double mean_relative_error() const {
    double s = 0.0;
    for (const auto& n : nodes) s += std::abs(n.d_graph - n.d_exact) / n.d_exact;
    return nodes.empty() ? 0.0 : s / nodes.size();
  }

  // max |d_graph - d_exact| / max d_exact over the field. Pointwise relative
  // error is not bounded near the seeded band, where d itself tends to zero.
  double sup_norm_relative_error() const {
    double num = 0.0, den = 0.0;
    for (const auto& n : nodes) {
      num = std::max(num, std::abs(n.d_graph - n.d_exact));
      den = std::max(den, n.d_exact);
    }
    return den > 0.0 ? num / den : 0.0;
  }

  // Most negative d_graph - d_exact (graph paths upper-bound the true distance).
  double min_signed_error() const {
    double m = 0.0;
    for (const auto& n : nodes) m = std::min(m, n.d_graph - n.d_exact);
    return m;
  }

  const GeodesicNode& closest_to(double x, double y) const {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double dd = std::hypot(nodes[i].x - x, nodes[i].y - y);
      if (dd < bd) {
        bd = dd;
        best = i;
      }
    }
    return nodes.at(best);
  }
};

// Shortest-path approximation of d(x) on a grid graph over the unit disc.
//
// Grid nodes span [-1, 1]^2 with grid_size nodes per side; nodes strictly
// inside the disc are kept. Edge weight is the Euclidean edge length times the
// trapezoidal mean of sigma^(-gamma) at its ends. Nodes with sigma below one
// grid spacing are seeded with the closed-form distance.
inline GeodesicField geodesic_field(int grid_size, double gamma, int stencil = 16) {
  if (stencil != 8 && stencil != 16) throw ParameterError("geodesic_field: stencil must be 8 or 16");
  if (grid_size < 64) throw ParameterError("geodesic_field: grid_size must be >= 64");
  check_gamma(gamma);

  const int n = grid_size;
  const double h = 2.0 / (n - 1);
  constexpr std::int32_t none = -1;
  std::vector<std::int32_t> id(static_cast<std::size_t>(n) * n, none);
  GeodesicField field;
  field.grid_size = n;
  field.spacing = h;
  field.gamma = gamma;
  field.stencil = stencil;
  std::vector<double> weight;  // sigma^(-gamma) per kept node
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = -1.0 + i * h;
      const double y = -1.0 + j * h;
      const double r = std::hypot(x, y);
      if (r >= 1.0) continue;
      const double s = 1.0 - r;
      id[static_cast<std::size_t>(j) * n + i] = static_cast<std::int32_t>(field.nodes.size());
      field.nodes.push_back({x, y, s, riem_dist_to_boundary(s, gamma), 0.0});
      weight.push_back(std::pow(s, -gamma));
    }
  }

  static constexpr int off8[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  static constexpr int off_knight[8][2] = {{2, 1}, {2, -1}, {-2, 1}, {-2, -1},
                                           {1, 2}, {1, -2}, {-1, 2}, {-1, -2}};
  std::vector<std::array<int, 2>> offsets;
  for (const auto& o : off8) offsets.push_back({o[0], o[1]});
  if (stencil == 16) {
    for (const auto& o : off_knight) offsets.push_back({o[0], o[1]});
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(field.nodes.size(), inf);
  using Item = std::pair<double, std::int32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t k = 0; k < field.nodes.size(); ++k) {
    if (field.nodes[k].sigma < h) {
      dist[k] = field.nodes[k].d_exact;
      heap.emplace(dist[k], static_cast<std::int32_t>(k));
    }
  }
  while (!heap.empty()) {
    const auto [dk, k] = heap.top();
    heap.pop();
    if (dk > dist[k]) continue;
    const auto& node = field.nodes[k];
    const int i = static_cast<int>(std::lround((node.x + 1.0) / h));
    const int j = static_cast<int>(std::lround((node.y + 1.0) / h));
    for (const auto& o : offsets) {
      const int ii = i + o[0];
      const int jj = j + o[1];
      if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
      const std::int32_t m = id[static_cast<std::size_t>(jj) * n + ii];
      if (m == none) continue;
      const double len = h * std::hypot(static_cast<double>(o[0]), static_cast<double>(o[1]));
      const double cand = dk + len * 0.5 * (weight[k] + weight[m]);
      if (cand < dist[m]) {
        dist[m] = cand;
        heap.emplace(cand, m);
      }
    }
  }
  for (std::size_t k = 0; k < field.nodes.size(); ++k) field.nodes[k].d_graph = dist[k];
  return field;
}

}  // namespace smlab::geometry
