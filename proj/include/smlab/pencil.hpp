#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "smlab/error.hpp"
#include "smlab/mesh.hpp"

namespace smlab {

enum class Bc { dirichlet, natural };

inline const char* to_string(Bc b) { return b == Bc::dirichlet ? "dirichlet" : "natural"; }

// Symmetric tridiagonal pencil (K, M). M is tridiagonal (consistent mass) or
// diagonal (mass_off empty). Unknown j lives on mesh node first_node + j.
struct TridiagonalPencil {
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> mass_diag;
  std::vector<double> mass_off;
  std::shared_ptr<const Mesh> mesh;
  std::size_t first_node = 0;
  Bc left = Bc::dirichlet;
  Bc right = Bc::dirichlet;

  std::size_t size() const { return diag.size(); }
  bool lumped() const { return mass_off.empty(); }

  double mass_offdiag(std::size_t i) const { return lumped() ? 0.0 : mass_off[i]; }

  // The first m unknowns, i.e. a Dirichlet condition moved to node first_node + m.
  TridiagonalPencil leading(std::size_t m) const {
    if (m < 1 || m > size()) throw ParameterError("leading: sub-pencil size out of range");
    TridiagonalPencil p;
    p.diag.assign(diag.begin(), diag.begin() + m);
    p.off.assign(off.begin(), off.begin() + (m - 1));
    p.mass_diag.assign(mass_diag.begin(), mass_diag.begin() + m);
    if (!lumped()) p.mass_off.assign(mass_off.begin(), mass_off.begin() + (m - 1));
    p.mesh = mesh;
    p.first_node = first_node;
    p.left = left;
    p.right = m == size() ? right : Bc::dirichlet;
    return p;
  }

  void validate() const {
    const std::size_t n = size();
    if (n == 0) throw ConfigurationError("pencil has no unknowns");
    if (off.size() + 1 != n || mass_diag.size() != n || (!lumped() && mass_off.size() + 1 != n)) {
      throw ConfigurationError("pencil: inconsistent array sizes");
    }
    for (double m : mass_diag) {
      if (!(m > 0.0) || !std::isfinite(m)) throw ConfigurationError("pencil: mass entries must be positive");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(diag[i])) throw NumericalError("pencil: non-finite stiffness entry");
    }
  }

  // y = K x, y = M x
  std::vector<double> apply_stiffness(const std::vector<double>& x) const { return apply(diag, off, x); }

  std::vector<double> apply_mass(const std::vector<double>& x) const {
    if (lumped()) {
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = mass_diag[i] * x[i];
      return y;
    }
    return apply(mass_diag, mass_off, x);
  }

 private:
  static std::vector<double> apply(const std::vector<double>& d, const std::vector<double>& o,
                                   const std::vector<double>& x) {
    const std::size_t n = d.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = d[i] * x[i];
      if (i > 0) s += o[i - 1] * x[i - 1];
      if (i + 1 < n) s += o[i] * x[i + 1];
      y[i] = s;
    }
    return y;
  }
};

struct Provenance {
  std::string route;  // radial | schrodinger | model | ...
  double gamma = 0.0;
  int mode = 0;
  std::string mesh;
  std::size_t mesh_nodes = 0;
  double tol = 0.0;
};

struct Spectrum {
  std::vector<double> eigenvalues;                // ascending
  std::vector<std::vector<double>> eigenvectors;  // M-orthonormal, per unknown
  Provenance provenance;
};

namespace detail {

// Pencil after the congruence D (K, M) D with D = diag(M)^(-1/2): same
// eigenvalues and inertia, unit mass diagonal, entries of moderate size.
struct ScaledPencil {
  std::vector<double> a, b;  // stiffness diag / off
  std::vector<double> c;     // mass off (diag is 1)
  std::vector<double> scale;  // D

  explicit ScaledPencil(const TridiagonalPencil& p) {
    const std::size_t n = p.size();
    scale.resize(n);
    for (std::size_t i = 0; i < n; ++i) scale[i] = 1.0 / std::sqrt(p.mass_diag[i]);
    a.resize(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = p.diag[i] * scale[i] * scale[i];
    b.resize(n > 0 ? n - 1 : 0);
    c.assign(b.size(), 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      b[i] = p.off[i] * scale[i] * scale[i + 1];
      c[i] = p.mass_offdiag(i) * scale[i] * scale[i + 1];
    }
  }

  // Number of eigenvalues strictly below x (negative pivots of K - x M).
  std::size_t count_below(double x) const {
    const std::size_t n = a.size();
    std::size_t neg = 0;
    double d = a[0] - x;
    constexpr double tiny = 1e-290;
    for (std::size_t i = 0;; ++i) {
      if (d == 0.0) d = -tiny;
      if (d < 0.0) ++neg;
      if (i + 1 == n) break;
      const double e = b[i] - x * c[i];
      d = (a[i + 1] - x) - e * (e / d);
    }
    return neg;
  }
};

// Solve T x = r for a tridiagonal T (sub l, diag d, super u) by Gaussian
// elimination with partial pivoting. Exactly singular pivots are perturbed.
inline std::vector<double> solve_tridiagonal(std::vector<double> l, std::vector<double> d, std::vector<double> u,
                                             std::vector<double> r) {
  const std::size_t n = d.size();
  std::vector<double> u2(n, 0.0);  // second superdiagonal created by pivoting
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm = std::max(norm, std::abs(d[i]));
  for (std::size_t i = 0; i + 1 < n; ++i) norm = std::max({norm, std::abs(l[i]), std::abs(u[i])});
  const double floor = std::max(norm, 1.0) * std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(l[i])) {
      if (d[i] == 0.0) d[i] = floor;
      const double f = l[i] / d[i];
      d[i + 1] -= f * u[i];
      r[i + 1] -= f * r[i];
      l[i] = 0.0;
    } else {
      // swap rows i and i+1
      const double f = d[i] / l[i];
      d[i] = l[i];
      const double t = d[i + 1];
      d[i + 1] = u[i] - f * t;
      u[i] = t;
      if (i + 2 < n) {
        u2[i] = u[i + 1];
        u[i + 1] = -f * u2[i];
      }
      std::swap(r[i], r[i + 1]);
      r[i + 1] -= f * r[i];
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = floor;
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = r[k];
    if (k + 1 < n) s -= u[k] * x[k + 1];
    if (k + 2 < n) s -= u2[k] * x[k + 2];
    x[k] = s / d[k];
  }
  return x;
}

}  // namespace detail

// Number of generalized eigenvalues strictly below x.
inline std::size_t sturm_count(const TridiagonalPencil& p, double x) {
  p.validate();
  return detail::ScaledPencil(p).count_below(x);
}

// k smallest eigenvalues by Sturm bisection to absolute width tol (relative
// 4 eps for large eigenvalues); M-orthonormal eigenvectors on request.
inline Spectrum eigenvalues_sturm(const TridiagonalPencil& p, std::size_t k, double tol = 1e-12,
                                  bool vectors = false) {
  p.validate();
  const std::size_t n = p.size();
  if (k < 1 || k > n) throw ParameterError("eigenvalues_sturm: k must lie in [1, dimension]");
  if (!(tol > 0.0)) throw ParameterError("eigenvalues_sturm: tol must be positive");
  const detail::ScaledPencil s(p);

  Spectrum out;
  out.eigenvalues.resize(k);
  double lo = -1.0;
  for (int it = 0; s.count_below(lo) > 0; ++it) {
    if (it > 1100) throw NumericalError("eigenvalues_sturm: no lower bracket");
    lo *= 2.0;
  }
  double hi = 1.0;
  for (int it = 0; s.count_below(hi) < k; ++it) {
    if (it > 1100 || !std::isfinite(hi)) throw NumericalError("eigenvalues_sturm: no upper bracket");
    hi *= 2.0;
  }
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t j = 0; j < k; ++j) {
    // invariant: count(a) <= j < count(b)
    double a = j == 0 ? lo : out.eigenvalues[j - 1] - 0.5 * tol;
    double b = hi;
    if (s.count_below(a) > j || s.count_below(b) <= j) throw NumericalError("eigenvalues_sturm: bisection lost its bracket");
    for (int it = 0; it < 4000; ++it) {
      const double w = std::max(tol, 4.0 * eps * std::max(std::abs(a), std::abs(b)));
      if (b - a <= w) break;
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      (s.count_below(m) > j ? b : a) = m;
    }
    out.eigenvalues[j] = 0.5 * (a + b);
    if (!std::isfinite(out.eigenvalues[j])) throw NumericalError("eigenvalues_sturm: non-finite eigenvalue");
  }

  if (vectors) {
    // inverse iteration on K - lambda M in the original variables
    out.eigenvectors.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      const double lam = out.eigenvalues[j];
      std::vector<double> l(n - 1), d(n), u(n - 1);
      for (std::size_t i = 0; i < n; ++i) d[i] = p.diag[i] - lam * p.mass_diag[i];
      for (std::size_t i = 0; i + 1 < n; ++i) l[i] = u[i] = p.off[i] - lam * p.mass_offdiag(i);
      // deterministic start vector with no special symmetry
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = (1.0 + 0.25 * std::sin(0.7 * static_cast<double>(i) + 0.3)) * s.scale[i];
      }
      for (int it = 0; it < 4; ++it) {
        x = detail::solve_tridiagonal(l, d, u, p.apply_mass(x));
        for (std::size_t q = 0; q < j; ++q) {
          const auto& y = out.eigenvectors[q];
          const auto my = p.apply_mass(y);
          double pr = 0.0;
          for (std::size_t i = 0; i < n; ++i) pr += my[i] * x[i];
          for (std::size_t i = 0; i < n; ++i) x[i] -= pr * y[i];
        }
        const auto mx = p.apply_mass(x);
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += mx[i] * x[i];
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("inverse iteration broke down");
        for (double& v : x) v /= nrm;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] != 0.0) {
          if (x[i] < 0.0) {
            for (double& v : x) v = -v;
          }
          break;
        }
      }
      out.eigenvectors[j] = std::move(x);
    }
  }
  out.provenance.tol = tol;
  if (p.mesh) {
    out.provenance.mesh = p.mesh->describe();
    out.provenance.mesh_nodes = p.mesh->size();
  }
  return out;
}

// ||(K - lambda M) v|| / ||M v||
inline double eigen_residual(const TridiagonalPencil& p, double lambda, const std::vector<double>& v) {
  const auto kv = p.apply_stiffness(v);
  const auto mv = p.apply_mass(v);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    num += (kv[i] - lambda * mv[i]) * (kv[i] - lambda * mv[i]);
    den += mv[i] * mv[i];
  }
  return std::sqrt(num / den);
}

inline double mass_inner(const TridiagonalPencil& p, const std::vector<double>& x, const std::vector<double>& y) {
  const auto mx = p.apply_mass(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += mx[i] * y[i];
  return s;
}

// Unknowns expanded to all mesh nodes, zero at eliminated Dirichlet nodes.
inline std::vector<double> nodal_values(const TridiagonalPencil& p, const std::vector<double>& v) {
  if (!p.mesh) throw ConfigurationError("nodal_values: pencil carries no mesh");
  std::vector<double> g(p.mesh->size(), 0.0);
  for (std::size_t j = 0; j < v.size(); ++j) g.at(p.first_node + j) = v[j];
  return g;
}

struct Extrapolation {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Richardson step for lambda_h = lambda + C h^order.
inline Extrapolation richardson(double lambda_h, double lambda_h2, int order = 2) {
  const double f = std::ldexp(1.0, order);
  return {(f * lambda_h2 - lambda_h) / (f - 1.0), std::abs(lambda_h2 - lambda_h) / (f - 1.0)};
}

}  // namespace smlab
