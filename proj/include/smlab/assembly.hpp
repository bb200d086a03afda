#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>

#include "smlab/error.hpp"
#include "smlab/mesh.hpp"
#include "smlab/params.hpp"
#include "smlab/pencil.hpp"
#include "smlab/quadrature.hpp"
#include "smlab/reduction.hpp"

namespace smlab {

struct RadialOptions {
  Bc origin = Bc::natural;  // natural is only admissible for n = 0
  bool lumped = false;
};

namespace detail {

// Local 2x2 symmetric element block: {(0,0), (0,1), (1,1)}.
using Block = std::array<double, 3>;

// Integral of f(r, s) phi_a phi_b over element e of an r-mesh, where the
// weight is smooth on the element. r and s = 1 - r are both formed from the
// accurate coordinate.
template <int Q, class F>
Block smooth_element(const Mesh& mesh, std::size_t e, double gap, F&& f) {
  const double h = mesh.length(e);
  const bool near_lo = mesh.from_lo(e) <= mesh.from_hi(e + 1);
  const auto& rule = quad::gauss_legendre<Q>();
  Block b{};
  for (int q = 0; q < Q; ++q) {
    const double xi = 0.5 * (1.0 + rule.x[q]);
    const double wq = 0.5 * rule.w[q] * h;
    double r, s;
    if (near_lo) {
      r = mesh.lo() + mesh.from_lo(e) + h * xi;
      s = 1.0 - r;
    } else {
      s = gap + mesh.from_hi(e + 1) + h * (1.0 - xi);
      r = 1.0 - s;
    }
    const double v = f(r, s) * wq;
    b[0] += v * (1.0 - xi) * (1.0 - xi);
    b[1] += v * (1.0 - xi) * xi;
    b[2] += v * xi * xi;
  }
  return b;
}

inline Block lump(const Block& b) { return {b[0] + b[1], 0.0, b[1] + b[2]}; }

// Scatter element blocks into a pencil over nodes [first, last].
struct Assembler {
  std::size_t first, last;
  TridiagonalPencil& p;

  void add(std::size_t e, const Block& k, const Block& m) {
    const std::size_t i0 = e, i1 = e + 1;
    auto in = [&](std::size_t i) { return i >= first && i <= last; };
    if (in(i0)) {
      p.diag[i0 - first] += k[0];
      p.mass_diag[i0 - first] += m[0];
    }
    if (in(i1)) {
      p.diag[i1 - first] += k[2];
      p.mass_diag[i1 - first] += m[2];
    }
    if (in(i0) && in(i1)) {
      p.off[i0 - first] += k[1];
      if (!p.mass_off.empty()) p.mass_off[i0 - first] += m[1];
    }
  }
};

inline void allocate(TridiagonalPencil& p, std::size_t n, bool lumped) {
  if (n < 1) throw ConfigurationError("mesh leaves no unknowns after boundary conditions");
  p.diag.assign(n, 0.0);
  p.off.assign(n - 1, 0.0);
  p.mass_diag.assign(n, 0.0);
  if (!lumped) p.mass_off.assign(n - 1, 0.0);
}

}  // namespace detail

// P1 finite-element pencil of the radial form
//   K: int (g'^2 + n^2 g^2 / r^2) r dr,   M: int g^2 r (1 - r)^(-2 gamma) dr
// on a mesh of [0, r_cut], Dirichlet at r_cut.
inline TridiagonalPencil assemble_radial(const ModelParams& params, std::shared_ptr<const Mesh> mesh,
                                         RadialOptions opt = {}) {
  params.validate();
  if (params.dim != 2) throw ConfigurationError("assemble_radial: the radial form is set up for N = 2");
  if (!mesh) throw ConfigurationError("assemble_radial: no mesh");
  const Mesh& m = *mesh;
  if (m.lo() != 0.0 || !(m.hi() > 0.0 && m.hi() <= 1.0)) {
    throw ConfigurationError("assemble_radial: mesh must span [0, r_cut] with 0 < r_cut <= 1");
  }
  const int n = params.abs_mode();
  if (n != 0 && opt.origin == Bc::natural) {
    throw ConfigurationError("assemble_radial: natural condition at r = 0 requires n = 0");
  }
  const double g2 = 2.0 * params.gamma;
  const double gap = 1.0 - m.hi();

  TridiagonalPencil p;
  p.mesh = mesh;
  p.left = opt.origin;
  p.right = Bc::dirichlet;
  p.first_node = opt.origin == Bc::dirichlet ? 1 : 0;
  const std::size_t last = m.size() - 2;
  if (last + 1 < p.first_node + 1) throw ConfigurationError("assemble_radial: mesh too small");
  detail::allocate(p, last + 1 - p.first_node, opt.lumped);
  detail::Assembler as{p.first_node, last, p};

  for (std::size_t e = 0; e < m.elements(); ++e) {
    const double h = m.length(e);
    const double r0 = m.lo() + m.from_lo(e);
    const double r1 = m.lo() + m.from_lo(e + 1);
    const bool near_lo = r0 < 0.5;

    // stiffness gradient term: (r0 + r1) / (2h) [[1,-1],[-1,1]]
    const double r_mean = near_lo ? 0.5 * (r0 + r1) : 1.0 - (gap + 0.5 * (m.from_hi(e) + m.from_hi(e + 1)));
    const double kg = r_mean / h;
    detail::Block k{kg, -kg, kg};

    if (n != 0) {
      detail::Block c{};
      if (e == 0) {
        // node 0 is eliminated; only int_0^h (r/h)^2 / r dr = 1/2 survives
        c = {0.0, 0.0, 0.5};
      } else if (near_lo) {
        c = {quad::p1_weighted(r0, r1, -1.0, 1.0, 0.0, quad::HatPair::near_near),
             quad::p1_weighted(r0, r1, -1.0, 1.0, 0.0, quad::HatPair::near_far),
             quad::p1_weighted(r0, r1, -1.0, 1.0, 0.0, quad::HatPair::far_far)};
      } else {
        c = detail::smooth_element<8>(m, e, gap, [](double r, double) { return 1.0 / r; });
      }
      const double n2 = static_cast<double>(n) * n;
      for (int i = 0; i < 3; ++i) k[i] += n2 * c[i];
    }

    detail::Block mb{};
    if (near_lo) {
      mb = detail::smooth_element<10>(m, e, gap, [&](double r, double s) { return r * std::pow(s, -g2); });
    } else {
      // s-coordinate on [s1, s0]; the hat that is 1 at the smaller s is node e+1
      const double s0 = gap + m.from_hi(e);
      const double s1 = gap + m.from_hi(e + 1);
      const double nn = quad::p1_weighted(s1, s0, -g2, 1.0, -1.0, quad::HatPair::near_near);
      const double nf = quad::p1_weighted(s1, s0, -g2, 1.0, -1.0, quad::HatPair::near_far);
      const double ff = quad::p1_weighted(s1, s0, -g2, 1.0, -1.0, quad::HatPair::far_far);
      mb = {ff, nf, nn};
    }
    if (opt.lumped) mb = detail::lump(mb);
    as.add(e, k, mb);
  }
  return p;
}

struct SchrodingerOptions {
  double t_lo = 0.0;   // left end of the mesh; must be > 0 for n = 0
  double trunc = 0.0;  // right end is t_max - trunc
  bool lumped = false;
};

// P1 pencil of int h'^2 + V h^2 dt against int h^2 dt on a t-mesh of
// [t_lo, t_max - trunc]. Dirichlet at the right end and, for n != 0, at the
// left end. For n = 0 the left end carries the Friedrichs condition
// h ~ sqrt(t): the boundary term h(t_lo)^2 / (2 t_lo) is added to the form.
inline TridiagonalPencil assemble_schrodinger(const reduction::RadialProblem& prob, std::shared_ptr<const Mesh> mesh,
                                              SchrodingerOptions opt = {}) {
  if (!mesh) throw ConfigurationError("assemble_schrodinger: no mesh");
  const Mesh& m = *mesh;
  const bool critical = prob.mode == 0;
  if (critical && !(opt.t_lo > 0.0)) {
    throw ConfigurationError("assemble_schrodinger: n = 0 needs t_lo > 0 (critical inverse-square coupling at t = 0)");
  }
  if (opt.t_lo < 0.0 || opt.trunc < 0.0) throw ConfigurationError("assemble_schrodinger: t_lo and trunc must be >= 0");
  const double t_hi = prob.t_max - opt.trunc;
  if (std::abs(m.lo() - opt.t_lo) > 1e-15 * prob.t_max ||
      std::abs(m.hi() - t_hi) > 1e-15 * prob.t_max || !(t_hi > opt.t_lo)) {
    throw ConfigurationError("assemble_schrodinger: mesh must span [t_lo, t_max - trunc]");
  }

  TridiagonalPencil p;
  p.mesh = mesh;
  p.left = critical ? Bc::natural : Bc::dirichlet;
  p.right = Bc::dirichlet;
  p.first_node = critical ? 0 : 1;
  const std::size_t last = m.size() - 2;
  if (last + 1 < p.first_node + 1) throw ConfigurationError("assemble_schrodinger: mesh too small");
  detail::allocate(p, last + 1 - p.first_node, opt.lumped);
  detail::Assembler as{p.first_node, last, p};

  const auto& rule = quad::gauss_legendre<6>();
  for (std::size_t e = 0; e < m.elements(); ++e) {
    const double h = m.length(e);
    const bool near_lo = m.lo() + m.from_lo(e) < 0.5 * prob.t_max;
    detail::Block k{1.0 / h, -1.0 / h, 1.0 / h};
    for (int q = 0; q < 6; ++q) {
      const double xi = 0.5 * (1.0 + rule.x[q]);
      const double wq = 0.5 * rule.w[q] * h;
      reduction::TPoint x;
      if (near_lo) {
        x = reduction::TPoint::at(m.lo() + m.from_lo(e) + h * xi, prob);
      } else {
        x = reduction::TPoint::from_tail(opt.trunc + m.from_hi(e + 1) + h * (1.0 - xi), prob);
      }
      const double v = reduction::potential_closed(x, prob) * wq;
      k[0] += v * (1.0 - xi) * (1.0 - xi);
      k[1] += v * (1.0 - xi) * xi;
      k[2] += v * xi * xi;
    }
    detail::Block mb{h / 3.0, h / 6.0, h / 3.0};
    if (opt.lumped) mb = detail::lump(mb);
    as.add(e, k, mb);
  }
  if (critical) p.diag[0] += 1.0 / (2.0 * opt.t_lo);
  return p;
}

}  // namespace smlab
