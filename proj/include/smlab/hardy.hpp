#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "smlab/assembly.hpp"
#include "smlab/error.hpp"
#include "smlab/mesh.hpp"
#include "smlab/params.hpp"
#include "smlab/pencil.hpp"
#include "smlab/quadrature.hpp"

namespace smlab::hardy {

inline double hardy_constant_formula(const ModelParams& p) {
  p.validate();
  return p.hardy_c();
}

struct RangeViolation {
  double gamma = 0.0;
  std::string reason;
};

struct RangeReport {
  int dim = 2;
  std::vector<double> gammas;
  std::vector<double> constants;
  std::vector<RangeViolation> violations;
  bool ok() const { return violations.empty(); }
};

// 1 < c <= 2 on the grid and c strictly decreasing in gamma.
inline RangeReport hardy_range_check(std::span<const double> gamma_grid, int dim) {
  RangeReport r;
  r.dim = dim;
  std::vector<double> g(gamma_grid.begin(), gamma_grid.end());
  std::sort(g.begin(), g.end());
  for (double x : g) {
    const auto p = ModelParams::make(dim, x);
    const double c = p.hardy_c();
    r.gammas.push_back(x);
    r.constants.push_back(c);
    if (!(c > 1.0 && c <= 2.0)) r.violations.push_back({x, "c = " + std::to_string(c) + " outside (1, 2]"});
  }
  for (std::size_t i = 1; i < r.constants.size(); ++i) {
    if (r.gammas[i] > r.gammas[i - 1] && !(r.constants[i] < r.constants[i - 1])) {
      r.violations.push_back({r.gammas[i], "c not strictly decreasing"});
    }
  }
  return r;
}

struct HardyEstimate {
  double c_est = 0.0;  // finest mesh
  std::vector<std::size_t> mesh_sizes;
  std::vector<double> estimates_by_mesh;
  double extrapolated = 0.0;
  double extrapolation_error = 0.0;
  double target = 0.0;
  std::string mesh;  // base mesh description

  bool monotone() const {
    for (std::size_t i = 1; i < estimates_by_mesh.size(); ++i) {
      if (estimates_by_mesh[i] < estimates_by_mesh[i - 1]) return false;
    }
    return true;
  }
};

// P1 pencil of  int f'^2 t^beta dt  against  int f^2 t^(beta-2) dt  on (0, 1),
// Dirichlet at both ends.
inline TridiagonalPencil assemble_model_hardy(double beta, std::shared_ptr<const Mesh> mesh) {
  if (!(beta < 1.0)) throw ParameterError("model Hardy inequality has no finite constant for beta >= 1");
  if (!(beta > -1.0)) throw ParameterError("model Hardy inequality: beta <= -1 is not supported");
  if (!mesh || mesh->lo() != 0.0 || mesh->hi() != 1.0) throw ConfigurationError("model Hardy mesh must span [0, 1]");
  const Mesh& m = *mesh;
  TridiagonalPencil p;
  p.mesh = mesh;
  p.first_node = 1;
  detail::allocate(p, m.size() - 2, false);
  detail::Assembler as{1, m.size() - 2, p};
  for (std::size_t e = 0; e < m.elements(); ++e) {
    const double t0 = m.from_lo(e);
    const double t1 = m.from_lo(e + 1);
    const double h = m.length(e);
    const double kk = quad::power_poly_integral(t0, t1, beta, {1.0, 0.0, 0.0, 0.0}) / (h * h);
    detail::Block k{kk, -kk, kk};
    detail::Block mb{};
    if (e == 0) {
      mb = {0.0, 0.0, quad::p1_weighted(t0, t1, beta - 2.0, 1.0, 0.0, quad::HatPair::far_far)};
    } else {
      mb = {quad::p1_weighted(t0, t1, beta - 2.0, 1.0, 0.0, quad::HatPair::near_near),
            quad::p1_weighted(t0, t1, beta - 2.0, 1.0, 0.0, quad::HatPair::near_far),
            quad::p1_weighted(t0, t1, beta - 2.0, 1.0, 0.0, quad::HatPair::far_far)};
    }
    as.add(e, k, mb);
  }
  return p;
}

// Radial Hardy pencil on the disc:  int f'^2 r dr  against
// int f^2 d^-2 dvol = (1 - gamma)^2 int f^2 (1 - r)^-2 r dr, natural at r = 0,
// Dirichlet at r = 1.
inline TridiagonalPencil assemble_riemannian_hardy(double gamma, std::shared_ptr<const Mesh> mesh) {
  if (!(gamma >= 0.0 && gamma < 0.5)) throw ParameterError("riemannian Hardy pencil needs 0 <= gamma < 1/2");
  if (!mesh || mesh->lo() != 0.0 || mesh->hi() != 1.0) throw ConfigurationError("riemannian Hardy mesh must span [0, 1]");
  const Mesh& m = *mesh;
  const double f = (1.0 - gamma) * (1.0 - gamma);
  TridiagonalPencil p;
  p.mesh = mesh;
  p.first_node = 0;
  p.left = Bc::natural;
  detail::allocate(p, m.size() - 1, false);
  detail::Assembler as{0, m.size() - 2, p};
  for (std::size_t e = 0; e < m.elements(); ++e) {
    const double h = m.length(e);
    const bool near_lo = m.from_lo(e) < 0.5;
    const double r_mean = near_lo ? m.from_lo(e) + 0.5 * h : 1.0 - 0.5 * (m.from_hi(e) + m.from_hi(e + 1));
    const double kg = r_mean / h;
    detail::Block k{kg, -kg, kg};
    detail::Block mb{};
    if (near_lo) {
      mb = detail::smooth_element<10>(m, e, 0.0, [](double r, double s) { return r / (s * s); });
    } else {
      const double s0 = m.from_hi(e);
      const double s1 = m.from_hi(e + 1);
      mb = {quad::p1_weighted(s1, s0, -2.0, 1.0, -1.0, quad::HatPair::far_far),
            s1 == 0.0 ? 0.0 : quad::p1_weighted(s1, s0, -2.0, 1.0, -1.0, quad::HatPair::near_far),
            s1 == 0.0 ? 0.0 : quad::p1_weighted(s1, s0, -2.0, 1.0, -1.0, quad::HatPair::near_near)};
    }
    for (double& v : mb) v *= f;
    as.add(e, k, mb);
  }
  return p;
}

// sup of the discrete quotient = 1 / lambda_min.
inline double constant_from_pencil(const TridiagonalPencil& p, double tol = 1e-13) {
  const double lam = eigenvalues_sturm(p, 1, tol).eigenvalues[0];
  if (!(lam > 0.0)) throw NumericalError("Hardy pencil: non-positive lowest eigenvalue");
  return 1.0 / std::sqrt(lam);
}

inline double estimate_model_hardy_constant(double beta, const Mesh& mesh) {
  return constant_from_pencil(assemble_model_hardy(beta, std::make_shared<const Mesh>(mesh)));
}

inline double estimate_riemannian_hardy_constant(double gamma, const Mesh& mesh) {
  return constant_from_pencil(assemble_riemannian_hardy(gamma, std::make_shared<const Mesh>(mesh)));
}

// Refinement study: a fully geometric base mesh toward the singular end, then
// nested bisections. Richardson assumes second order in the element size.
struct StudyOptions {
  std::size_t base_nodes = 128;
  double ratio = 0.55;
  int refinements = 5;  // 128 -> ~4096 nodes
};

namespace detail {

template <class F>
HardyEstimate run_study(const Mesh& base, const StudyOptions& opt, double target, F&& estimate) {
  HardyEstimate est;
  est.target = target;
  est.mesh = base.describe();
  Mesh m = base;
  for (int i = 0; i <= opt.refinements; ++i) {
    if (i > 0) m = m.refined();
    est.mesh_sizes.push_back(m.size());
    est.estimates_by_mesh.push_back(estimate(m));
  }
  est.c_est = est.estimates_by_mesh.back();
  if (est.estimates_by_mesh.size() >= 2) {
    const auto r = richardson(est.estimates_by_mesh[est.estimates_by_mesh.size() - 2], est.c_est, 2);
    est.extrapolated = r.value;
    est.extrapolation_error = r.error_estimate;
  } else {
    est.extrapolated = est.c_est;
  }
  return est;
}

inline void check_study(const StudyOptions& opt) {
  if (opt.base_nodes < 3) throw ParameterError("Hardy study: need at least 3 base nodes");
  if (opt.refinements < 0 || opt.refinements > 16) throw ParameterError("Hardy study: refinements out of range");
}

}  // namespace detail

inline HardyEstimate model_hardy_study(double beta, const StudyOptions& opt = {}) {
  detail::check_study(opt);
  if (!(beta < 1.0)) throw ParameterError("model Hardy inequality has no finite constant for beta >= 1");
  const Mesh base = Mesh::geometric(0.0, 1.0, opt.base_nodes - 1, Grading::toward_left, opt.ratio);
  return detail::run_study(base, opt, 2.0 / (1.0 - beta),
                           [&](const Mesh& m) { return estimate_model_hardy_constant(beta, m); });
}

// Riemannian constant of the unit ball: radial disc pencil for N = 2, and
// (1 - gamma) times the model constant with beta = (2 - N) gamma otherwise.
inline HardyEstimate riemannian_hardy_study(const ModelParams& params, const StudyOptions& opt = {}) {
  params.validate();
  detail::check_study(opt);
  if (params.dim == 2) {
    const Mesh base = Mesh::geometric(0.0, 1.0, opt.base_nodes - 1, Grading::toward_right, opt.ratio);
    return detail::run_study(base, opt, params.hardy_c(),
                             [&](const Mesh& m) { return estimate_riemannian_hardy_constant(params.gamma, m); });
  }
  HardyEstimate e = model_hardy_study(params.model_beta(), opt);
  const double f = 1.0 - params.gamma;
  for (double& v : e.estimates_by_mesh) v *= f;
  e.c_est *= f;
  e.extrapolated *= f;
  e.extrapolation_error *= f;
  e.target = params.hardy_c();
  return e;
}

struct MinkowskiCheck {
  double product = 0.0;  // c * (2 + mink_dim - N)
  bool ok = false;
};

// c (2 + mink_dim - N) >= 2 - tol
inline MinkowskiCheck davies_mandouvalos_check(double c_est, const ModelParams& params, double tol = 0.05) {
  params.validate();
  MinkowskiCheck r;
  r.product = c_est * (2.0 + params.mink_dim() - params.dim);
  r.ok = r.product >= 2.0 - tol;
  return r;
}

struct QuotientReport {
  std::size_t samples = 0;
  double max_ratio = 0.0;  // max of int f^2/d^2 dvol / (c^2 Q(f))
  std::size_t violations = 0;
};

// Random P1 functions on a disc mesh (vanishing at r = 1) against the strong
// Hardy inequality with the closed-form constant and a = 0.
inline QuotientReport hardy_quotient_check(const ModelParams& params, const Mesh& mesh, std::size_t samples,
                                           std::uint64_t seed) {
  params.validate();
  if (params.dim != 2) throw ConfigurationError("quotient check is set up for the disc (N = 2)");
  const auto p = assemble_riemannian_hardy(params.gamma, std::make_shared<const Mesh>(mesh));
  const double c2 = params.hardy_c() * params.hardy_c();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  QuotientReport r;
  r.samples = samples;
  for (std::size_t t = 0; t < samples; ++t) {
    std::vector<double> f(p.size());
    for (double& v : f) v = unif(rng);
    const auto kf = p.apply_stiffness(f);
    const auto mf = p.apply_mass(f);
    double q = 0.0, w = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      q += kf[i] * f[i];
      w += mf[i] * f[i];
    }
    const double ratio = w / (c2 * q);
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (ratio > 1.0) ++r.violations;
  }
  return r;
}

}  // namespace smlab::hardy
