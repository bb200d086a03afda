#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smlab/assembly.hpp"
#include "smlab/error.hpp"
#include "smlab/geometry.hpp"
#include "smlab/mesh.hpp"
#include "smlab/params.hpp"
#include "smlab/pencil.hpp"
#include "smlab/quadrature.hpp"
#include "smlab/regression.hpp"
#include "smlab/spectral.hpp"

namespace smlab::perturbation {

struct HardyBoundConstants {
  double c = 0.0;
  double a = 0.0;
  double c1 = 0.0;
  double c_prime = 0.0;
  double decay_exp = 0.0;
  double rate_exp = 0.0;
};

inline HardyBoundConstants bound_constants(double c, double a) {
  if (!(c >= 1.0) || !std::isfinite(c)) throw ParameterError("bound_constants: need c >= 1");
  if (!(a >= 0.0) || !std::isfinite(a)) throw ParameterError("bound_constants: need a >= 0");
  HardyBoundConstants k;
  k.c = c;
  k.a = a;
  const double p = std::pow(c, 2.0 / c);
  k.c1 = p + p * std::pow(1.0 + c, 2.0 + 2.0 / c);
  k.c_prime = 2.0 * (k.c1 + std::pow(c, 2.0 + 2.0 / c));
  k.decay_exp = 2.0 + 2.0 / c;
  k.rate_exp = 2.0 / c;
  return k;
}

// 0 on d <= eps, (d - eps)/eps on eps < d <= 2 eps, 1 beyond.
inline double cutoff_mu(double d, double eps) {
  if (!(eps > 0.0)) throw DomainError("cutoff_mu: eps must be positive");
  if (!(d >= 0.0)) throw DomainError("cutoff_mu: d must be >= 0");
  if (d <= eps) return 0.0;
  if (d <= 2.0 * eps) return (d - eps) / eps;
  return 1.0;
}

// Euclidean boundary distance of the truncation point at Riemannian distance eps.
inline double truncation_sigma(double eps, double gamma) { return geometry::sigma_from_riem_dist(eps, gamma); }

// Full radial problem on a fixed mesh of [0, 1]. Truncated problems are its
// leading sub-pencils, so every gap compares two spaces on one mesh.
struct FixedMeshProblem {
  ModelParams params;
  std::shared_ptr<const Mesh> mesh;
  TridiagonalPencil pencil;

  static FixedMeshProblem make(const ModelParams& params, const MeshSpec& spec) {
    params.validate();
    auto mesh = std::make_shared<const Mesh>(spec.build(0.0, 1.0));
    return {params, mesh, assemble_radial(params, mesh, default_radial_options(params))};
  }

  double node_sigma(std::size_t i) const { return (1.0 - mesh->hi()) + mesh->from_hi(i); }
};

struct Snap {
  std::size_t node = 0;        // mesh node carrying the Dirichlet condition
  double eps_requested = 0.0;
  double eps_effective = 0.0;  // Riemannian distance of that node
  double sigma = 0.0;
  double snap_error = 0.0;     // |sigma_node - sigma_eps| / sigma_eps
  std::size_t shell_elements = 0;
};

inline Snap snap_truncation(const FixedMeshProblem& fp, double eps, std::size_t min_shell_elements = 8) {
  const double g = fp.params.gamma;
  if (!(eps > 0.0)) throw DomainError("truncation: eps must be positive");
  const double s = truncation_sigma(eps, g);
  if (!(s < 1.0)) throw DomainError("truncation: eps reaches the centre of the disc");
  const Mesh& m = *fp.mesh;
  // from_hi is decreasing in the node index
  std::size_t lo = 0, hi = m.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (fp.node_sigma(mid) >= s ? lo : hi) = mid;
  }
  const std::size_t j = std::abs(fp.node_sigma(lo) - s) <= std::abs(fp.node_sigma(hi) - s) ? lo : hi;
  Snap sn;
  sn.node = j;
  sn.eps_requested = eps;
  sn.sigma = fp.node_sigma(j);
  sn.eps_effective = geometry::riem_dist_to_boundary(sn.sigma, g);
  sn.snap_error = std::abs(sn.sigma - s) / s;
  sn.shell_elements = m.size() - 1 - j;
  if (sn.shell_elements < min_shell_elements || j <= fp.pencil.first_node) {
    throw MeshResolutionError("truncation shell at eps = " + std::to_string(eps) + " spans only " +
                              std::to_string(sn.shell_elements) + " mesh elements");
  }
  return sn;
}

inline TridiagonalPencil truncated_pencil(const FixedMeshProblem& fp, const Snap& sn) {
  return fp.pencil.leading(sn.node - fp.pencil.first_node);
}

struct SweepTable {
  ModelParams params;
  std::string mesh;
  std::size_t mesh_nodes = 0;
  double tol = 0.0;
  std::vector<double> eps_list;
  std::vector<Snap> snaps;
  std::vector<double> lambda_full;                 // k values
  std::vector<std::vector<double>> lambda_eps;     // per eps, k values
  std::vector<std::vector<double>> gaps;           // per eps, k values
};

struct SweepOptions {
  MeshSpec mesh{4096, 0.9, 1e-10};
  double tol = 1e-12;
  std::size_t min_shell_elements = 8;
};

inline std::vector<double> default_eps_grid() { return log_space(3e-4, 3e-2, 12); }

inline SweepTable truncated_sweep(const FixedMeshProblem& fp, std::span<const double> eps_list, std::size_t k,
                                  double tol = 1e-12, std::size_t min_shell_elements = 8) {
  if (eps_list.empty()) throw InputError("truncated_sweep: empty eps list");
  SweepTable t;
  t.params = fp.params;
  t.mesh = fp.mesh->describe();
  t.mesh_nodes = fp.mesh->size();
  t.tol = tol;
  t.eps_list.assign(eps_list.begin(), eps_list.end());
  t.lambda_full = eigenvalues_sturm(fp.pencil, k, tol).eigenvalues;
  for (double eps : eps_list) {
    const Snap sn = snap_truncation(fp, eps, min_shell_elements);
    const auto sub = truncated_pencil(fp, sn);
    auto lam = eigenvalues_sturm(sub, k, tol).eigenvalues;
    std::vector<double> gap(k);
    for (std::size_t i = 0; i < k; ++i) gap[i] = lam[i] - t.lambda_full[i];
    t.snaps.push_back(sn);
    t.lambda_eps.push_back(std::move(lam));
    t.gaps.push_back(std::move(gap));
  }
  return t;
}

inline SweepTable truncated_sweep(const ModelParams& params, std::span<const double> eps_list, std::size_t k,
                                  const SweepOptions& opt = {}) {
  const auto fp = FixedMeshProblem::make(params, opt.mesh);
  return truncated_sweep(fp, eps_list, k, opt.tol, opt.min_shell_elements);
}

// Slope of log(gap) against log(eps_effective) for eigenvalue index (0-based).
// Gaps below 100 x tol are excluded and listed.
inline RateFit rate_fit(const SweepTable& t, std::size_t index) {
  if (t.lambda_full.empty() || index >= t.lambda_full.size()) throw InputError("rate_fit: index out of range");
  std::vector<double> x, y;
  std::vector<std::size_t> excluded;
  const double floor = 100.0 * t.tol;
  for (std::size_t i = 0; i < t.gaps.size(); ++i) {
    const double g = t.gaps[i][index];
    if (g > floor) {
      x.push_back(t.snaps[i].eps_effective);
      y.push_back(g);
    } else {
      excluded.push_back(i);
    }
  }
  if (x.size() < 3) {
    throw InsufficientDataError("rate_fit: only " + std::to_string(x.size()) +
                                " gaps above the noise floor (need 3)");
  }
  RateFit f = fit_log_log(x, y);
  f.excluded = std::move(excluded);
  return f;
}

namespace detail {

// Element e of an r-mesh described by its local coordinate x in [0, h]
// measured from node e, with r and s = 1 - r formed accurately.
struct LocalElement {
  double h = 0.0;
  bool near_lo = true;
  double r0 = 0.0;  // used when near_lo
  double s0 = 0.0;  // sigma at node e
  double r(double x) const { return near_lo ? r0 + x : 1.0 - (s0 - x); }
  double s(double x) const { return near_lo ? 1.0 - (r0 + x) : s0 - x; }
};

inline LocalElement local_element(const Mesh& m, std::size_t e) {
  LocalElement le;
  le.h = m.length(e);
  le.near_lo = m.from_lo(e) <= m.from_hi(e + 1);
  le.r0 = m.lo() + m.from_lo(e);
  le.s0 = (1.0 - m.hi()) + m.from_hi(e);
  return le;
}

}  // namespace detail

struct VariationalBound {
  double eps = 0.0;
  std::size_t n_dim = 0;
  double lambda_full = 0.0;   // lambda_{n_dim}
  double bound = 0.0;          // largest eigenvalue of (A, B)
  std::optional<double> closed_form;  // unavailable when the denominator is <= 0
  double closed_form_denominator = 0.0;
};

// Upper bound for lambda_{n_dim, eps} from the trial space mu * span{phi_1..phi_n_dim}.
inline VariationalBound variational_bound(const FixedMeshProblem& fp, const Spectrum& full, double eps,
                                          std::size_t n_dim, double a = 0.0) {
  if (n_dim < 1 || n_dim > full.eigenvectors.size()) {
    throw ParameterError("variational_bound: need n_dim eigenvectors of the full problem");
  }
  const double g = fp.params.gamma;
  const int n = fp.params.abs_mode();
  const Mesh& m = *fp.mesh;
  const double s_eps = truncation_sigma(eps, g);
  const double s_2eps = truncation_sigma(2.0 * eps, g);
  if (!(s_2eps < 0.5)) throw DomainError("variational_bound: eps too large for the cutoff to fit in the disc");
  if (s_eps < 4.0 * m.min_length()) throw MeshResolutionError("variational_bound: cutoff collar below mesh resolution");

  std::vector<std::vector<double>> phi(n_dim);
  for (std::size_t i = 0; i < n_dim; ++i) phi[i] = nodal_values(fp.pencil, full.eigenvectors[i]);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_dim, n_dim);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_dim, n_dim);
  const auto& rule = quad::gauss_legendre<8>();
  std::vector<double> val(n_dim), der(n_dim);
  for (std::size_t e = 0; e < m.elements(); ++e) {
    const auto le = detail::local_element(m, e);
    const double s_hi = le.s(0.0);
    const double s_lo = le.s(le.h);
    if (s_hi <= s_eps) continue;  // mu = 0 on the whole element
    // sub-intervals split at the kinks of mu
    std::vector<double> cuts{0.0, le.h};
    for (double sk : {s_eps, s_2eps}) {
      if (sk > s_lo && sk < s_hi) cuts.push_back(le.near_lo ? (1.0 - sk) - le.r0 : le.s0 - sk);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double xa = cuts[c], xb = cuts[c + 1];
      if (!(xb > xa)) continue;
      for (int q = 0; q < 8; ++q) {
        const double x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * rule.x[q];
        const double w = 0.5 * (xb - xa) * rule.w[q];
        const double r = le.r(x);
        const double s = le.s(x);
        const double d = geometry::riem_dist_to_boundary(s, g);
        const double mu = cutoff_mu(d, eps);
        if (mu == 0.0) continue;
        // d mu / d r = -(1/eps) s^(-gamma) inside the ramp
        const double dmu = (d > eps && d <= 2.0 * eps) ? -std::pow(s, -g) / eps : 0.0;
        for (std::size_t i = 0; i < n_dim; ++i) {
          const double p0 = phi[i][e], p1 = phi[i][e + 1];
          const double f = p0 + (p1 - p0) * x / le.h;
          const double fp_ = (p1 - p0) / le.h;
          val[i] = mu * f;
          der[i] = dmu * f + mu * fp_;
        }
        const double wq = w * r;
        const double wm = wq * std::pow(s, -2.0 * g);
        const double cn = n == 0 ? 0.0 : static_cast<double>(n) * n / (r * r);
        for (std::size_t i = 0; i < n_dim; ++i) {
          for (std::size_t j = 0; j <= i; ++j) {
            A(i, j) += wq * (der[i] * der[j] + cn * val[i] * val[j]);
            B(i, j) += wm * val[i] * val[j];
          }
        }
      }
    }
  }
  A = A.selfadjointView<Eigen::Lower>();
  B = B.selfadjointView<Eigen::Lower>();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("variational_bound: dense pencil solve failed");

  VariationalBound vb;
  vb.eps = eps;
  vb.n_dim = n_dim;
  vb.lambda_full = full.eigenvalues[n_dim - 1];
  vb.bound = es.eigenvalues()(static_cast<Eigen::Index>(n_dim) - 1);

  const auto k = bound_constants(fp.params.hardy_c(), a);
  const double c = k.c;
  const double la = vb.lambda_full + a;
  const double num = vb.lambda_full + k.c_prime * std::pow(eps, 2.0 / c) * std::pow(la, 1.0 + 1.0 / c);
  vb.closed_form_denominator =
      1.0 - std::pow(c, 1.0 + 1.0 / c) * std::pow(eps, 1.0 + 1.0 / c) * std::pow(la, 0.5 * (1.0 + 1.0 / c));
  if (vb.closed_form_denominator > 0.0) vb.closed_form = num / vb.closed_form_denominator;
  return vb;
}

struct DecayRow {
  double eps = 0.0;
  double mass = 0.0;        // I(eps) = int_{d<eps} |phi|^2 dvol
  double gradient = 0.0;    // G(eps) = int_{d<eps} |grad phi|^2 dvol
  double mass_bound = 0.0;  // c^(2+2/c) eps^(2+2/c) (lambda+a)^(1+1/c)
  double gradient_bound = 0.0;  // c1 eps^(2/c) (lambda+a)^(1+1/c)
  bool mass_ok = false;
  bool gradient_ok = false;
};

struct DecayReport {
  double lambda = 0.0;
  HardyBoundConstants constants;
  std::vector<DecayRow> rows;
  RateFit mass_fit;
  RateFit gradient_fit;
  bool all_ok = false;
};

// I(eps), G(eps) for a mass-normalized eigenvector of the full pencil. The
// radial measure is r dr, so both integrals share the normalization of M.
inline DecayReport boundary_decay_check(const FixedMeshProblem& fp, double lambda, const std::vector<double>& vec,
                                        std::span<const double> eps_grid, const HardyBoundConstants& k) {
  if (eps_grid.size() < 3) throw InputError("boundary_decay_check: need at least 3 eps values");
  const double g = fp.params.gamma;
  const int n = fp.params.abs_mode();
  const Mesh& m = *fp.mesh;
  const auto phi = nodal_values(fp.pencil, vec);

  DecayReport rep;
  rep.lambda = lambda;
  rep.constants = k;
  rep.all_ok = true;
  std::vector<double> ex, im, ig;
  for (double eps : eps_grid) {
    const double s_eps = truncation_sigma(eps, g);
    if (!(s_eps < 0.5)) throw DomainError("boundary_decay_check: collar reaches the interior");
    DecayRow row;
    row.eps = eps;
    std::size_t covered = 0;
    for (std::size_t e = m.elements(); e-- > 0;) {
      const auto le = detail::local_element(m, e);
      const double s_hi = le.s(0.0);
      const double s_lo = le.s(le.h);
      if (s_lo >= s_eps) break;
      ++covered;
      // sub-interval [s_lo, min(s_hi, s_eps)] in sigma; phi = p1 + (p0 - p1)(s - s_lo)/h
      const double top = std::min(s_hi, s_eps);
      const double p0 = phi[e], p1 = phi[e + 1];
      const double slope = (p0 - p1) / le.h;  // d phi / d s
      // phi(s) = alpha + slope s with alpha = p1 - slope s_lo
      const double alpha = e + 1 == m.size() - 1 && m.hi() == 1.0 ? 0.0 : p1 - slope * s_lo;
      // |phi|^2 r s^(-2g) = s^(-2g) (alpha + slope s)^2 (1 - s)
      const double a0 = alpha * alpha, a1 = 2.0 * alpha * slope, a2 = slope * slope;
      const std::array<double, 4> poly{a0, a1 - a0, a2 - a1, -a2};
      row.mass += quad::power_poly_integral(s_lo, top, -2.0 * g, poly);
      // |phi'|^2 r on the sub-interval
      row.gradient += slope * slope * ((top - s_lo) - 0.5 * (top * top - s_lo * s_lo));
      if (n != 0) {
        row.gradient += static_cast<double>(n) * n * quad::gauss<8>(
            [&](double s) { const double f = alpha + slope * s; return f * f / (1.0 - s); }, s_lo, top);
      }
    }
    if (covered < 4) throw MeshResolutionError("boundary_decay_check: collar at eps = " + std::to_string(eps) +
                                               " is below mesh resolution");
    const double la = lambda + k.a;
    row.mass_bound = std::pow(k.c, 2.0 + 2.0 / k.c) * std::pow(eps, 2.0 + 2.0 / k.c) * std::pow(la, 1.0 + 1.0 / k.c);
    row.gradient_bound = k.c1 * std::pow(eps, 2.0 / k.c) * std::pow(la, 1.0 + 1.0 / k.c);
    row.mass_ok = row.mass <= row.mass_bound;
    row.gradient_ok = row.gradient <= row.gradient_bound;
    rep.all_ok = rep.all_ok && row.mass_ok && row.gradient_ok;
    ex.push_back(eps);
    im.push_back(row.mass);
    ig.push_back(row.gradient);
    rep.rows.push_back(row);
  }
  rep.mass_fit = fit_log_log(ex, im);
  rep.gradient_fit = fit_log_log(ex, ig);
  return rep;
}

// ---------------------------------------------------------------------------
// Discrete operator-norm chain on a lumped radial pencil.

struct NormChainOptions {
  std::size_t elements = 600;
  double ratio = 0.8;
  double h_min = 1e-6;
  double eps = 1e-2;  // cutoff-weight threshold
  std::size_t modes = 50;
  std::size_t samples = 200;
  std::uint64_t seed = 20240601;
  double a_cap = 1e6;
};

struct NormChainReport {
  double c = 0.0;
  double a = 0.0;              // shift actually used
  bool a_inflated = false;
  bool premise_ok = false;
  double premise1_norm = 0.0;  // ||w^c (H+a)^(-1/2)||
  double premise1_bound = 0.0;
  double premise2_norm = 0.0;  // ||w^(2-c) (H+a)^(-(2-c)/(2c))||
  double premise2_bound = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double min_margin = 0.0;     // min over samples of (rhs - |lhs|) / rhs
  double eigvec_lhs = 0.0;     // f = phi_1
  double eigvec_rhs = 0.0;
  bool eigvec_ok = false;
  std::uint64_t seed = 0;
  std::size_t dimension = 0;
};

namespace detail {

// Symmetric eigendecomposition of Mhat^(-1/2) K Mhat^(-1/2) for a lumped pencil.
struct DiscreteOperator {
  Eigen::VectorXd mu;    // ascending eigenvalues
  Eigen::MatrixXd U;     // orthonormal eigenvectors (Euclidean, y = M^(1/2) f)
  Eigen::VectorXd d;     // Riemannian boundary distance per unknown

  Eigen::MatrixXd power(double shift, double p) const {
    Eigen::VectorXd s(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) s(i) = std::pow(mu(i) + shift, p);
    return U * s.asDiagonal() * U.transpose();
  }
};

inline DiscreteOperator decompose(const TridiagonalPencil& p, const Mesh& mesh, double gamma) {
  if (!p.lumped()) throw ConfigurationError("norm chain needs a lumped (diagonal) mass");
  const Eigen::Index n = static_cast<Eigen::Index>(p.size());
  Eigen::VectorXd diag(n), sub(n > 0 ? n - 1 : 0);
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = p.diag[i] / p.mass_diag[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) sub(i) = p.off[i] / std::sqrt(p.mass_diag[i] * p.mass_diag[i + 1]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("norm chain: eigendecomposition failed");
  DiscreteOperator op;
  op.mu = es.eigenvalues();
  op.U = es.eigenvectors();
  op.d.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = (1.0 - mesh.hi()) + mesh.from_hi(p.first_node + static_cast<std::size_t>(i));
    op.d(i) = geometry::riem_dist_to_boundary(s, gamma);
  }
  return op;
}

// ||W^q (H + a)^(-p)|| = sqrt(lambda_max((H+a)^(-p) W^(2q) (H+a)^(-p))).
inline double weighted_norm(const DiscreteOperator& op, const Eigen::VectorXd& w, double q, double a, double p) {
  Eigen::VectorXd wq(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) wq(i) = std::pow(w(i), q);
  Eigen::VectorXd s(op.mu.size());
  for (Eigen::Index i = 0; i < op.mu.size(); ++i) s(i) = std::pow(op.mu(i) + a, -p);
  const Eigen::MatrixXd T = wq.asDiagonal() * op.U * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.transpose() * T, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace detail

inline NormChainReport discrete_norm_inequality_check(const ModelParams& params, const NormChainOptions& opt = {}) {
  params.validate();
  const double c = params.hardy_c();
  auto mesh = std::make_shared<const Mesh>(
      Mesh::graded(0.0, 1.0, opt.elements, Grading::toward_right, opt.ratio, opt.h_min));
  RadialOptions ro = default_radial_options(params);
  ro.lumped = true;
  const auto pencil = assemble_radial(params, mesh, ro);
  const auto op = detail::decompose(pencil, *mesh, params.gamma);
  const Eigen::Index n = op.mu.size();
  if (opt.modes < 1 || static_cast<Eigen::Index>(opt.modes) > n) throw ParameterError("norm chain: modes out of range");

  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = std::pow(std::max(op.d(i), opt.eps), -1.0 / c);

  NormChainReport rep;
  rep.c = c;
  rep.seed = opt.seed;
  rep.dimension = static_cast<std::size_t>(n);
  rep.premise1_bound = c;
  rep.premise2_bound = std::pow(c, (2.0 - c) / c);

  // smallest a (doubling, then bisection) for which the first premise holds
  auto premise1 = [&](double a) { return detail::weighted_norm(op, w, c, a, 0.5); };
  double a = params.shift;
  rep.premise1_norm = premise1(a);
  if (rep.premise1_norm > c) {
    double lo = a, hi = std::max(1.0, 2.0 * a);
    while (premise1(hi) > c) {
      lo = hi;
      hi *= 2.0;
      if (hi > opt.a_cap) {
        rep.a = hi;
        rep.premise_ok = false;
        return rep;
      }
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (premise1(mid) > c ? lo : hi) = mid;
    }
    a = hi;
    rep.a_inflated = true;
    rep.premise1_norm = premise1(a);
  }
  rep.a = a;
  rep.premise2_norm = detail::weighted_norm(op, w, 2.0 - c, a, (2.0 - c) / (2.0 * c));
  rep.premise_ok = rep.premise1_norm <= rep.premise1_bound * (1.0 + 1e-12) &&
                   rep.premise2_norm <= rep.premise2_bound * (1.0 + 1e-12);
  if (!rep.premise_ok) return rep;

  const double k = std::pow(c, 2.0 / c);
  // f given by its coefficients in the eigenbasis
  auto evaluate = [&](const Eigen::VectorXd& coef, double& lhs, double& rhs) {
    const Eigen::VectorXd y = op.U * coef;
    const Eigen::VectorXd hy = op.U * (op.mu.array() * coef.array()).matrix();
    const Eigen::VectorXd w2y = (w.array() * w.array() * y.array()).matrix();
    lhs = hy.dot(w2y) + a * w2y.dot(y);
    const Eigen::ArrayXd sh = op.mu.array() + a;
    const double n1 = (sh.pow(0.5 + 1.0 / c) * coef.array()).matrix().norm();
    const double n2 = (sh.sqrt() * coef.array()).matrix().norm();
    rhs = k * n1 * n2;
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < opt.samples; ++t) {
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < opt.modes; ++j) coef(static_cast<Eigen::Index>(j)) = normal(rng);
    double lhs = 0.0, rhs = 0.0;
    evaluate(coef, lhs, rhs);
    const double margin = (rhs - std::abs(lhs)) / rhs;
    rep.min_margin = std::min(rep.min_margin, margin);
    if (std::abs(lhs) > rhs) ++rep.violations;
  }
  rep.samples = opt.samples;

  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(n);
  e1(0) = 1.0;
  evaluate(e1, rep.eigvec_lhs, rep.eigvec_rhs);
  rep.eigvec_ok = std::abs(rep.eigvec_lhs) <= rep.eigvec_rhs;
  return rep;
}

// ---------------------------------------------------------------------------
// Loewner-Heinz spot checks: 0 <= A <= B implies A^s <= B^s for s in [0, 1].

inline Eigen::MatrixXd psd_power(const Eigen::MatrixXd& A, double s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  Eigen::VectorXd v = es.eigenvalues();
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::pow(std::max(v(i), 0.0), s);
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().transpose();
}

inline double min_eigenvalue(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Smallest eigenvalue of B^s - A^s, scaled by ||B^s||.
inline double loewner_heinz_margin(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double s) {
  const Eigen::MatrixXd Bs = psd_power(B, s);
  const Eigen::MatrixXd As = psd_power(A, s);
  const double scale = std::max(1.0, Bs.norm());
  return min_eigenvalue(Bs - As) / scale;
}

struct LoewnerHeinzReport {
  std::vector<double> exponents;
  std::vector<double> operator_margins;   // A = w^(2c), B = c^2 (H + a) on the chain pencil
  std::vector<double> commuting_margins;  // diagonal surrogates
  double premise_margin = 0.0;            // min eig of B - A
  double negative_control_margin = 0.0;   // s = 2 on a non-commuting pair
};

inline LoewnerHeinzReport loewner_heinz_check(const ModelParams& params, double a, const NormChainOptions& opt = {}) {
  params.validate();
  const double c = params.hardy_c();
  NormChainOptions small = opt;
  small.elements = std::min<std::size_t>(opt.elements, 200);
  auto mesh = std::make_shared<const Mesh>(
      Mesh::graded(0.0, 1.0, small.elements, Grading::toward_right, small.ratio, small.h_min));
  RadialOptions ro = default_radial_options(params);
  ro.lumped = true;
  const auto op = detail::decompose(assemble_radial(params, mesh, ro), *mesh, params.gamma);
  const Eigen::Index n = op.mu.size();
  Eigen::VectorXd w2c(n);
  for (Eigen::Index i = 0; i < n; ++i) w2c(i) = std::pow(std::max(op.d(i), small.eps), -2.0);
  const Eigen::MatrixXd A = w2c.asDiagonal();
  const Eigen::MatrixXd B = c * c * op.power(a, 1.0);

  LoewnerHeinzReport rep;
  rep.premise_margin = min_eigenvalue(B - A) / std::max(1.0, B.norm());
  const Eigen::VectorXd da = op.mu.array() + 1.0;
  const Eigen::VectorXd db = 2.0 * da;
  for (double s : {0.25, 0.5, 0.75}) {
    rep.exponents.push_back(s);
    rep.operator_margins.push_back(loewner_heinz_margin(A, B, s));
    rep.commuting_margins.push_back(
        loewner_heinz_margin(Eigen::MatrixXd(da.asDiagonal()), Eigen::MatrixXd(db.asDiagonal()), s));
  }
  Eigen::Matrix2d An, Bn;
  An << 1, 1, 1, 1;
  Bn << 2, 1, 1, 1;
  rep.negative_control_margin = loewner_heinz_margin(An, Bn, 2.0);
  return rep;
}

}  // namespace smlab::perturbation
