#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "smlab/assembly.hpp"
#include "smlab/error.hpp"
#include "smlab/mesh.hpp"
#include "smlab/params.hpp"
#include "smlab/pencil.hpp"
#include "smlab/reduction.hpp"

namespace smlab {

struct MeshSpec {
  std::size_t elements = 4096;
  double ratio = 0.9;
  double h_min = 1e-10;

  Mesh build(double lo, double hi) const {
    return Mesh::graded(lo, hi, elements, Grading::double_graded, ratio, h_min);
  }
};

struct SpectrumOptions {
  MeshSpec radial{4096, 0.9, 1e-10};
  MeshSpec schrodinger{4096, 0.97, 1e-10};
  double t_lo = 1e-8;  // left end of the t-mesh for n = 0
  double tol = 1e-12;
};

// Eigenvalues on a mesh and on its bisection, plus the Richardson values.
struct RouteResult {
  std::string route;
  Spectrum coarse;
  Spectrum fine;
  std::vector<double> extrapolated;
  std::vector<double> error_estimate;
};

namespace detail {

inline RouteResult finish_route(std::string route, Spectrum coarse, Spectrum fine, const ModelParams& params) {
  RouteResult r;
  r.route = std::move(route);
  for (Spectrum* s : {&coarse, &fine}) {
    s->provenance.route = r.route;
    s->provenance.gamma = params.gamma;
    s->provenance.mode = params.mode;
  }
  for (std::size_t i = 0; i < coarse.eigenvalues.size(); ++i) {
    const auto e = richardson(coarse.eigenvalues[i], fine.eigenvalues[i]);
    r.extrapolated.push_back(e.value);
    r.error_estimate.push_back(e.error_estimate);
  }
  r.coarse = std::move(coarse);
  r.fine = std::move(fine);
  return r;
}

}  // namespace detail

inline RadialOptions default_radial_options(const ModelParams& p) {
  return {p.abs_mode() == 0 ? Bc::natural : Bc::dirichlet, false};
}

inline RouteResult solve_radial(const ModelParams& params, std::size_t k, const SpectrumOptions& opt = {}) {
  params.validate();
  auto mesh = std::make_shared<const Mesh>(opt.radial.build(0.0, 1.0));
  auto fine = std::make_shared<const Mesh>(mesh->refined());
  const auto ro = default_radial_options(params);
  auto a = eigenvalues_sturm(assemble_radial(params, mesh, ro), k, opt.tol);
  auto b = eigenvalues_sturm(assemble_radial(params, fine, ro), k, opt.tol);
  return detail::finish_route("radial", std::move(a), std::move(b), params);
}

inline RouteResult solve_schrodinger(const ModelParams& params, std::size_t k, const SpectrumOptions& opt = {}) {
  params.validate();
  if (params.dim != 2) throw ConfigurationError("schrodinger route is set up for N = 2");
  const auto prob = reduction::RadialProblem::make(params.gamma, params.abs_mode());
  SchrodingerOptions so;
  so.t_lo = prob.mode == 0 ? opt.t_lo : 0.0;
  auto mesh = std::make_shared<const Mesh>(opt.schrodinger.build(so.t_lo, prob.t_max));
  auto fine = std::make_shared<const Mesh>(mesh->refined());
  auto a = eigenvalues_sturm(assemble_schrodinger(prob, mesh, so), k, opt.tol);
  auto b = eigenvalues_sturm(assemble_schrodinger(prob, fine, so), k, opt.tol);
  return detail::finish_route("schrodinger", std::move(a), std::move(b), params);
}

}  // namespace smlab
