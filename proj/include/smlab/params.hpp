#pragma once

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "smlab/error.hpp"

namespace smlab {

// Parameters of the conformal metric ds^2 = sigma^(-2 gamma) |dx|^2 on a
// bounded convex domain in R^N, plus the angular mode and Hardy shift used by
// the spectral computations.
struct ModelParams {
  int dim = 2;         // N
  double gamma = 0.0;  // singularity exponent
  int mode = 0;        // angular mode n, only meaningful for N = 2
  double shift = 0.0;  // Hardy shift a

  static ModelParams make(int dim, double gamma, int mode = 0, double shift = 0.0) {
    ModelParams p{dim, gamma, mode, shift};
    p.validate();
    return p;
  }

  void validate() const {
    if (dim < 2) {
      throw ParameterError("dimension N must be >= 2");
    }
    if (!std::isfinite(gamma) || gamma < 0.0 || dim * gamma >= 1.0) {
      std::ostringstream os;
      os << "constraint 0 <= N*gamma < 1 violated (N=" << dim << ", gamma=" << gamma
         << ", N*gamma=" << dim * gamma << ")";
      throw ParameterError(os.str());
    }
    if (!std::isfinite(shift) || shift < 0.0) {
      throw ParameterError("Hardy shift a must be >= 0");
    }
  }

  int abs_mode() const { return std::abs(mode); }

  // Riemannian length of the radial geodesic from the centre of the unit ball.
  double t_max() const { return 1.0 / (1.0 - gamma); }

  // Sharp strong Hardy constant on convex domains.
  double hardy_c() const { return 2.0 * (1.0 - gamma) / (1.0 + (dim - 2) * gamma); }

  // Interior Minkowski dimension of the boundary.
  double mink_dim() const { return (dim - 1) / (1.0 - gamma); }

  // Exponent of the boundary collar volume, vol(collar_eps) ~ eps^(N - mink_dim).
  double collar_exponent() const { return (1.0 - dim * gamma) / (1.0 - gamma); }

  double decay_exp() const { return 2.0 + 2.0 / hardy_c(); }

  // Perturbation-of-domain rate 2/c.
  double rate_exp() const { return 2.0 / hardy_c(); }

  // Exponent of the weighted 1-D model Hardy inequality, beta = (2 - N) gamma.
  double model_beta() const { return (2 - dim) * gamma; }
};

}  // namespace smlab
