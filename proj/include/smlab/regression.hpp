#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "smlab/error.hpp"

namespace smlab {

// Least-squares fit of log(y) = intercept + exponent * log(x).
struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;  // standard error of the slope
  double r2 = 0.0;
  std::size_t points_used = 0;
  std::vector<std::size_t> excluded;  // input indices dropped before fitting
};

// Ordinary least squares on (log x, log y). All inputs must be positive.
inline RateFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("fit_log_log: size mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw InsufficientDataError("fit_log_log: need at least 3 points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InputError("fit_log_log: values must be positive and finite");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw InputError("fit_log_log: degenerate abscissae");

  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.exponent * lx[i]);
    sse += r * r;
  }
  fit.stderr_ = std::sqrt(sse / (n - 2) / sxx);
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.points_used = n;
  return fit;
}

// Log-spaced grid of count points in [lo, hi].
inline std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw InputError("log_space: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace smlab
