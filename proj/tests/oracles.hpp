#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// J_n(x) from its power series in long double; adequate for x <= ~20.
inline long double bessel_j(int n, long double x) {
  const long double h = x / 2.0L;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= h / i;
  long double sum = term;
  const long double h2 = h * h;
  for (int m = 1; m < 200; ++m) {
    term *= -h2 / (static_cast<long double>(m) * (m + n));
    sum += term;
    if (std::fabs(term) < 1e-30L * std::fabs(sum) && m > 2 * x) break;
  }
  return sum;
}

// First k positive zeros of J_n: scan for sign changes, then bisect.
inline std::vector<long double> bessel_zeros(int n, std::size_t k) {
  std::vector<long double> z;
  long double a = 0.5L;
  long double fa = bessel_j(n, a);
  while (z.size() < k) {
    const long double b = a + 0.05L;
    const long double fb = bessel_j(n, b);
    if (fa * fb < 0) {
      long double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 1e-18L * hi; ++it) {
        const long double mid = 0.5L * (lo + hi);
        const long double fm = bessel_j(n, mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      z.push_back(0.5L * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return z;
}

inline double bessel_eigenvalue(int n, std::size_t k) {
  const long double j = bessel_zeros(n, k)[k - 1];
  return static_cast<double>(j * j);
}

// Warp map and derivatives by direct evaluation of the power formulas.
struct Warp {
  double gamma;
  double alpha() const { return 1.0 / (1.0 - gamma); }
  double w(double t) const { return 1.0 - std::pow(1.0 - t / alpha(), alpha()); }
  double closed_potential(double t, int n) const {
    const double a = alpha();
    const double g = gamma;
    const double u = 1.0 - t / a;
    const double den = 1.0 - std::pow(u, a);
    return (2 * g - g * g) / (4 * (1 - g) * (1 - g)) / ((a - t) * (a - t)) +
           (n * n - 0.25) * std::pow(u, 2 * g * a) / (den * den);
  }
};

template <class F>
double central_difference(F&& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// Ordinary least-squares slope of log y against log x.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace oracle
