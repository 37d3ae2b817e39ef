#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace srbg {

/// Thrown for parameter sets outside the model (the message names the invariant).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A price argument fell outside [0,1].
struct OutOfDomain : std::domain_error {
  using std::domain_error::domain_error;
};

namespace num {

inline constexpr double root_tol = 1e-10;
inline constexpr int max_iter = 200;
inline constexpr double fd_step = 1e-6;

/// Bisection on a bracket where f(lo) and f(hi) have opposite signs (or one is zero).
/// Returns the midpoint of the final bracket.
template <class F>
double bisect(F&& f, double lo, double hi, double tol = root_tol, int iters = max_iter) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  for (int i = 0; i < iters && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Central difference, falling back to one-sided steps near the ends of [lo, hi].
template <class F>
double derivative(F&& f, double x, double lo = 0.0, double hi = 1.0, double h = fd_step) {
  double a = std::max(lo, x - h);
  double b = std::min(hi, x + h);
  return (f(b) - f(a)) / (b - a);
}

/// Maximizer of a unimodal f on [lo, hi] by bisection on the derivative sign.
template <class F>
double argmax_unimodal(F&& f, double lo, double hi, double tol = root_tol) {
  auto d = [&](double x) { return derivative(f, x, lo, hi); };
  if (d(lo) <= 0.0) return lo;
  if (d(hi) >= 0.0) return hi;
  return bisect(d, lo, hi, tol);
}

/// Golden-section maximization of a unimodal f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double tol = 1e-12) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 400 && b - a > tol; ++i) {
    if (fc >= fd) {  // keep the left side on ties
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

/// n equally spaced points covering [lo, hi] inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

/// Index of the first element within `tie` of the maximum.
inline std::size_t first_argmax(const std::vector<double>& v, double tie = 1e-12) {
  double best = -std::numeric_limits<double>::infinity();
  for (double x : v) best = std::max(best, x);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= best - tie) return i;
  return 0;
}

inline bool le(double a, double b, double tol) { return a <= b + tol; }

}  // namespace num
}  // namespace srbg
