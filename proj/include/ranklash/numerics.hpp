#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

namespace ranklash::numerics {

// Root of f on [lo, hi] by bisection. f(lo) and f(hi) must differ in sign
// (a zero at either end is returned as is).
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12,
              int max_iter = 200) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw std::invalid_argument("bisect: root is not bracketed");
  }
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of a unimodal f on [lo, hi]. The
// returned point also considers both endpoints; ties go to the smaller x.
template <class F>
Extremum golden_section_max(F&& f, double lo, double hi, double tol = 1e-6) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  Extremum best{lo, f(lo)};
  for (double x : {0.5 * (a + b), hi}) {
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

// Pairwise summation; the result depends only on the order of `values`.
inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline double central_difference(const std::function<double(double)>& f,
                                 double x, double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

}  // namespace ranklash::numerics
