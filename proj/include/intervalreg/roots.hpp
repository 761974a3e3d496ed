#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace intervalreg {

struct BracketResult {
  double lower = 0.0;  ///< f(lower) <= 0
  double upper = 0.0;  ///< f(upper) >= 0
  std::size_t iterations = 0;
};

/// Bisection for a continuous nondecreasing `f` with f(lo) <= 0 <= f(hi).
///
/// Stops once the bracket is narrower than `x_tolerance` and |f| at the lower
/// end is within `f_tolerance`, when the midpoint no longer splits the bracket,
/// or after `max_iterations`. The returned lower end never overshoots the root.
template <typename F>
BracketResult bisect_nondecreasing(F&& f, double lo, double hi, double x_tolerance,
                                   double f_tolerance, std::size_t max_iterations = 200) {
  if (!(lo <= hi)) throw std::invalid_argument("bisection bracket is inverted");
  double f_lo = f(lo);
  if (f_lo > 0.0) throw std::invalid_argument("bisection bracket does not straddle a root");
  BracketResult out{lo, hi, 0};
  if (f_lo == 0.0) {
    out.upper = lo;
    return out;
  }
  for (; out.iterations < max_iterations; ++out.iterations) {
    if (out.upper - out.lower <= x_tolerance && -f_lo <= f_tolerance) break;
    const double mid = out.lower + (out.upper - out.lower) / 2.0;
    if (mid <= out.lower || mid >= out.upper) break;
    const double f_mid = f(mid);
    if (f_mid <= 0.0) {
      out.lower = mid;
      f_lo = f_mid;
      if (f_mid == 0.0) {
        out.upper = mid;
        break;
      }
    } else {
      out.upper = mid;
    }
  }
  return out;
}

}  // namespace intervalreg
