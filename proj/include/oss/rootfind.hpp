#pragma once

#include <cmath>
#include <stdexcept>

namespace oss {

/// Inverts a nondecreasing function: returns u >= 0 with f(u) ~= y.
/// The bracket [0, b] is grown geometrically until f(b) >= y, then plain
/// bisection runs until the interval is below max(atol, rtol * |u|).
/// Safe for merely left-continuous monotone f; no derivatives used.
template <class F>
double invert_increasing(F&& f, double y, double bracket_hint = 1.0,
                         double atol = 1e-12, double rtol = 1e-12) {
  if (y < 0.0) throw std::domain_error("invert_increasing: negative target");
  if (y == 0.0) return 0.0;
  double hi = bracket_hint > 0.0 ? bracket_hint : 1.0;
  int grow = 0;
  while (f(hi) < y) {
    hi *= 2.0;
    if (++grow > 2100) {
      throw std::runtime_error("invert_increasing: bracket growth failed");
    }
  }
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= std::max(atol, rtol * std::abs(mid))) return mid;
    (f(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oss
