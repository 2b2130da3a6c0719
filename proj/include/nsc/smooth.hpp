#pragma once

#include <cmath>

namespace nsc {

/// C-infinity transition: 0 for x <= 0, 1 for x >= 1, built from
/// f(x) = exp(-1/x) as f(x) / (f(x) + f(1-x)). Satisfies
/// smooth_step(x) + smooth_step(1-x) = 1.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

/// 1 on (-inf, lo], 0 on [hi, inf), smooth in between.
inline double smooth_fall(double x, double lo, double hi) {
  return 1.0 - smooth_step((x - lo) / (hi - lo));
}

/// 0 on (-inf, lo], 1 on [hi, inf), smooth in between.
inline double smooth_rise(double x, double lo, double hi) { return smooth_step((x - lo) / (hi - lo)); }

/// Plateau bump: 0 outside (a, d), 1 on [b, c], smooth ramps on [a, b] and
/// [c, d]. Requires a < b <= c < d.
inline double smooth_plateau(double x, double a, double b, double c, double d) {
  if (x <= a || x >= d) return 0.0;
  if (x < b) return smooth_rise(x, a, b);
  if (x > c) return smooth_fall(x, c, d);
  return 1.0;
}

}  // namespace nsc
