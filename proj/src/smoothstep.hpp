#pragma once

#include <cmath>

namespace pauli2d::detail {

// C^2 quintic step: 0 for t <= 0, 1 for t >= 1.
inline double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

inline double smoothstep_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double s = t * (1.0 - t);
  return 30.0 * s * s;
}

// C-infinity step built from exp(-1/t): 0 for t <= 0, 1 for t >= 1.
inline double smooth_transition(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace pauli2d::detail
