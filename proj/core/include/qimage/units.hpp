#pragma once

#include <cmath>
#include <numbers>

// Internal units: healing length xi = hbar = m = 1.
namespace qimage::units {

inline constexpr const char* kConvention = "xi=hbar=m=1";
inline constexpr double kSoundSpeed = 1.0 / std::numbers::sqrt2;   // c
inline constexpr double kKappa0 = 1.0 / std::numbers::sqrt2;       // kappa(v=0)
inline constexpr double kMcSquared = 0.5;                          // m c^2
inline constexpr double kGn = 0.5;                                 // g n = mu

// Inverse width of a dark soliton moving at v/c.
inline double kappa(double v_over_c) {
  return kKappa0 * std::sqrt(1.0 - v_over_c * v_over_c);
}

// sech^2(u) without overflow for large |u|.
inline double sech2(double u) {
  const double e = std::exp(-2.0 * std::abs(u));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

}  // namespace qimage::units
