#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace latwave {

/// Largest spatial dimension the library supports. Unused trailing
/// components of points and frequencies are kept at zero.
inline constexpr int kMaxDim = 3;

using Vec = std::array<double, kMaxDim>;
using MultiIndex = std::array<int, kMaxDim>;

inline double dot(const Vec& a, const Vec& b, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

inline double norm2(const Vec& a, int n) { return dot(a, a, n); }

inline double norm(const Vec& a, int n) { return std::sqrt(norm2(a, n)); }

/// sin(z)/z with the removable singularity filled by a 4-term series.
inline double sinc(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0;
  }
  return std::sin(z) / z;
}

/// arcsin(z)/z, same treatment near zero.
inline double asinc(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 + z2 / 6.0 + 3.0 * z2 * z2 / 40.0 + 5.0 * z2 * z2 * z2 / 112.0;
  }
  return std::asin(z) / z;
}

}  // namespace latwave
