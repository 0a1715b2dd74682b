#include "latwave/dispersion.hpp"

#include <cmath>
#include <numbers>

#include "latwave/error.hpp"

namespace latwave {

double symbol_G(const Vec& alpha, double beta_sq, const LatticeSpec& spec) {
  const double b = std::sqrt(std::max(beta_sq, 0.0));
  const double st = sinc(0.5 * b * spec.dt);
  double space = 0.0;
  for (int k = 0; k < spec.n; ++k) {
    const double sx = sinc(0.5 * alpha[k] * spec.dx);
    space += sx * sx * alpha[k] * alpha[k];
  }
  return -st * st * beta_sq + space;
}

double beta_semidiscrete(const Vec& alpha, double dx, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = alpha[k] * sinc(0.5 * alpha[k] * dx);
    s += a * a;
  }
  return std::sqrt(s);
}

double arcsin_argument(const Vec& alpha, const LatticeSpec& spec) {
  return 0.5 * spec.dt * beta_semidiscrete(alpha, spec.dx, spec.n);
}

double beta(const Vec& alpha, const LatticeSpec& spec) {
  const double b0 = beta_semidiscrete(alpha, spec.dx, spec.n);
  double z = 0.5 * spec.dt * b0;
  if (z > 1.0 + 1e-12)
    throw Error(ErrorKind::CflViolated, "arcsin argument " + std::to_string(z) + " exceeds 1");
  if (z >= 1.0) return std::numbers::pi / spec.dt;
  return b0 * asinc(z);
}

}  // namespace latwave
