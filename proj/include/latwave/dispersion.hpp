#pragma once

#include "latwave/lattice.hpp"
#include "latwave/types.hpp"

namespace latwave {

/// G(alpha, beta^2, dx, dt): the eigenvalue of the discrete d'Alembertian on
/// exp(i(alpha.x + beta t)). dx = dt = 0 gives -beta^2 + |alpha|^2.
double symbol_G(const Vec& alpha, double beta_sq, const LatticeSpec& spec);

/// (dt/dx) sqrt(sum_k sin^2(alpha_k dx/2)); the scheme has a real
/// frequency for alpha iff this is <= 1.
double arcsin_argument(const Vec& alpha, const LatticeSpec& spec);

/// beta0(alpha, dx) = (2/dx) sqrt(sum_k sin^2(alpha_k dx/2)); dx = 0 gives |alpha|.
double beta_semidiscrete(const Vec& alpha, double dx, int n);

/// Non-negative root of G = 0 on the branch through |alpha|:
///   beta = (2/dt) arcsin((dt/dx) sqrt(sum_k sin^2(alpha_k dx/2))).
/// dt = 0 selects beta0, dx = dt = 0 gives |alpha|. Throws cfl-violated when
/// the arcsin argument exceeds 1 + 1e-12.
double beta(const Vec& alpha, const LatticeSpec& spec);

/// Evaluator bound to one lattice.
class DispersionBranch {
 public:
  explicit DispersionBranch(LatticeSpec spec) : spec_(spec) {}

  const LatticeSpec& spec() const { return spec_; }
  double operator()(const Vec& alpha) const { return beta(alpha, spec_); }
  double semidiscrete(const Vec& alpha) const { return beta_semidiscrete(alpha, spec_.dx, spec_.n); }
  double continuum(const Vec& alpha) const { return norm(alpha, spec_.n); }

 private:
  LatticeSpec spec_;
};

}  // namespace latwave
