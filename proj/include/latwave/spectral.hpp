#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "latwave/data_function.hpp"
#include "latwave/gauss_legendre.hpp"
#include "latwave/lattice.hpp"

namespace latwave {

/// Which evolution the frequency-domain formulas describe: the wave
/// equation, the explicit scheme on (dx, dt), or the space-only lattice ODE.
enum class Flavor { Continuum, FullyDiscrete, Semidiscrete };

const char* to_string(Flavor flavor);

/// Temporal frequency of exp(i alpha.x) under the flavor: |alpha|, beta, beta0.
double flavor_frequency(Flavor flavor, const Vec& alpha, const LatticeSpec& spec);

/// 2x2 evolution of (displacement, velocity) coefficients for one frequency.
/// Upper row maps (f^, g^) to the displacement, lower row is its t-derivative.
/// The plane-wave factor exp(i alpha.x) (2 pi)^{-n/2} is left to the caller.
struct PropagatorMatrix {
  Flavor flavor = Flavor::Continuum;
  std::array<std::array<double, 2>, 2> m{};

  double operator()(int row, int col) const { return m[row][col]; }
  double determinant() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

/// dx and dt are read from `spec` as the flavor needs them.
PropagatorMatrix propagator(Flavor flavor, const Vec& alpha, double t, const LatticeSpec& spec);

/// Same, from an already computed frequency. dt only matters for FullyDiscrete.
PropagatorMatrix propagator_from_frequency(Flavor flavor, double omega, double t, double dt);

/// Tensor-product Gauss-Legendre rule on [-M, M]^n.
class FrequencyQuadrature {
 public:
  FrequencyQuadrature(int n, double cutoff, int nodes_per_axis, double tolerance = 1e-8);

  /// Cutoff from the closed-form Gaussian tail so that the neglected part is
  /// below tail_tolerance (2 + 2T); falls back to `fallback_cutoff` for data
  /// without a Gaussian bound.
  static FrequencyQuadrature for_data(const DataFunction& f, const DataFunction& g, int n, double T,
                                      int nodes_per_axis = 129, double tail_tolerance = 1e-10,
                                      double fallback_cutoff = 40.0);

  int dimension() const { return n_; }
  double cutoff() const { return cutoff_; }
  int nodes_per_axis() const { return rule_.nodes.size(); }
  double tolerance() const { return tolerance_; }
  const QuadratureRule& rule() const { return rule_; }
  FrequencyQuadrature doubled() const;

  /// (2 pi)^{-n/2} (B_f + B_g)(2 + 2T) \int_{|alpha|>M} exp(-w^2|alpha|^2/2);
  /// nullopt when a continuous-spectrum datum has no Gaussian bound.
  std::optional<double> tail_bound(const DataFunction& f, const DataFunction& g, double T) const;

 private:
  int n_;
  double cutoff_;
  double tolerance_;
  QuadratureRule rule_;
};

/// \int_{|alpha| > M} exp(-c |alpha|^2) d alpha in n dimensions.
double gaussian_tail_integral(int n, double c, double M);

enum class Derivative { None, TimeSecond, SpaceSecond };

/// Frequency-domain synthesis of the solutions of the three flavors from
/// initial data (f, g). Continuous spectra are integrated by quadrature,
/// line spectra are summed exactly.
class SpectralSynthesizer {
 public:
  /// Throws tail-too-large when the tail bound on [-horizon, horizon]
  /// exceeds quad.tolerance().
  SpectralSynthesizer(DataFunction f, DataFunction g, FrequencyQuadrature quad, double horizon);

  const FrequencyQuadrature& quadrature() const { return quad_; }
  std::optional<double> tail_bound() const { return tail_bound_; }

  double value(Flavor flavor, const LatticeSpec& spec, const Vec& x, double t,
               Derivative derivative = Derivative::None, int axis = 0) const;

  /// Values on the tensor grid axes[0] x ... x axes[n-1], lexicographic
  /// with the first axis most significant.
  std::vector<double> on_grid(Flavor flavor, const LatticeSpec& spec, const std::vector<std::vector<double>>& axes,
                              double t, Derivative derivative = Derivative::None, int axis = 0) const;

  /// One grid per entry of `times`; frequencies are computed once.
  std::vector<std::vector<double>> on_grid_times(Flavor flavor, const LatticeSpec& spec,
                                                 const std::vector<std::vector<double>>& axes,
                                                 const std::vector<double>& times,
                                                 Derivative derivative = Derivative::None, int axis = 0) const;

  /// |value(quad) - value(quad doubled)| at one point.
  double self_consistency(Flavor flavor, const LatticeSpec& spec, const Vec& x, double t) const;

 private:
  DataFunction f_;
  DataFunction g_;
  FrequencyQuadrature quad_;
  double horizon_;
  std::optional<double> tail_bound_;
  std::vector<std::complex<double>> f_hat_;  // on the node grid, empty if no continuous part
  std::vector<std::complex<double>> g_hat_;
  std::vector<SpectralLine> f_lines_;
  std::vector<SpectralLine> g_lines_;
};

/// Fourier transform of `f` at every node of the tensor grid built from `rule`.
std::vector<std::complex<double>> transform_on_nodes(const DataFunction& f, int n, const QuadratureRule& rule);

/// R(p) = sum_j T(j) prod_k A_k[p_k][j_k]; T has extent m per axis and
/// A_k is given row-major with rows = number of outputs on axis k.
std::vector<std::complex<double>> separable_contract(const std::vector<std::complex<double>>& tensor, int n, int m,
                                                     const std::vector<std::vector<std::complex<double>>>& factors,
                                                     const std::vector<int>& rows);

double continuum_solution_u(const DataFunction& f, const DataFunction& g, const Vec& x, double t,
                            const FrequencyQuadrature& quad);
double discrete_closed_form_v(const DataFunction& f, const DataFunction& g, const LatticeSpec& spec, const Vec& x,
                              double t, const FrequencyQuadrature& quad);
double semidiscrete_closed_form_phi(const DataFunction& f, const DataFunction& g, double dx, const Vec& x, double t,
                                    const FrequencyQuadrature& quad);

/// Displacement of the forced problem: homogeneous part from (f, g) plus
///   \int_0^t W_12(t - s) w^(alpha, s) ds
/// by composite Simpson with step s_step. The fully discrete flavor needs
/// t and s_step to be multiples of dt (s-grid-misaligned otherwise).
double duhamel_solve(const DataFunction& f, const DataFunction& g, const Forcing& w, Flavor flavor,
                     const LatticeSpec& spec, const Vec& x, double t, const FrequencyQuadrature& quad, double s_step);

}  // namespace latwave
