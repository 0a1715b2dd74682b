#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "latwave/data_function.hpp"
#include "latwave/lattice.hpp"

namespace latwave {

/// Displacement and velocity per lattice box point. Only interior entries
/// evolve; boundary entries stay clamped.
struct OdeState {
  std::vector<double> xi;
  std::vector<double> xi_dot;
};

/// Second-order lattice ODE system
///   xi'' = a(x) lap xi - sigma(x) xi + w(x, t)   at interior points,
///   xi = boundary value                          at boundary points.
/// In free space the outermost lattice frame is held at the initial values.
class LagrangeSystem {
 public:
  explicit LagrangeSystem(std::shared_ptr<const LatticeClassification> classification,
                          std::vector<double> boundary_value = {});

  /// a = 1 + b.
  void set_coefficients(const DataFunction& b, const DataFunction& sigma);
  void set_forcing(Forcing forcing) { forcing_ = std::move(forcing); }
  /// Use +sigma xi instead of -sigma xi.
  void set_printed_sigma_sign(bool on) { plus_sigma_ = on; }

  const LatticeClassification& classification() const { return *classification_; }
  std::shared_ptr<const LatticeClassification> classification_ptr() const { return classification_; }
  double dx() const { return classification_->dx; }
  int dimension() const { return classification_->dimension(); }
  /// 2 |interior|
  std::size_t state_dimension() const { return 2 * classification_->interior.size(); }

  OdeState initial_state(const DataFunction& f, const DataFunction& g) const;
  /// From box-sized samples (interior entries are used).
  OdeState initial_state(const std::vector<double>& f, const std::vector<double>& g) const;

  /// Acceleration at every box point (zero where clamped).
  void rhs(const std::vector<double>& xi, double t, std::vector<double>& acc) const;
  std::vector<double> rhs(const std::vector<double>& xi, double t) const;

 private:
  std::shared_ptr<const LatticeClassification> classification_;
  std::vector<std::size_t> update_;
  std::vector<Vec> update_pos_;
  std::vector<double> boundary_value_;
  std::vector<double> a_;  // per update point
  std::vector<double> sigma_;
  Forcing forcing_;
  bool plus_sigma_ = false;
};

enum class OdeMethod { StormerVerlet, Rk4 };

/// Called after each step with the step count and time (t0 + k h).
using OdeObserver = std::function<void(int k, double t, const OdeState& state)>;

/// Fixed-step integration from t0 to t1 (t1 < t0 runs backwards); (t1 - t0)/h
/// must be an integer. Verlet uses the position form
///   xi_1 = xi_0 + h xi'_0 + h^2/2 acc_0,  xi_{k+1} = 2 xi_k - xi_{k-1} + h^2 acc_k.
/// Throws nan-detected if the state stops being finite.
OdeState integrate(const LagrangeSystem& system, OdeState state, double t0, double t1, OdeMethod method,
                   double h, const OdeObserver& observer = {});

struct PhiErrorRow {
  double h_ode = 0.0;
  double max_error = 0.0;
  double l2_error = 0.0;        // (sum e^2 dx^n)^{1/2} over the probes
  std::optional<double> ratio;  // previous error / this error
};

/// Free-space runs on a window around the probes, compared at t = T with the
/// semidiscrete closed form. The padding is ceil(1.5 T/dx) + 30 cells unless given.
std::vector<PhiErrorRow> phi_reference_error(const DataFunction& f, const DataFunction& g, int n, double dx, double T,
                                             const std::vector<Vec>& probes, const std::vector<double>& h_sequence,
                                             OdeMethod method = OdeMethod::StormerVerlet,
                                             std::optional<int> pad_cells = {});

}  // namespace latwave
