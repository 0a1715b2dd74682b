#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "latwave/types.hpp"

namespace latwave {

/// One term amplitude * exp(i alpha . x) of a line spectrum.
struct SpectralLine {
  std::complex<double> amplitude;
  Vec alpha{};
};

/// Catalog of smooth scalar fields used as initial data, boundary data and
/// coefficients. Fourier transforms use the unitary convention
///   f^(alpha) = (2 pi)^{-n/2} \int f(s) exp(-i alpha . s) ds.
class DataFunction {
 public:
  enum class Kind {
    Constant,
    Affine,
    Gaussian,
    ModulatedGaussian,
    PlaneWave,
    SeparableCosine,
    SmoothBump,
  };

  DataFunction() = default;  // the zero function

  static DataFunction zero() { return constant(0.0); }
  static DataFunction constant(double value);
  /// offset + gradient . x. Has no Fourier transform; boundary data only.
  static DataFunction affine(const Vec& gradient, double offset);
  /// amplitude * exp(-|x - center|^2 / (2 width^2))
  static DataFunction gaussian(const Vec& center, double width, double amplitude = 1.0);
  /// gaussian(center, width, amplitude) * cos(carrier . (x - center))
  static DataFunction modulated_gaussian(const Vec& center, double width, const Vec& carrier,
                                         double amplitude = 1.0);
  /// amplitude * cos(alpha . x), i.e. Re exp(i alpha . x)
  static DataFunction plane_wave(const Vec& alpha, double amplitude = 1.0);
  /// amplitude * prod_k cos(alpha_k x_k - phase_k)
  static DataFunction separable_cosine(const Vec& alpha, double amplitude = 1.0,
                                       const Vec& phase = {});
  /// amplitude * exp(1 - 1/(1 - |x-c|^2/r^2)) inside the ball, 0 outside.
  static DataFunction smooth_bump(const Vec& center, double radius, double amplitude = 1.0);

  Kind kind() const { return kind_; }
  const Vec& center() const { return center_; }
  const Vec& alpha() const { return alpha_; }
  const Vec& phase() const { return phase_; }
  double width() const { return width_; }
  double radius() const { return width_; }
  double amplitude() const { return amplitude_; }
  double offset() const { return offset_; }

  double operator()(const Vec& x) const { return value(x); }
  double value(const Vec& x) const;
  /// Exact Laplacian in n dimensions (used to manufacture forcing terms).
  double laplacian(const Vec& x, int n) const;

  bool is_zero() const { return kind_ == Kind::Constant && amplitude_ == 0.0; }

  /// Closed-form transform exists (Gaussian family).
  bool has_closed_form_transform() const;
  /// Spectrum is a finite set of lines (constants, plane waves, cosines).
  bool has_line_spectrum() const;
  /// Transform is an integrable function (closed form or numeric).
  bool has_continuous_spectrum() const;

  std::vector<SpectralLine> lines(int n) const;
  std::complex<double> fourier(const Vec& alpha, int n) const;

  /// |f^(alpha)| <= constant * exp(-width^2 |alpha|^2 / 2) for all alpha.
  struct GaussianBound {
    double constant;
    double width;
  };
  /// Gaussian family only. The modulated kind uses the weaker envelope
  /// width/sqrt(2), from |a - c|^2 >= |a|^2/2 - |c|^2.
  std::optional<GaussianBound> gaussian_bound(int n) const;

  /// Half-width of a cube around center() outside of which the function
  /// vanishes (bump) or is below 1e-16 relative (Gaussian family).
  std::optional<double> support_radius() const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::Constant;
  Vec center_{};
  Vec alpha_{};
  Vec phase_{};
  double width_ = 1.0;
  double amplitude_ = 0.0;
  double offset_ = 0.0;
};

/// Time profile of a separable forcing term.
struct TimeProfile {
  enum class Kind { Constant, Cosine };
  Kind kind = Kind::Constant;
  double omega = 0.0;

  double operator()(double t) const { return kind == Kind::Constant ? 1.0 : std::cos(omega * t); }
};

/// Forcing w(x, t) of the inhomogeneous problems.
class Forcing {
 public:
  enum class Kind {
    None,
    Separable,          // spatial(x) * profile(t)
    ManufacturedCosine  // w = box[ spatial(x) cos(omega t) ], Gaussian spatial part
  };

  Forcing() = default;
  static Forcing none() { return {}; }
  static Forcing separable(DataFunction spatial, TimeProfile profile, int n);
  /// The forcing whose forced solution with matching data is spatial(x) cos(omega t).
  static Forcing manufactured_cosine(DataFunction spatial, double omega, int n);

  Kind kind() const { return kind_; }
  bool is_none() const { return kind_ == Kind::None; }
  const TimeProfile& profile() const { return profile_; }
  const DataFunction& spatial() const { return spatial_; }
  double omega() const { return omega_; }

  double value(const Vec& x, double t) const;
  double operator()(const Vec& x, double t) const { return value(x, t); }

  /// x-transform at time s, continuous part.
  std::complex<double> fourier(const Vec& alpha, double s) const;
  /// w^(alpha, s) = multiplier(alpha) * spatial^(alpha) * time_factor(s).
  double time_factor(double s) const;
  double spectral_multiplier(const Vec& alpha) const;
  /// Line-spectrum part at time s (empty if the spatial part is continuous).
  std::vector<SpectralLine> lines(double s) const;

 private:
  Kind kind_ = Kind::None;
  DataFunction spatial_;
  TimeProfile profile_;
  double omega_ = 0.0;
  int n_ = 1;
};

}  // namespace latwave
