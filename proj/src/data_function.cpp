#include "latwave/data_function.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "latwave/error.hpp"
#include "latwave/gauss_legendre.hpp"

namespace latwave {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double inv_sqrt_two_pi_pow(int n) { return std::pow(2.0 * std::numbers::pi, -0.5 * n); }

Vec minus(const Vec& a, const Vec& b) {
  Vec r{};
  for (int k = 0; k < kMaxDim; ++k) r[k] = a[k] - b[k];
  return r;
}

Vec negate(const Vec& a) {
  Vec r{};
  for (int k = 0; k < kMaxDim; ++k) r[k] = -a[k];
  return r;
}

std::string vec_text(const Vec& v) {
  std::ostringstream os;
  os << '(' << v[0] << ',' << v[1] << ',' << v[2] << ')';
  return os.str();
}

}  // namespace

DataFunction DataFunction::constant(double value) {
  DataFunction f;
  f.kind_ = Kind::Constant;
  f.amplitude_ = value;
  return f;
}

DataFunction DataFunction::affine(const Vec& gradient, double offset) {
  DataFunction f;
  f.kind_ = Kind::Affine;
  f.alpha_ = gradient;
  f.offset_ = offset;
  f.amplitude_ = 1.0;
  return f;
}

DataFunction DataFunction::gaussian(const Vec& center, double width, double amplitude) {
  require(width > 0.0, ErrorKind::InvalidArgument, "gaussian width must be positive");
  DataFunction f;
  f.kind_ = Kind::Gaussian;
  f.center_ = center;
  f.width_ = width;
  f.amplitude_ = amplitude;
  return f;
}

DataFunction DataFunction::modulated_gaussian(const Vec& center, double width, const Vec& carrier,
                                              double amplitude) {
  DataFunction f = gaussian(center, width, amplitude);
  f.kind_ = Kind::ModulatedGaussian;
  f.alpha_ = carrier;
  return f;
}

DataFunction DataFunction::plane_wave(const Vec& alpha, double amplitude) {
  DataFunction f;
  f.kind_ = Kind::PlaneWave;
  f.alpha_ = alpha;
  f.amplitude_ = amplitude;
  return f;
}

DataFunction DataFunction::separable_cosine(const Vec& alpha, double amplitude, const Vec& phase) {
  DataFunction f;
  f.kind_ = Kind::SeparableCosine;
  f.alpha_ = alpha;
  f.phase_ = phase;
  f.amplitude_ = amplitude;
  return f;
}

DataFunction DataFunction::smooth_bump(const Vec& center, double radius, double amplitude) {
  require(radius > 0.0, ErrorKind::InvalidArgument, "bump radius must be positive");
  DataFunction f;
  f.kind_ = Kind::SmoothBump;
  f.center_ = center;
  f.width_ = radius;
  f.amplitude_ = amplitude;
  return f;
}

double DataFunction::value(const Vec& x) const {
  switch (kind_) {
    case Kind::Constant:
      return amplitude_;
    case Kind::Affine:
      return offset_ + dot(alpha_, x, kMaxDim);
    case Kind::Gaussian: {
      const double r2 = norm2(minus(x, center_), kMaxDim);
      return amplitude_ * std::exp(-r2 / (2.0 * width_ * width_));
    }
    case Kind::ModulatedGaussian: {
      const Vec d = minus(x, center_);
      const double r2 = norm2(d, kMaxDim);
      return amplitude_ * std::exp(-r2 / (2.0 * width_ * width_)) * std::cos(dot(alpha_, d, kMaxDim));
    }
    case Kind::PlaneWave:
      return amplitude_ * std::cos(dot(alpha_, x, kMaxDim));
    case Kind::SeparableCosine: {
      double p = amplitude_;
      for (int k = 0; k < kMaxDim; ++k) p *= std::cos(alpha_[k] * x[k] - phase_[k]);
      return p;
    }
    case Kind::SmoothBump: {
      const double s = norm2(minus(x, center_), kMaxDim) / (width_ * width_);
      if (s >= 1.0) return 0.0;
      return amplitude_ * std::exp(1.0 - 1.0 / (1.0 - s));
    }
  }
  return 0.0;
}

double DataFunction::laplacian(const Vec& x, int n) const {
  switch (kind_) {
    case Kind::Constant:
    case Kind::Affine:
      return 0.0;
    case Kind::Gaussian: {
      const double w2 = width_ * width_;
      const double r2 = norm2(minus(x, center_), n);
      return value(x) * (r2 / (w2 * w2) - n / w2);
    }
    case Kind::ModulatedGaussian: {
      const Vec d = minus(x, center_);
      const double w2 = width_ * width_;
      const double r2 = norm2(d, n);
      const double g = amplitude_ * std::exp(-r2 / (2.0 * w2));
      const double phase = dot(alpha_, d, n);
      const double lap_g = g * (r2 / (w2 * w2) - n / w2);
      return lap_g * std::cos(phase) + 2.0 * g * std::sin(phase) * phase / w2 -
             norm2(alpha_, n) * g * std::cos(phase);
    }
    case Kind::PlaneWave:
    case Kind::SeparableCosine:
      return -norm2(alpha_, n) * value(x);
    case Kind::SmoothBump: {
      const double r2w = width_ * width_;
      const double s = norm2(minus(x, center_), n) / r2w;
      if (s >= 1.0) return 0.0;
      const double q = 1.0 / (1.0 - s);
      const double phi = value(x);
      return phi * (q * q * q * (q - 2.0) * 4.0 * s / r2w - q * q * 2.0 * n / r2w);
    }
  }
  return 0.0;
}

bool DataFunction::has_closed_form_transform() const {
  return kind_ == Kind::Gaussian || kind_ == Kind::ModulatedGaussian;
}

bool DataFunction::has_line_spectrum() const {
  return kind_ == Kind::Constant || kind_ == Kind::PlaneWave || kind_ == Kind::SeparableCosine;
}

bool DataFunction::has_continuous_spectrum() const {
  return has_closed_form_transform() || kind_ == Kind::SmoothBump;
}

std::vector<SpectralLine> DataFunction::lines(int n) const {
  std::vector<SpectralLine> out;
  switch (kind_) {
    case Kind::Constant:
      if (amplitude_ != 0.0) out.push_back({amplitude_, Vec{}});
      break;
    case Kind::PlaneWave:
      out.push_back({0.5 * amplitude_, alpha_});
      out.push_back({0.5 * amplitude_, negate(alpha_)});
      break;
    case Kind::SeparableCosine: {
      // prod_k cos(a_k x_k - p_k) = 2^{-n} sum over sign patterns.
      const int patterns = 1 << n;
      for (int mask = 0; mask < patterns; ++mask) {
        SpectralLine line{amplitude_ / patterns, Vec{}};
        std::complex<double> phase_factor = 1.0;
        for (int k = 0; k < n; ++k) {
          const double sign = (mask >> k) & 1 ? -1.0 : 1.0;
          line.alpha[k] = sign * alpha_[k];
          phase_factor *= std::exp(-kI * sign * phase_[k]);
        }
        // Axes beyond n contribute the constant factor cos(-p_k).
        for (int k = n; k < kMaxDim; ++k) phase_factor *= std::cos(phase_[k]);
        line.amplitude *= phase_factor;
        out.push_back(line);
      }
      break;
    }
    default:
      throw Error(ErrorKind::InvalidArgument, describe() + " has no line spectrum");
  }
  return out;
}

std::complex<double> DataFunction::fourier(const Vec& alpha, int n) const {
  switch (kind_) {
    case Kind::Gaussian: {
      const double w = width_;
      return amplitude_ * std::pow(w, n) * std::exp(-0.5 * w * w * norm2(alpha, n)) *
             std::exp(-kI * dot(alpha, center_, n));
    }
    case Kind::ModulatedGaussian: {
      const double w = width_;
      Vec plus{};
      Vec minus_carrier{};
      for (int k = 0; k < kMaxDim; ++k) {
        plus[k] = alpha[k] - alpha_[k];
        minus_carrier[k] = alpha[k] + alpha_[k];
      }
      const double envelope = 0.5 * amplitude_ * std::pow(w, n);
      return envelope *
             (std::exp(-0.5 * w * w * norm2(plus, n)) + std::exp(-0.5 * w * w * norm2(minus_carrier, n))) *
             std::exp(-kI * dot(alpha, center_, n));
    }
    case Kind::SmoothBump: {
      const int nodes = 48;
      std::vector<QuadratureRule> rules;
      for (int k = 0; k < n; ++k)
        rules.push_back(gauss_legendre(nodes, center_[k] - width_, center_[k] + width_));
      std::complex<double> sum = 0.0;
      MultiIndex idx{};
      const int total = static_cast<int>(std::pow(nodes, n));
      for (int flat = 0; flat < total; ++flat) {
        int rest = flat;
        for (int k = n - 1; k >= 0; --k) {
          idx[k] = rest % nodes;
          rest /= nodes;
        }
        Vec s{};
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
          s[k] = rules[k].nodes[idx[k]];
          w *= rules[k].weights[idx[k]];
        }
        const double v = value(s);
        if (v != 0.0) sum += w * v * std::exp(-kI * dot(alpha, s, n));
      }
      return inv_sqrt_two_pi_pow(n) * sum;
    }
    default:
      throw Error(ErrorKind::InvalidArgument, describe() + " has no function-valued transform");
  }
}

std::optional<DataFunction::GaussianBound> DataFunction::gaussian_bound(int n) const {
  const double base = std::abs(amplitude_) * std::pow(width_, n);
  if (kind_ == Kind::Gaussian) return GaussianBound{base, width_};
  if (kind_ == Kind::ModulatedGaussian) {
    const double shift2 = norm2(alpha_, n);
    return GaussianBound{base * std::exp(0.5 * width_ * width_ * shift2), width_ / std::sqrt(2.0)};
  }
  return std::nullopt;
}

std::optional<double> DataFunction::support_radius() const {
  switch (kind_) {
    case Kind::SmoothBump:
      return width_;
    case Kind::Gaussian:
    case Kind::ModulatedGaussian:
      return width_ * std::sqrt(2.0 * 37.0);  // exp(-37) < 1e-16
    default:
      return std::nullopt;
  }
}

std::string DataFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant: os << "constant(" << amplitude_ << ')'; break;
    case Kind::Affine: os << "affine(" << vec_text(alpha_) << ',' << offset_ << ')'; break;
    case Kind::Gaussian:
      os << "gaussian(" << vec_text(center_) << ',' << width_ << ',' << amplitude_ << ')';
      break;
    case Kind::ModulatedGaussian:
      os << "modulated_gaussian(" << vec_text(center_) << ',' << width_ << ',' << vec_text(alpha_) << ')';
      break;
    case Kind::PlaneWave: os << "plane_wave(" << vec_text(alpha_) << ')'; break;
    case Kind::SeparableCosine: os << "separable_cosine(" << vec_text(alpha_) << ')'; break;
    case Kind::SmoothBump:
      os << "smooth_bump(" << vec_text(center_) << ',' << width_ << ',' << amplitude_ << ')';
      break;
  }
  return os.str();
}

Forcing Forcing::separable(DataFunction spatial, TimeProfile profile, int n) {
  Forcing w;
  w.n_ = n;
  w.kind_ = Kind::Separable;
  w.spatial_ = std::move(spatial);
  w.profile_ = profile;
  return w;
}

Forcing Forcing::manufactured_cosine(DataFunction spatial, double omega, int n) {
  require(spatial.has_closed_form_transform() || spatial.has_continuous_spectrum(),
          ErrorKind::InvalidArgument, "manufactured forcing needs a transformable spatial part");
  Forcing w;
  w.kind_ = Kind::ManufacturedCosine;
  w.spatial_ = std::move(spatial);
  w.omega_ = omega;
  w.n_ = n;
  return w;
}

double Forcing::value(const Vec& x, double t) const {
  switch (kind_) {
    case Kind::None:
      return 0.0;
    case Kind::Separable:
      return spatial_.value(x) * profile_(t);
    case Kind::ManufacturedCosine:
      return -(omega_ * omega_ * spatial_.value(x) + spatial_.laplacian(x, n_)) * std::cos(omega_ * t);
  }
  return 0.0;
}

std::complex<double> Forcing::fourier(const Vec& alpha, double s) const {
  switch (kind_) {
    case Kind::None:
      return 0.0;
    case Kind::Separable:
      if (!spatial_.has_continuous_spectrum()) return 0.0;
      return spatial_.fourier(alpha, n_) * profile_(s);
    case Kind::ManufacturedCosine:
      return (norm2(alpha, n_) - omega_ * omega_) * spatial_.fourier(alpha, n_) * std::cos(omega_ * s);
  }
  return 0.0;
}

double Forcing::time_factor(double s) const {
  switch (kind_) {
    case Kind::None:
      return 0.0;
    case Kind::Separable:
      return profile_(s);
    case Kind::ManufacturedCosine:
      return std::cos(omega_ * s);
  }
  return 0.0;
}

double Forcing::spectral_multiplier(const Vec& alpha) const {
  if (kind_ == Kind::ManufacturedCosine) return norm2(alpha, n_) - omega_ * omega_;
  return kind_ == Kind::None ? 0.0 : 1.0;
}

std::vector<SpectralLine> Forcing::lines(double s) const {
  if (kind_ != Kind::Separable || !spatial_.has_line_spectrum()) return {};
  auto out = spatial_.lines(n_);
  for (auto& line : out) line.amplitude *= profile_(s);
  return out;
}

}  // namespace latwave
