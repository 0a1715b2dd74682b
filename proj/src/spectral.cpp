#include "latwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latwave/dispersion.hpp"
#include "latwave/error.hpp"

namespace latwave {

namespace {

using cplx = std::complex<double>;

double inv_sqrt_two_pi_pow(int n) { return std::pow(2.0 * std::numbers::pi, -0.5 * n); }

int ipow(int base, int e) {
  int r = 1;
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

Vec node_alpha(const QuadratureRule& rule, int n, int idx) {
  const int q = rule.nodes.size();
  Vec a{};
  for (int k = n - 1; k >= 0; --k) {
    a[k] = rule.nodes[idx % q];
    idx /= q;
  }
  return a;
}

double node_weight(const QuadratureRule& rule, int n, int idx) {
  const int q = rule.nodes.size();
  double w = 1.0;
  for (int k = 0; k < n; ++k) {
    w *= rule.weights[idx % q];
    idx /= q;
  }
  return w;
}

// Simpson weights on m intervals (3/8 rule on the last three when m is odd).
std::vector<double> simpson_weights(int m) {
  std::vector<double> w(m + 1, 0.0);
  if (m == 1) {
    w[0] = w[1] = 0.5;
    return w;
  }
  const int even = (m % 2 == 0) ? m : m - 3;
  for (int j = 0; j < even; j += 2) {
    w[j] += 1.0 / 3.0;
    w[j + 1] += 4.0 / 3.0;
    w[j + 2] += 1.0 / 3.0;
  }
  if (even != m) {
    w[even] += 3.0 / 8.0;
    w[even + 1] += 9.0 / 8.0;
    w[even + 2] += 9.0 / 8.0;
    w[even + 3] += 3.0 / 8.0;
  }
  return w;
}

double derivative_multiplier(Derivative d, int axis, const Vec& alpha, double omega) {
  switch (d) {
    case Derivative::None:
      return 1.0;
    case Derivative::TimeSecond:
      return -omega * omega;
    case Derivative::SpaceSecond:
      return -alpha[axis] * alpha[axis];
  }
  return 1.0;
}

double line_part(const std::vector<SpectralLine>& lines, int col, Flavor flavor, const LatticeSpec& spec, int n,
                 const Vec& x, double t, Derivative d, int axis) {
  double acc = 0.0;
  for (const auto& line : lines) {
    if (line.amplitude == 0.0) continue;
    const double omega = flavor_frequency(flavor, line.alpha, spec);
    const auto p = propagator_from_frequency(flavor, omega, t, spec.dt);
    const double c = p(0, col) * derivative_multiplier(d, axis, line.alpha, omega);
    acc += (line.amplitude * std::polar(1.0, dot(line.alpha, x, n))).real() * c;
  }
  return acc;
}

}  // namespace

const char* to_string(Flavor flavor) {
  switch (flavor) {
    case Flavor::Continuum:
      return "continuum";
    case Flavor::FullyDiscrete:
      return "fully-discrete";
    case Flavor::Semidiscrete:
      return "semidiscrete";
  }
  return "?";
}

double flavor_frequency(Flavor flavor, const Vec& alpha, const LatticeSpec& spec) {
  switch (flavor) {
    case Flavor::Continuum:
      return norm(alpha, spec.n);
    case Flavor::FullyDiscrete:
      return beta(alpha, spec);
    case Flavor::Semidiscrete:
      return beta_semidiscrete(alpha, spec.dx, spec.n);
  }
  return 0.0;
}

PropagatorMatrix propagator_from_frequency(Flavor flavor, double omega, double t, double dt) {
  PropagatorMatrix p;
  p.flavor = flavor;
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  p.m[0][0] = c;
  p.m[1][0] = -omega * s;
  if (flavor != Flavor::FullyDiscrete) {
    p.m[0][1] = t * sinc(omega * t);
    p.m[1][1] = c;
    return p;
  }
  // dt sin(omega t) / sin(omega dt) and its t-derivative
  const double sd = std::sin(omega * dt);
  if (std::abs(sd) < 1e-12 && omega * dt > 1.0) {
    p.m[0][1] = t * c / std::cos(omega * dt);
  } else {
    p.m[0][1] = t * sinc(omega * t) / sinc(omega * dt);
  }
  p.m[1][1] = c / sinc(omega * dt);
  return p;
}

PropagatorMatrix propagator(Flavor flavor, const Vec& alpha, double t, const LatticeSpec& spec) {
  return propagator_from_frequency(flavor, flavor_frequency(flavor, alpha, spec), t, spec.dt);
}

double gaussian_tail_integral(int n, double c, double M) {
  require(c > 0.0 && M >= 0.0, ErrorKind::InvalidArgument, "gaussian tail needs c > 0, M >= 0");
  const double pi = std::numbers::pi;
  const double sc = std::sqrt(c);
  switch (n) {
    case 1:
      return std::sqrt(pi / c) * std::erfc(sc * M);
    case 2:
      return pi / c * std::exp(-c * M * M);
    case 3:
      return 4.0 * pi * (M * std::exp(-c * M * M) / (2.0 * c) + std::sqrt(pi) / (4.0 * c * sc) * std::erfc(sc * M));
  }
  throw Error(ErrorKind::InvalidArgument, "dimension must be 1, 2 or 3");
}

FrequencyQuadrature::FrequencyQuadrature(int n, double cutoff, int nodes_per_axis, double tolerance)
    : n_(n), cutoff_(cutoff), tolerance_(tolerance) {
  require(n >= 1 && n <= kMaxDim, ErrorKind::InvalidArgument, "dimension must be 1, 2 or 3");
  require(cutoff > 0.0 && nodes_per_axis >= 1, ErrorKind::InvalidArgument, "bad frequency quadrature");
  rule_ = gauss_legendre(nodes_per_axis, -cutoff, cutoff);
}

FrequencyQuadrature FrequencyQuadrature::doubled() const {
  return FrequencyQuadrature(n_, cutoff_, 2 * nodes_per_axis(), tolerance_);
}

std::optional<double> FrequencyQuadrature::tail_bound(const DataFunction& f, const DataFunction& g,
                                                      double T) const {
  double sum = 0.0;
  for (const DataFunction* d : {&f, &g}) {
    if (!d->has_continuous_spectrum()) continue;
    const auto b = d->gaussian_bound(n_);
    if (!b) return std::nullopt;
    sum += b->constant * gaussian_tail_integral(n_, 0.5 * b->width * b->width, cutoff_);
  }
  return inv_sqrt_two_pi_pow(n_) * sum * (2.0 + 2.0 * std::abs(T));
}

FrequencyQuadrature FrequencyQuadrature::for_data(const DataFunction& f, const DataFunction& g, int n, double T,
                                                  int nodes_per_axis, double tail_tolerance,
                                                  double fallback_cutoff) {
  bool gaussian_only = true;
  bool any_continuous = false;
  for (const DataFunction* d : {&f, &g}) {
    if (!d->has_continuous_spectrum()) continue;
    any_continuous = true;
    if (!d->gaussian_bound(n)) gaussian_only = false;
  }
  if (!any_continuous || !gaussian_only)
    return FrequencyQuadrature(n, fallback_cutoff, nodes_per_axis, std::max(tail_tolerance, 1e-8));
  const double target = tail_tolerance * (2.0 + 2.0 * std::abs(T));
  double lo = 0.0, hi = 1.0;
  while (*FrequencyQuadrature(n, hi, 1).tail_bound(f, g, T) > target) hi *= 2.0;
  for (int it = 0; it < 100 && hi - lo > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (*FrequencyQuadrature(n, mid, 1).tail_bound(f, g, T) > target)
      lo = mid;
    else
      hi = mid;
  }
  return FrequencyQuadrature(n, hi, nodes_per_axis, std::max(target, 1e-8));
}

std::vector<cplx> separable_contract(const std::vector<cplx>& tensor, int n, int m,
                                     const std::vector<std::vector<cplx>>& factors, const std::vector<int>& rows) {
  std::vector<int> dims(n, m);
  std::vector<cplx> cur = tensor;
  for (int k = 0; k < n; ++k) {
    int outer = 1, inner = 1;
    for (int j = 0; j < k; ++j) outer *= dims[j];
    for (int j = k + 1; j < n; ++j) inner *= dims[j];
    const int p_count = rows[k];
    const auto& a = factors[k];
    std::vector<cplx> next(static_cast<size_t>(outer) * p_count * inner, 0.0);
    for (int o = 0; o < outer; ++o) {
      for (int p = 0; p < p_count; ++p) {
        cplx* dst = &next[(static_cast<size_t>(o) * p_count + p) * inner];
        for (int j = 0; j < m; ++j) {
          const cplx c = a[static_cast<size_t>(p) * m + j];
          const cplx* src = &cur[(static_cast<size_t>(o) * m + j) * inner];
          for (int i = 0; i < inner; ++i) dst[i] += c * src[i];
        }
      }
    }
    cur.swap(next);
    dims[k] = p_count;
  }
  return cur;
}

std::vector<cplx> transform_on_nodes(const DataFunction& f, int n, const QuadratureRule& rule) {
  const int q = rule.nodes.size();
  const int total = ipow(q, n);
  std::vector<cplx> out(total);
  if (f.has_closed_form_transform()) {
    for (int idx = 0; idx < total; ++idx) out[idx] = f.fourier(node_alpha(rule, n, idx), n);
    return out;
  }
  require(f.kind() == DataFunction::Kind::SmoothBump, ErrorKind::InvalidArgument,
          "no continuous transform for " + f.describe());
  // Gauss-Legendre in x on the bounding cube, then one exponential factor per axis.
  constexpr int kSpatialNodes = 96;
  const double r = f.radius();
  std::vector<QuadratureRule> xr;
  for (int k = 0; k < n; ++k) xr.push_back(gauss_legendre(kSpatialNodes, f.center()[k] - r, f.center()[k] + r));
  const int sx = ipow(kSpatialNodes, n);
  std::vector<cplx> samples(sx);
  for (int idx = 0; idx < sx; ++idx) {
    Vec x{};
    double w = 1.0;
    int rem = idx;
    for (int k = n - 1; k >= 0; --k) {
      x[k] = xr[k].nodes[rem % kSpatialNodes];
      w *= xr[k].weights[rem % kSpatialNodes];
      rem /= kSpatialNodes;
    }
    samples[idx] = w * f.value(x);
  }
  std::vector<std::vector<cplx>> factors(n);
  for (int k = 0; k < n; ++k) {
    factors[k].resize(static_cast<size_t>(q) * kSpatialNodes);
    for (int a = 0; a < q; ++a)
      for (int j = 0; j < kSpatialNodes; ++j)
        factors[k][static_cast<size_t>(a) * kSpatialNodes + j] = std::polar(1.0, -rule.nodes[a] * xr[k].nodes[j]);
  }
  out = separable_contract(samples, n, kSpatialNodes, factors, std::vector<int>(n, q));
  const double scale = inv_sqrt_two_pi_pow(n);
  for (auto& v : out) v *= scale;
  return out;
}

SpectralSynthesizer::SpectralSynthesizer(DataFunction f, DataFunction g, FrequencyQuadrature quad, double horizon)
    : f_(std::move(f)), g_(std::move(g)), quad_(std::move(quad)), horizon_(std::abs(horizon)) {
  const int n = quad_.dimension();
  for (const DataFunction* d : {&f_, &g_})
    require(d->has_continuous_spectrum() || d->has_line_spectrum(), ErrorKind::InvalidArgument,
            "initial datum without a spectrum: " + d->describe());
  tail_bound_ = quad_.tail_bound(f_, g_, horizon_);
  if (tail_bound_ && *tail_bound_ > quad_.tolerance())
    throw Error(ErrorKind::TailTooLarge, "frequency tail bound " + std::to_string(*tail_bound_) + " exceeds " +
                                             std::to_string(quad_.tolerance()));
  if (f_.has_continuous_spectrum()) f_hat_ = transform_on_nodes(f_, n, quad_.rule());
  if (g_.has_continuous_spectrum()) g_hat_ = transform_on_nodes(g_, n, quad_.rule());
  if (f_.has_line_spectrum()) f_lines_ = f_.lines(n);
  if (g_.has_line_spectrum()) g_lines_ = g_.lines(n);
}

std::vector<std::vector<double>> SpectralSynthesizer::on_grid_times(Flavor flavor, const LatticeSpec& spec,
                                                                    const std::vector<std::vector<double>>& axes,
                                                                    const std::vector<double>& times,
                                                                    Derivative derivative, int axis) const {
  const int n = quad_.dimension();
  require(static_cast<int>(axes.size()) == n, ErrorKind::InvalidArgument, "one axis per dimension");
  require(spec.n == n, ErrorKind::InvalidArgument, "lattice and quadrature dimensions differ");
  std::vector<int> rows(n);
  size_t out_size = 1;
  for (int k = 0; k < n; ++k) {
    rows[k] = axes[k].size();
    out_size *= rows[k];
  }
  auto point = [&](size_t idx) {
    Vec x{};
    for (int k = n - 1; k >= 0; --k) {
      x[k] = axes[k][idx % rows[k]];
      idx /= rows[k];
    }
    return x;
  };

  std::vector<std::vector<double>> out(times.size(), std::vector<double>(out_size, 0.0));
  const bool continuous = !f_hat_.empty() || !g_hat_.empty();
  if (continuous) {
    const auto& rule = quad_.rule();
    const int q = rule.nodes.size();
    const int total = ipow(q, n);
    std::vector<double> omega(total), mult(total);
    for (int idx = 0; idx < total; ++idx) {
      const Vec a = node_alpha(rule, n, idx);
      omega[idx] = flavor_frequency(flavor, a, spec);
      mult[idx] = derivative_multiplier(derivative, axis, a, omega[idx]);
    }
    std::vector<std::vector<cplx>> factors(n);
    for (int k = 0; k < n; ++k) {
      factors[k].resize(static_cast<size_t>(rows[k]) * q);
      for (int p = 0; p < rows[k]; ++p)
        for (int j = 0; j < q; ++j)
          factors[k][static_cast<size_t>(p) * q + j] = rule.weights[j] * std::polar(1.0, rule.nodes[j] * axes[k][p]);
    }
    const double scale = inv_sqrt_two_pi_pow(n);
    std::vector<cplx> coeff(total);
    for (size_t ti = 0; ti < times.size(); ++ti) {
      for (int idx = 0; idx < total; ++idx) {
        const auto p = propagator_from_frequency(flavor, omega[idx], times[ti], spec.dt);
        cplx c = 0.0;
        if (!f_hat_.empty()) c += f_hat_[idx] * p(0, 0);
        if (!g_hat_.empty()) c += g_hat_[idx] * p(0, 1);
        coeff[idx] = c * mult[idx];
      }
      const auto r = separable_contract(coeff, n, q, factors, rows);
      for (size_t i = 0; i < out_size; ++i) out[ti][i] = scale * r[i].real();
    }
  }
  if (!f_lines_.empty() || !g_lines_.empty()) {
    for (size_t ti = 0; ti < times.size(); ++ti)
      for (size_t i = 0; i < out_size; ++i) {
        const Vec x = point(i);
        out[ti][i] += line_part(f_lines_, 0, flavor, spec, n, x, times[ti], derivative, axis) +
                      line_part(g_lines_, 1, flavor, spec, n, x, times[ti], derivative, axis);
      }
  }
  return out;
}

std::vector<double> SpectralSynthesizer::on_grid(Flavor flavor, const LatticeSpec& spec,
                                                 const std::vector<std::vector<double>>& axes, double t,
                                                 Derivative derivative, int axis) const {
  return on_grid_times(flavor, spec, axes, {t}, derivative, axis).front();
}

double SpectralSynthesizer::value(Flavor flavor, const LatticeSpec& spec, const Vec& x, double t,
                                  Derivative derivative, int axis) const {
  std::vector<std::vector<double>> axes;
  for (int k = 0; k < quad_.dimension(); ++k) axes.push_back({x[k]});
  return on_grid(flavor, spec, axes, t, derivative, axis).front();
}

double SpectralSynthesizer::self_consistency(Flavor flavor, const LatticeSpec& spec, const Vec& x, double t) const {
  const SpectralSynthesizer fine(f_, g_, quad_.doubled(), horizon_);
  return std::abs(value(flavor, spec, x, t) - fine.value(flavor, spec, x, t));
}

namespace {

LatticeSpec spec_for(int n, double dx, double dt) {
  LatticeSpec s;
  s.n = n;
  s.dx = dx;
  s.dt = dt;
  return s;
}

}  // namespace

double continuum_solution_u(const DataFunction& f, const DataFunction& g, const Vec& x, double t,
                            const FrequencyQuadrature& quad) {
  const SpectralSynthesizer s(f, g, quad, t);
  return s.value(Flavor::Continuum, spec_for(quad.dimension(), 0.0, 0.0), x, t);
}

double discrete_closed_form_v(const DataFunction& f, const DataFunction& g, const LatticeSpec& spec, const Vec& x,
                              double t, const FrequencyQuadrature& quad) {
  const SpectralSynthesizer s(f, g, quad, t);
  return s.value(Flavor::FullyDiscrete, spec, x, t);
}

double semidiscrete_closed_form_phi(const DataFunction& f, const DataFunction& g, double dx, const Vec& x, double t,
                                    const FrequencyQuadrature& quad) {
  const SpectralSynthesizer s(f, g, quad, t);
  return s.value(Flavor::Semidiscrete, spec_for(quad.dimension(), dx, 0.0), x, t);
}

double duhamel_solve(const DataFunction& f, const DataFunction& g, const Forcing& w, Flavor flavor,
                     const LatticeSpec& spec, const Vec& x, double t, const FrequencyQuadrature& quad,
                     double s_step) {
  require(s_step > 0.0, ErrorKind::InvalidArgument, "s_step must be positive");
  const int n = quad.dimension();
  const SpectralSynthesizer hom(f, g, quad, t);
  double result = hom.value(flavor, spec, x, t);
  if (w.is_none() || t == 0.0) return result;

  int m;
  if (flavor == Flavor::FullyDiscrete) {
    const double q_step = s_step / spec.dt;
    const double q_t = t / s_step;
    const bool aligned = std::abs(q_step - std::round(q_step)) <= 1e-9 * std::max(1.0, q_step) &&
                         std::abs(q_t - std::round(q_t)) <= 1e-9 * std::max(1.0, std::abs(q_t)) &&
                         std::round(q_step) >= 1.0;
    if (!aligned)
      throw Error(ErrorKind::SGridMisaligned, "s-grid step " + std::to_string(s_step) +
                                                  " and t must be multiples of dt " + std::to_string(spec.dt));
    m = static_cast<int>(std::llround(std::abs(q_t)));
  } else {
    m = std::max(1, static_cast<int>(std::ceil(std::abs(t) / s_step - 1e-9)));
  }
  const double h = t / m;
  const auto sw = simpson_weights(m);
  std::vector<double> s_nodes(m + 1), tau(m + 1);
  for (int j = 0; j <= m; ++j) {
    s_nodes[j] = j * h;
    tau[j] = w.time_factor(s_nodes[j]);
  }

  if (w.spatial().has_continuous_spectrum()) {
    const auto& rule = quad.rule();
    const auto spatial_hat = transform_on_nodes(w.spatial(), n, rule);
    const int total = spatial_hat.size();
    cplx acc = 0.0;
    for (int idx = 0; idx < total; ++idx) {
      const Vec a = node_alpha(rule, n, idx);
      const double omega = flavor_frequency(flavor, a, spec);
      double integral = 0.0;
      for (int j = 0; j <= m; ++j) {
        if (sw[j] == 0.0 || tau[j] == 0.0) continue;
        integral += sw[j] * tau[j] * propagator_from_frequency(flavor, omega, t - s_nodes[j], spec.dt)(0, 1);
      }
      acc += node_weight(rule, n, idx) * std::polar(1.0, dot(a, x, n)) * spatial_hat[idx] *
             (w.spectral_multiplier(a) * integral * h);
    }
    result += inv_sqrt_two_pi_pow(n) * acc.real();
  } else {
    for (int j = 0; j <= m; ++j) {
      double part = 0.0;
      for (const auto& line : w.lines(s_nodes[j])) {
        const double omega = flavor_frequency(flavor, line.alpha, spec);
        part += (line.amplitude * std::polar(1.0, dot(line.alpha, x, n))).real() *
                propagator_from_frequency(flavor, omega, t - s_nodes[j], spec.dt)(0, 1);
      }
      result += sw[j] * h * part;
    }
  }
  return result;
}

}  // namespace latwave
