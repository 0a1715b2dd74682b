#include "latwave/lagrange_ode.hpp"

#include <algorithm>
#include <cmath>

#include "latwave/error.hpp"
#include "latwave/spectral.hpp"
#include "latwave/stencils.hpp"

namespace latwave {

LagrangeSystem::LagrangeSystem(std::shared_ptr<const LatticeClassification> classification,
                               std::vector<double> boundary_value)
    : classification_(std::move(classification)), boundary_value_(std::move(boundary_value)) {
  require(classification_ != nullptr, ErrorKind::InvalidArgument, "system needs a classification");
  require(boundary_value_.empty() || boundary_value_.size() == classification_->boundary.size(),
          ErrorKind::InvalidArgument, "one boundary value per boundary point");
  for (std::size_t i : classification_->interior)
    if (has_all_neighbors(*classification_, i)) {
      update_.push_back(i);
      update_pos_.push_back(classification_->position(i));
    }
  a_.assign(update_.size(), 1.0);
  sigma_.assign(update_.size(), 0.0);
}

void LagrangeSystem::set_coefficients(const DataFunction& b, const DataFunction& sigma) {
  for (std::size_t k = 0; k < update_.size(); ++k) {
    a_[k] = 1.0 + b.value(update_pos_[k]);
    sigma_[k] = sigma.value(update_pos_[k]);
  }
}

OdeState LagrangeSystem::initial_state(const DataFunction& f, const DataFunction& g) const {
  const auto& c = *classification_;
  std::vector<double> fs(c.box.size(), 0.0), gs(c.box.size(), 0.0);
  for (std::size_t i : c.interior) {
    const Vec x = c.position(i);
    fs[i] = f.value(x);
    gs[i] = g.value(x);
  }
  return initial_state(fs, gs);
}

OdeState LagrangeSystem::initial_state(const std::vector<double>& f, const std::vector<double>& g) const {
  const auto& c = *classification_;
  require(f.size() == c.box.size() && g.size() == c.box.size(), ErrorKind::InvalidArgument,
          "initial samples must cover the lattice box");
  OdeState s;
  s.xi.assign(c.box.size(), 0.0);
  s.xi_dot.assign(c.box.size(), 0.0);
  for (std::size_t i : c.interior) {
    s.xi[i] = f[i];
    s.xi_dot[i] = g[i];
  }
  for (std::size_t k = 0; k < c.boundary.size(); ++k)
    s.xi[c.boundary[k]] = boundary_value_.empty() ? 0.0 : boundary_value_[k];
  // clamped points do not move
  for (std::size_t i : c.interior)
    if (!has_all_neighbors(c, i)) s.xi_dot[i] = 0.0;
  return s;
}

void LagrangeSystem::rhs(const std::vector<double>& xi, double t, std::vector<double>& acc) const {
  const auto& c = *classification_;
  acc.assign(c.box.size(), 0.0);
  const bool forced = !forcing_.is_none();
  const double sign = plus_sigma_ ? -1.0 : 1.0;
  for (std::size_t k = 0; k < update_.size(); ++k) {
    const std::size_t i = update_[k];
    const double lap = laplacian_kernel(xi, i, c.box, c.dx);
    const double w = forced ? forcing_.value(update_pos_[k], t) : 0.0;
    acc[i] = a_[k] * lap - sign * sigma_[k] * xi[i] + w;
  }
}

std::vector<double> LagrangeSystem::rhs(const std::vector<double>& xi, double t) const {
  std::vector<double> acc;
  rhs(xi, t, acc);
  return acc;
}

namespace {

void check_finite(const std::vector<double>& v, double t) {
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorKind::NanDetected, "non-finite ODE state at t = " + std::to_string(t));
}

}  // namespace

OdeState integrate(const LagrangeSystem& system, OdeState state, double t0, double t1, OdeMethod method, double h,
                   const OdeObserver& observer) {
  require(h > 0.0, ErrorKind::InvalidArgument, "h_ode must be positive");
  const double steps_real = std::abs(t1 - t0) / h;
  const long long m = std::llround(steps_real);
  require(std::abs(steps_real - m) <= 1e-9 * std::max(1.0, steps_real), ErrorKind::InvalidArgument,
          "(t1 - t0)/h_ode must be an integer");
  const std::size_t size = system.classification().box.size();
  require(state.xi.size() == size && state.xi_dot.size() == size, ErrorKind::InvalidArgument, "state size mismatch");
  if (m == 0) return state;
  const double hs = t1 >= t0 ? h : -h;

  // points that evolve
  std::vector<std::size_t> moving;
  for (std::size_t i : system.classification().interior)
    if (has_all_neighbors(system.classification(), i)) moving.push_back(i);

  std::vector<double> acc;
  if (method == OdeMethod::StormerVerlet) {
    std::vector<double> prev = state.xi;
    std::vector<double> cur = state.xi;
    system.rhs(prev, t0, acc);
    for (std::size_t i : moving) cur[i] = prev[i] + hs * state.xi_dot[i] + 0.5 * hs * hs * acc[i];
    OdeState out;
    auto emit = [&](long long k, const std::vector<double>& xk, const std::vector<double>& xkm1) {
      // velocity consistent with velocity Verlet: (x_k - x_{k-1})/h + h/2 acc_k
      const double t = t0 + k * hs;
      system.rhs(xk, t, acc);
      out.xi = xk;
      out.xi_dot.assign(size, 0.0);
      for (std::size_t i : moving) out.xi_dot[i] = (xk[i] - xkm1[i]) / hs + 0.5 * hs * acc[i];
      if (observer) observer(static_cast<int>(k), t, out);
    };
    check_finite(cur, t0 + hs);
    if (observer || m == 1) emit(1, cur, prev);
    std::vector<double> next = cur;
    for (long long k = 1; k < m; ++k) {
      const double t = t0 + k * hs;
      system.rhs(cur, t, acc);
      for (std::size_t i : moving) next[i] = 2.0 * cur[i] - prev[i] + hs * hs * acc[i];
      check_finite(next, t + hs);
      prev.swap(cur);
      cur.swap(next);
      if (observer || k + 1 == m) emit(k + 1, cur, prev);
    }
    return out;
  }

  // classical RK4 on (xi, xi_dot)
  std::vector<double> k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
  auto eval = [&](const std::vector<double>& x, const std::vector<double>& v, double t, std::vector<double>& dx,
                  std::vector<double>& dv) {
    dx.assign(size, 0.0);
    for (std::size_t i : moving) dx[i] = v[i];
    system.rhs(x, t, dv);
  };
  std::vector<double> xs(size), vs(size);
  for (long long k = 0; k < m; ++k) {
    const double t = t0 + k * hs;
    eval(state.xi, state.xi_dot, t, k1x, k1v);
    xs = state.xi;
    vs = state.xi_dot;
    for (std::size_t i : moving) {
      xs[i] += 0.5 * hs * k1x[i];
      vs[i] += 0.5 * hs * k1v[i];
    }
    eval(xs, vs, t + 0.5 * hs, k2x, k2v);
    xs = state.xi;
    vs = state.xi_dot;
    for (std::size_t i : moving) {
      xs[i] += 0.5 * hs * k2x[i];
      vs[i] += 0.5 * hs * k2v[i];
    }
    eval(xs, vs, t + 0.5 * hs, k3x, k3v);
    xs = state.xi;
    vs = state.xi_dot;
    for (std::size_t i : moving) {
      xs[i] += hs * k3x[i];
      vs[i] += hs * k3v[i];
    }
    eval(xs, vs, t + hs, k4x, k4v);
    for (std::size_t i : moving) {
      state.xi[i] += hs / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
      state.xi_dot[i] += hs / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }
    check_finite(state.xi, t + hs);
    check_finite(state.xi_dot, t + hs);
    if (observer) observer(static_cast<int>(k + 1), t0 + (k + 1) * hs, state);
  }
  return state;
}

std::vector<PhiErrorRow> phi_reference_error(const DataFunction& f, const DataFunction& g, int n, double dx, double T,
                                             const std::vector<Vec>& probes, const std::vector<double>& h_sequence,
                                             OdeMethod method, std::optional<int> pad_cells) {
  require(!probes.empty(), ErrorKind::InvalidArgument, "no probe points");
  Vec lo = probes.front(), hi = probes.front();
  for (const auto& p : probes)
    for (int k = 0; k < n; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  const int pad = pad_cells.value_or(static_cast<int>(std::ceil(1.5 * T / dx)) + 30);
  LatticeSpec spec{n, dx, dx / (2.0 * std::sqrt(static_cast<double>(n))), T};
  const auto c = std::make_shared<const LatticeClassification>(classify(Domain::full_space(n, lo, hi, pad), spec));
  std::vector<std::size_t> probe_index;
  for (const auto& p : probes) {
    const auto idx = c->find(p);
    require(idx.has_value(), ErrorKind::InvalidArgument, "probe is not a lattice point");
    probe_index.push_back(*idx);
  }

  std::vector<double> reference(probes.size());
  const bool trivial = f.is_zero() && g.is_zero();
  if (!trivial) {
    const auto quad = FrequencyQuadrature::for_data(f, g, n, T);
    const SpectralSynthesizer synth(f, g, quad, T);
    spec.dt = 0.0;
    for (std::size_t k = 0; k < probes.size(); ++k) reference[k] = synth.value(Flavor::Semidiscrete, spec, probes[k], T);
  }

  const LagrangeSystem system(c);
  std::vector<PhiErrorRow> rows;
  for (double h : h_sequence) {
    const auto end = integrate(system, system.initial_state(f, g), 0.0, T, method, h);
    PhiErrorRow row;
    row.h_ode = h;
    double sum = 0.0;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const double e = std::abs(end.xi[probe_index[k]] - reference[k]);
      row.max_error = std::max(row.max_error, e);
      sum += e * e;
    }
    row.l2_error = std::sqrt(sum * std::pow(dx, n));
    if (!rows.empty() && row.max_error > 0.0) row.ratio = rows.back().max_error / row.max_error;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace latwave
