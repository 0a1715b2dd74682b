#include "latwave/leapfrog.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>

#include "latwave/error.hpp"
#include "latwave/stencils.hpp"

namespace latwave {

static_assert(std::endian::native == std::endian::little, "dump format assumes a little-endian host");

namespace {

bool is_zero_function(const std::optional<DataFunction>& d) { return !d || d->is_zero(); }

}  // namespace

DiscreteProblem DiscreteProblem::make(const Domain& domain, const LatticeSpec& spec, DataFunction f, DataFunction g,
                                      const std::optional<DataFunction>& h, Forcing forcing) {
  DiscreteProblem p;
  p.spec = spec;
  p.classification = std::make_shared<const LatticeClassification>(classify(domain, spec));
  p.f = std::move(f);
  p.g = std::move(g);
  p.forcing = std::move(forcing);
  if (h) {
    p.boundary_value.reserve(p.classification->boundary.size());
    for (std::size_t i : p.classification->boundary) p.boundary_value.push_back(h->value(p.classification->position(i)));
  }
  return p;
}

void DiscreteProblem::validate() const {
  require(classification != nullptr, ErrorKind::InvalidArgument, "problem has no lattice classification");
  require(spec.integral_horizon(), ErrorKind::InvalidArgument, "T/dt must be an integer");
  if (!allow_cfl_violation)
    require(spec.satisfies_cfl(), ErrorKind::CflViolated, "dt/dx exceeds 1/sqrt(n)");
  require(classification->dimension() == spec.n, ErrorKind::InvalidArgument, "dimension mismatch");
  for (const auto* samples : {&f_samples, &g_samples})
    require(samples->empty() || samples->size() == classification->box.size(), ErrorKind::InvalidArgument,
            "initial samples must cover the lattice box");
  require(boundary_value.empty() || boundary_value.size() == classification->boundary.size(),
          ErrorKind::InvalidArgument, "one boundary value per boundary point");
  require(is_zero_function(b) && is_zero_function(sigma), ErrorKind::InvalidArgument,
          "variable coefficients need the elliptic split pipeline");
}

LeapfrogSolver::LeapfrogSolver(DiscreteProblem problem) : problem_(std::move(problem)) {
  problem_.validate();
  const auto& c = *problem_.classification;
  for (std::size_t i : c.interior) {
    if (has_all_neighbors(c, i))
      update_.push_back(i);
    else
      frame_.push_back(i);
  }
  update_pos_.reserve(update_.size());
  for (std::size_t i : update_) update_pos_.push_back(c.position(i));
  f_values_.assign(c.box.size(), 0.0);
  g_values_.assign(c.box.size(), 0.0);
  for (std::size_t i : c.interior) {
    f_values_[i] = problem_.f_at(i);
    g_values_[i] = problem_.g_at(i);
  }
}

void LeapfrogSolver::fill_fixed(std::span<double> level) const {
  const auto& c = *problem_.classification;
  for (std::size_t k = 0; k < c.boundary.size(); ++k) level[c.boundary[k]] = problem_.boundary_at(k);
  for (std::size_t i : frame_) level[i] = f_values_[i];
}

GridField LeapfrogSolver::bootstrap() const {
  const auto& c = *problem_.classification;
  const double dt = problem_.spec.dt;
  GridField field(problem_.spec, problem_.classification);
  auto v0 = field.add_level(0);
  for (std::size_t i : c.interior) v0[i] = f_values_[i];
  fill_fixed(v0);
  auto vp = field.add_level(1);
  auto vm = field.add_level(-1);
  const bool forced = !problem_.forcing.is_none();
  for (std::size_t k = 0; k < update_.size(); ++k) {
    const std::size_t i = update_[k];
    const double lap = laplacian_kernel(v0, i, c.box, c.dx);
    const double w = forced ? problem_.forcing.value(update_pos_[k], 0.0) : 0.0;
    vp[i] = v0[i] + dt * g_values_[i] + 0.5 * dt * dt * (lap + w);
    vm[i] = v0[i] + (-dt) * g_values_[i] + 0.5 * dt * dt * (lap + w);
  }
  fill_fixed(vp);
  fill_fixed(vm);
  return field;
}

int LeapfrogSolver::step(GridField& field, Direction direction, bool keep_history) const {
  const auto levels = field.level_indices();
  require(levels.size() >= 2, ErrorKind::MissingLevel, "step needs two levels");
  const int sgn = direction == Direction::Forward ? 1 : -1;
  const int cur_p = direction == Direction::Forward ? levels.back() : levels.front();
  const int prev_p = cur_p - sgn;
  const int new_p = cur_p + sgn;
  const auto& c = *problem_.classification;
  const double dt = problem_.spec.dt;
  const double t = field.time(cur_p);
  auto next = field.add_level(new_p);
  const auto cur = std::as_const(field).level(cur_p);
  const auto prev = std::as_const(field).level(prev_p);
  const bool forced = !problem_.forcing.is_none();
  for (std::size_t k = 0; k < update_.size(); ++k) {
    const std::size_t i = update_[k];
    const double lap = laplacian_kernel(cur, i, c.box, c.dx);
    const double w = forced ? problem_.forcing.value(update_pos_[k], t) : 0.0;
    next[i] = 2.0 * cur[i] - prev[i] + dt * dt * (lap + w);
  }
  fill_fixed(next);
  double max_abs = 0.0;
  for (std::size_t i : update_) {
    const double a = std::abs(next[i]);
    if (!(a <= max_abs)) max_abs = a;  // also catches NaN
  }
  if (std::isnan(max_abs) || max_abs > blowup_threshold) throw BlowupError(new_p, field.time(new_p), max_abs);
  if (!keep_history) {
    const int stale = cur_p - 2 * sgn;
    if (stale != 0 && field.has_level(stale)) field.drop_level(stale);
  }
  return new_p;
}

GridField LeapfrogSolver::solve(Record record, const LevelObserver& observer, std::optional<int> p_min,
                                std::optional<int> p_max) const {
  const int N = problem_.spec.time_steps();
  const int lo = p_min.value_or(-N);
  const int hi = p_max.value_or(N);
  require(lo <= 0 && hi >= 0 && lo >= -N && hi <= N, ErrorKind::InvalidArgument, "level range outside [-N, N]");
  GridField field = bootstrap();
  const bool full = record == Record::Full;
  if (observer)
    for (int p : {-1, 0, 1}) observer(p, field);

  // forward pass; level -1 is kept aside for the backward pass
  std::vector<double> minus_one(field.level(-1).begin(), field.level(-1).end());
  if (!full) field.drop_level(-1);
  for (int p = 1; p < hi; ++p) {
    const int q = step(field, Direction::Forward, full);
    if (observer) observer(q, field);
  }
  if (hi == 0) field.drop_level(1);

  // backward pass on a scratch field seeded with levels 1, 0, -1
  if (lo < 0) {
    GridField back(problem_.spec, problem_.classification);
    const auto l0 = field.level(0);
    back.set_level(0, std::vector<double>(l0.begin(), l0.end()));
    back.set_level(-1, minus_one);
    for (int p = -1; p > lo; --p) {
      const int q = step(back, Direction::Backward, full);
      if (observer) observer(q, back);
    }
    for (int p : back.level_indices()) {
      if (p == 0) continue;
      if (!full && p > lo + 2) continue;
      const auto v = back.level(p);
      field.set_level(p, std::vector<double>(v.begin(), v.end()));
    }
  }
  return field;
}

double discrete_energy(const GridField& field, int p) {
  const auto& c = field.classification();
  const auto v1 = field.level(p + 1);
  const auto v0 = field.level(p);
  const double dt = field.spec().dt;
  const double dx = c.dx;
  const int n = c.dimension();
  double kinetic = 0.0, potential = 0.0;
  for (std::size_t i = 0; i < c.box.size(); ++i) {
    if (!c.in_support(i)) continue;
    const double vt = (v1[i] - v0[i]) / dt;
    kinetic += vt * vt;
    for (int k = 0; k < n; ++k) {
      if (!c.box.has_neighbor(i, k, +1)) continue;
      const std::size_t j = i + c.box.stride(k);
      if (!c.in_support(j)) continue;
      potential += ((v1[j] - v1[i]) / dx) * ((v0[j] - v0[i]) / dx);
    }
  }
  return (kinetic + potential) * std::pow(dx, n);
}

namespace {

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorKind::Io, "truncated level dump");
  return v;
}

}  // namespace

void write_level_dump(std::ostream& out, const GridField& field, int p) {
  const auto& c = field.classification();
  const auto support = c.support();
  const auto v = field.level(p);
  put<std::uint32_t>(out, c.dimension());
  put<double>(out, c.dx);
  put<double>(out, field.spec().dt);
  put<std::int64_t>(out, p);
  put<std::uint64_t>(out, support.size());
  for (std::size_t i : support) put<double>(out, v[i]);
  if (!out) throw Error(ErrorKind::Io, "failed to write level dump");
}

LevelDump read_level_dump(std::istream& in) {
  LevelDump d;
  d.n = get<std::uint32_t>(in);
  d.dx = get<double>(in);
  d.dt = get<double>(in);
  d.level = get<std::int64_t>(in);
  const auto count = get<std::uint64_t>(in);
  d.values.resize(count);
  for (auto& v : d.values) v = get<double>(in);
  return d;
}

}  // namespace latwave
