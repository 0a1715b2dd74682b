#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "latwave/dispersion.hpp"
#include "latwave/elliptic.hpp"
#include "latwave/error.hpp"
#include "latwave/experiments.hpp"
#include "latwave/lagrange_ode.hpp"
#include "latwave/leapfrog.hpp"
#include "latwave/spectral.hpp"
#include "latwave/stencils.hpp"

namespace latwave {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string fmt_order(const std::optional<double>& v) { return v ? fmt(*v) : std::string("undefined"); }

// Points of the coarsest lattice inside the measurement window, in
// lexicographic order with the first axis most significant.
struct CoarseGrid {
  int n = 1;
  double dx = 0.0;
  double dt = 0.0;
  int steps = 0;
  Vec lo{};
  Vec hi{};
  std::vector<std::vector<double>> axes;
  std::vector<Vec> points;
  std::vector<MultiIndex> index;
};

CoarseGrid coarse_grid(const Vec& lo, const Vec& hi, const LatticeSpec& base, double spacing = 0.0) {
  CoarseGrid g;
  g.n = base.n;
  g.dx = spacing > 0.0 ? spacing : base.dx;
  g.dt = base.dt;
  g.steps = base.time_steps();
  g.lo = lo;
  g.hi = hi;
  std::vector<std::vector<int>> ids(g.n);
  for (int k = 0; k < g.n; ++k) {
    const int a = static_cast<int>(std::ceil(lo[k] / g.dx - 1e-9));
    const int b = static_cast<int>(std::floor(hi[k] / g.dx + 1e-9));
    std::vector<double> axis;
    for (int j = a; j <= b; ++j) {
      ids[k].push_back(j);
      axis.push_back(j * g.dx);
    }
    g.axes.push_back(axis);
  }
  std::size_t total = 1;
  for (const auto& a : ids) total *= a.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    Vec x{};
    MultiIndex m{};
    for (int k = g.n - 1; k >= 0; --k) {
      const std::size_t j = rest % ids[k].size();
      rest /= ids[k].size();
      m[k] = ids[k][j];
      x[k] = g.axes[k][j];
    }
    g.points.push_back(x);
    g.index.push_back(m);
  }
  return g;
}

std::vector<int> time_levels(const CoarseGrid& g, bool interior_only) {
  std::vector<int> p;
  const int edge = interior_only ? g.steps - 1 : g.steps;
  for (int q = -edge; q <= edge; ++q) p.push_back(q);
  return p;
}

SpaceTimeSamples oracle_samples(const SpectralSynthesizer& synth, Flavor flavor, const LatticeSpec& spec,
                                const CoarseGrid& g, const std::vector<int>& levels,
                                Derivative derivative = Derivative::None, int axis = 0) {
  std::vector<double> times;
  for (int p : levels) times.push_back(p * g.dt);
  const auto values = synth.on_grid_times(flavor, spec, g.axes, times, derivative, axis);
  SpaceTimeSamples s(g.n, g.dx, g.dt);
  for (std::size_t j = 0; j < levels.size(); ++j)
    for (std::size_t i = 0; i < g.points.size(); ++i) s.set(g.index[i], levels[j], values[j][i]);
  return s;
}

enum class Sampled { Value, TimeSecond, SpaceSecond };

// Leapfrog values (or second differences) at the coarse points and times.
SpaceTimeSamples leapfrog_samples(const DiscreteProblem& problem, const CoarseGrid& g, Sampled what) {
  const auto& c = *problem.classification;
  const int m = static_cast<int>(std::llround(g.dt / problem.spec.dt));
  require(m >= 1 && std::abs(m * problem.spec.dt - g.dt) <= 1e-9 * g.dt, ErrorKind::InvalidArgument,
          "time step does not divide the coarse step");
  std::vector<std::size_t> idx;
  for (const auto& x : g.points) {
    const auto i = c.find(x);
    require(i.has_value(), ErrorKind::InvalidArgument, "coarse point is not on the refined lattice");
    idx.push_back(*i);
  }
  SpaceTimeSamples s(g.n, g.dx, g.dt);
  auto record = [&](int p, const GridField& field) {
    if (p % m != 0) return;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      double v = 0.0;
      switch (what) {
        case Sampled::Value: v = field.value(p, idx[i]); break;
        case Sampled::TimeSecond: v = delta_t_second(field, idx[i], p); break;
        case Sampled::SpaceSecond: v = delta_x_second(field, idx[i], p, 0); break;
      }
      s.set(g.index[i], p / m, v);
    }
  };
  LeapfrogSolver(problem).solve(Record::Window, [&](int q, const GridField& field) {
    if (what == Sampled::Value) {
      record(q, field);
    } else if (q != 0) {
      // second differences need both neighbours of the centre level
      record(q > 0 ? q - 1 : q + 1, field);
    }
  });
  return s;
}

Vec window_lo(const ExperimentConfig& c) {
  Vec lo, hi;
  c.domain.bounds(lo, hi);
  return lo;
}

Vec window_hi(const ExperimentConfig& c) {
  Vec lo, hi;
  c.domain.bounds(lo, hi);
  return hi;
}

void require_full_space(const ExperimentConfig& c) {
  if (c.domain.shape() != Domain::Shape::FullSpace)
    throw Error(ErrorKind::Config, c.id + " compares against the free-space oracle and needs a full_space domain");
}

std::vector<LatticeSpec> halving_family(const LatticeSpec& base, int levels) {
  std::vector<LatticeSpec> out{base};
  if (levels > 1)
    for (const auto& s : refine_halving(base, levels - 1)) out.push_back(s);
  return out;
}

// dx halves per level; dt = base.dt / m with the smallest m giving dt/dx <= ratio.
std::vector<LatticeSpec> varying_family(const LatticeSpec& base, int levels, const std::vector<double>& ratios) {
  require(!ratios.empty(), ErrorKind::Config, "varying-ratio family needs ratios");
  std::vector<LatticeSpec> out;
  for (int k = 0; k < levels; ++k) {
    const double dx = base.dx / std::pow(2.0, k);
    const double r = std::min(ratios[k % ratios.size()], 1.0 / std::sqrt(static_cast<double>(base.n)));
    const int m = static_cast<int>(std::ceil(base.dt / (r * dx) - 1e-9));
    LatticeSpec s{base.n, dx, base.dt / m, base.T};
    if (!s.admissible()) throw Error(ErrorKind::Config, "varying family level " + std::to_string(k + 1) + " is not admissible");
    out.push_back(s);
  }
  return out;
}

void check_order_window(ExperimentResult& r, const ErrorTable& t, double lo, double hi, bool every_level) {
  r.checks.push_back({t.name() + ".monotone", t.sup_monotone_decreasing(),
                      "sup error strictly decreasing over " + std::to_string(t.size()) + " levels"});
  bool ok = t.size() >= 2;
  std::string detail;
  for (std::size_t k = every_level ? 1 : t.size() - 1; k < t.size(); ++k) {
    const auto& o = t.rows()[k].observed_order;
    ok = ok && o && *o >= lo && *o <= hi;
    detail += (detail.empty() ? "" : ", ") + fmt_order(o);
  }
  r.checks.push_back({t.name() + ".order", ok, (every_level ? "orders " : "final order ") + detail + " in [" +
                                                   fmt(lo) + ", " + fmt(hi) + "]"});
}

// Runs `body` and turns library errors into a failed check, so the
// remaining parts of an experiment still execute.
template <class F>
void guarded(ExperimentResult& r, const std::string& what, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    r.checks.push_back({what, false, e.what()});
  }
}

ErrorTable convergence_table(const std::string& name, const ExperimentConfig& c, const std::vector<LatticeSpec>& family,
                             const CoarseGrid& g, const SpaceTimeSamples& oracle, Sampled what) {
  std::vector<NormPair> norms(family.size());
  parallel_for(family.size(), [&](std::size_t k) {
    const auto problem = DiscreteProblem::make(c.domain, family[k], c.f, c.g, {}, c.w);
    const auto lf = leapfrog_samples(problem, g, what);
    norms[k] = compare_on_common_lattice(lf, oracle, g.lo, g.hi, -c.base.T, c.base.T);
  });
  ErrorTable t(name);
  for (std::size_t k = 0; k < family.size(); ++k) t.add(family[k].dx, family[k].dt, norms[k].sup, norms[k].l2);
  return t;
}

}  // namespace

ExperimentResult run_e1(const ExperimentConfig& c) {
  require_full_space(c);
  ExperimentResult r{c.id, {}, {}, {}};
  const auto g = coarse_grid(window_lo(c), window_hi(c), c.base);
  const auto levels = time_levels(g, false);
  SpaceTimeSamples oracle(g.n, g.dx, g.dt);
  if (c.f.is_zero() && c.g.is_zero()) {
    for (std::size_t i = 0; i < g.points.size(); ++i)
      for (int p : levels) oracle.set(g.index[i], p, 0.0);
  } else {
    const SpectralSynthesizer synth(c.f, c.g, FrequencyQuadrature::for_data(c.f, c.g, c.n, c.base.T), c.base.T);
    oracle = oracle_samples(synth, Flavor::Continuum, c.base, g, levels);
  }
  const double lo = c.tolerance("order_min", 1.7), hi = c.tolerance("order_max", 2.3);
  guarded(r, "E1_fixed", [&] {
    r.tables.push_back(convergence_table("E1_fixed", c, halving_family(c.base, c.levels), g, oracle, Sampled::Value));
    check_order_window(r, r.tables.back(), lo, hi, false);
  });
  guarded(r, "E1_varying", [&] {
    const auto family = varying_family(c.base, c.levels, c.ratios);
    r.tables.push_back(convergence_table("E1_varying", c, family, g, oracle, Sampled::Value));
    check_order_window(r, r.tables.back(), lo, hi, false);
    std::string ratios;
    for (const auto& s : family) ratios += (ratios.empty() ? "" : ", ") + fmt(s.dt / s.dx);
    r.notes.push_back("E1_varying dt/dx per level: " + ratios);
  });
  const auto* a = r.table("E1_fixed");
  const auto* b = r.table("E1_varying");
  if (a && b && !a->empty() && !b->empty()) {
    const double ea = a->back().sup_error, eb = b->back().sup_error;
    const double factor = c.tolerance("ratio_factor", 4.0);
    const bool ok = (ea == 0.0 && eb == 0.0) || (ea > 0.0 && eb > 0.0 && std::max(ea / eb, eb / ea) <= factor);
    r.checks.push_back({"E1.ratio_free", ok, "final errors " + fmt(ea) + " vs " + fmt(eb) + ", factor <= " + fmt(factor)});
  }
  return r;
}

ExperimentResult run_e2(const ExperimentConfig& c) {
  require_full_space(c);
  ExperimentResult r{c.id, {}, {}, {}};
  const auto g = coarse_grid(window_lo(c), window_hi(c), c.base);
  const auto levels = time_levels(g, true);
  const SpectralSynthesizer synth(c.f, c.g, FrequencyQuadrature::for_data(c.f, c.g, c.n, c.base.T), c.base.T);
  const auto family = halving_family(c.base, c.levels);
  const double lo = c.tolerance("order_min", 1.7), hi = c.tolerance("order_max", 2.3);
  const std::pair<const char*, Sampled> parts[] = {{"E2_dtt", Sampled::TimeSecond}, {"E2_dxx", Sampled::SpaceSecond}};
  for (const auto& [name, what] : parts) {
    guarded(r, name, [&] {
      const auto d = what == Sampled::TimeSecond ? Derivative::TimeSecond : Derivative::SpaceSecond;
      const auto oracle = oracle_samples(synth, Flavor::Continuum, c.base, g, levels, d, 0);
      r.tables.push_back(convergence_table(name, c, family, g, oracle, what));
      check_order_window(r, r.tables.back(), lo, hi, false);
    });
  }
  return r;
}

ExperimentResult run_e3(const ExperimentConfig& c) {
  ExperimentResult r{c.id, {}, {}, {}};
  const double probe_step = c.param("probe_spacing", 0.5);
  const auto g = coarse_grid(window_lo(c), window_hi(c), c.base, probe_step);
  std::vector<double> hs;
  const double h0 = c.param("h0", 0.05);
  for (int k = 0; k < c.levels; ++k) hs.push_back(h0 / std::pow(2.0, k));
  const double floor = c.tolerance("floor", 1e-8);
  const double rlo = c.tolerance("ratio_lo", 3.2), rhi = c.tolerance("ratio_hi", 4.8);
  guarded(r, "E3", [&] {
    const auto rows = phi_reference_error(c.f, c.g, c.n, c.base.dx, c.base.T, g.points, hs);
    ErrorTable t("E3");
    for (const auto& row : rows) t.add(c.base.dx, row.h_ode, row.max_error, row.l2_error);
    // A halving counts while the finer error is still above the quadrature
    // floor; below it the oracle's own error dominates.
    bool ok = true;
    int counted = 0;
    std::string detail;
    for (const auto& row : rows) {
      if (!row.ratio) continue;
      if (!(row.max_error > floor)) break;
      ++counted;
      ok = ok && *row.ratio >= rlo && *row.ratio <= rhi;
      detail += (detail.empty() ? "" : ", ") + fmt(*row.ratio);
    }
    r.tables.push_back(t);
    r.checks.push_back({"E3.ratio", ok && counted >= 2,
                        std::to_string(counted) + " ratios above the floor " + fmt(floor) + ": " + detail + " in [" +
                            fmt(rlo) + ", " + fmt(rhi) + "]"});
  });
  return r;
}

ExperimentResult run_e4(const ExperimentConfig& c) {
  ExperimentResult r{c.id, {}, {}, {}};
  const auto g = coarse_grid(window_lo(c), window_hi(c), c.base);
  const auto levels = time_levels(g, false);
  guarded(r, "E4", [&] {
    const SpectralSynthesizer synth(c.f, c.g, FrequencyQuadrature::for_data(c.f, c.g, c.n, c.base.T), c.base.T);
    const auto continuum = oracle_samples(synth, Flavor::Continuum, c.base, g, levels);
    ErrorTable t("E4");
    for (const auto& s : halving_family(c.base, c.levels)) {
      const LatticeSpec semi{c.n, s.dx, 0.0, c.base.T};
      const auto phi = oracle_samples(synth, Flavor::Semidiscrete, semi, g, levels);
      const auto e = compare_on_common_lattice(phi, continuum, g.lo, g.hi, -c.base.T, c.base.T);
      t.add(s.dx, s.dt, e.sup, e.l2);
    }
    r.tables.push_back(t);
    check_order_window(r, r.tables.back(), c.tolerance("order_min", 1.7), c.tolerance("order_max", 2.3), true);
  });
  return r;
}

namespace {

struct RunOutcome {
  bool blew_up = false;
  double time = 0.0;     // blowup time, or T
  double max_abs = 0.0;  // largest |v| seen (the blowup value if it blew up)
};

RunOutcome run_until_blowup(DiscreteProblem problem) {
  problem.allow_cfl_violation = true;
  RunOutcome out;
  out.time = problem.spec.T;
  try {
    LeapfrogSolver(problem).solve(Record::Window, [&](int p, const GridField& f) {
      out.max_abs = std::max(out.max_abs, f.max_abs(p));
    });
  } catch (const BlowupError& e) {
    out.blew_up = true;
    out.time = e.time();
    out.max_abs = std::max(out.max_abs, e.max_abs());
  }
  return out;
}

}  // namespace

ExperimentResult run_e5(const ExperimentConfig& c) {
  ExperimentResult r{c.id, {}, {}, {}};
  const int n = c.n;
  const double rootn = std::sqrt(static_cast<double>(n));
  const int cells = static_cast<int>(c.param("cells", 64));
  const double dx = 1.0 / cells;
  // Highest Dirichlet mode prod_k sin((cells - 1) pi x_k) on the unit box.
  Vec alpha{}, phase{}, ones{}, mid{};
  for (int k = 0; k < n; ++k) {
    ones[k] = 1.0;
    mid[k] = 0.5;
    alpha[k] = (cells - 1) * std::numbers::pi;
    phase[k] = 0.5 * std::numbers::pi;
  }
  const Domain unit_box = Domain::box(n, Vec{}, ones);
  const auto seed = DataFunction::separable_cosine(alpha, 1.0, phase);
  const auto zero = DataFunction::zero();

  guarded(r, "E5.unstable", [&] {
    const double dt = c.param("courant_factor", 1.05) * dx / rootn;
    const int steps = static_cast<int>(std::ceil(c.base.T / dt));
    const LatticeSpec spec{n, dx, dt, steps * dt};
    const double z = arcsin_argument(alpha, spec);
    const double g_top = symbol_G(alpha, std::pow(std::numbers::pi / dt, 2), spec);
    r.checks.push_back({"E5.seed_unstable", z > 1.0 && g_top > 0.0,
                        "arcsin argument " + fmt(z) + ", G(alpha, (pi/dt)^2) = " + fmt(g_top) + " > 0"});
    const auto out = run_until_blowup(DiscreteProblem::make(unit_box, spec, seed, zero, zero));
    r.checks.push_back({"E5.blowup", out.blew_up && out.time < spec.T && out.max_abs >= 1e3,
                        std::string(out.blew_up ? "blowup-detected" : "no blowup") + " at t = " + fmt(out.time) +
                            " of T = " + fmt(spec.T) + ", max|v| = " + fmt(out.max_abs)});
  });

  guarded(r, "E5.control", [&] {
    // closest admissible step to dx / sqrt(n) with an integral horizon
    const int steps = static_cast<int>(std::ceil(c.base.T * rootn / dx - 1e-9));
    const LatticeSpec spec{n, dx, c.base.T / steps, c.base.T};
    const auto out = run_until_blowup(DiscreteProblem::make(unit_box, spec, seed, zero, zero));
    double initial = 0.0;
    const auto cls = classify(unit_box, spec);
    for (std::size_t i : cls.support()) initial = std::max(initial, std::abs(seed(cls.position(i))));
    const double growth = c.tolerance("control_growth", 2.0);
    r.checks.push_back({"E5.control_bounded", !out.blew_up && out.max_abs <= growth * initial,
                        "dt/dx = " + fmt(spec.dt / dx) + ", max|v| = " + fmt(out.max_abs) + " vs initial " +
                            fmt(initial)});
  });

  // Reversed order: dt fixed, dx -> 0 leaves the admissible set and
  // diverges. The time-first order (dx fixed, dt -> 0) stays bounded.
  const auto smooth = DataFunction::gaussian(mid, 0.1);
  const double fixed_dt = c.param("fixed_dt", 0.05);
  guarded(r, "E5_reversed", [&] {
    ErrorTable t("E5_reversed");
    std::string flags;
    for (int k = 0; k < c.levels; ++k) {
      const LatticeSpec spec{n, 0.2 / std::pow(2.0, k), fixed_dt, c.base.T};
      const auto out = run_until_blowup(DiscreteProblem::make(unit_box, spec, smooth, zero, zero));
      t.add(spec.dx, spec.dt, out.max_abs, 0.0);
      flags += (flags.empty() ? "" : ", ") + fmt(spec.dt / spec.dx) + (out.blew_up ? ":blowup" : out.max_abs > 2.0 ? ":growing" : ":bounded");
    }
    const bool diverged = t.back().sup_error >= 1e3 && t.rows().front().sup_error <= 2.0;
    r.tables.push_back(t);
    r.checks.push_back({"E5.reversed_diverges", diverged, "dt/dx per level " + flags});
  });
  guarded(r, "E5_time_first", [&] {
    ErrorTable t("E5_time_first");
    const double fixed_dx = 0.05;
    double worst = 0.0;
    for (int k = 0; k < c.levels; ++k) {
      const int steps = static_cast<int>(std::ceil(c.base.T * rootn / fixed_dx - 1e-9)) << (k + 1);
      const LatticeSpec spec{n, fixed_dx, c.base.T / steps, c.base.T};
      const auto out = run_until_blowup(DiscreteProblem::make(unit_box, spec, smooth, zero, zero));
      t.add(spec.dx, spec.dt, out.max_abs, 0.0);
      worst = std::max(worst, out.blew_up ? 1e300 : out.max_abs);
    }
    r.tables.push_back(t);
    r.checks.push_back({"E5.time_first_bounded", worst <= 2.0, "max|v| over the dt-halving family " + fmt(worst)});
  });
  r.notes.push_back("E5 tables list max|v| over the run in the sup_error column");
  return r;
}

ExperimentResult run_e6(const ExperimentConfig& c) {
  require_full_space(c);
  ExperimentResult r{c.id, {}, {}, {}};
  const int n = c.n;
  const auto zero = DataFunction::zero();
  const double T = c.base.T;
  const double tol_single = c.tolerance("single_frequency", 1e-6);

  // Constant-in-time forcing cos(alpha . x): u = (1 - cos|alpha|t)/|alpha|^2 cos(alpha . x).
  Vec alpha{};
  for (int k = 0; k < n; ++k) alpha[k] = c.param("alpha", 2.0) / (k + 1);
  const auto wave = DataFunction::plane_wave(alpha);
  const auto w1 = Forcing::separable(wave, TimeProfile{}, n);
  const auto g = coarse_grid(window_lo(c), window_hi(c), c.base, 0.5);
  guarded(r, "E6.single_frequency", [&] {
    const auto quad = FrequencyQuadrature::for_data(zero, zero, n, T);
    const double a2 = norm2(alpha, n);
    double worst = 0.0;
    for (const auto& x : g.points)
      for (double t : {0.25 * T, 0.5 * T, T}) {
        const double u = duhamel_solve(zero, zero, w1, Flavor::Continuum, c.base, x, t, quad,
                                       c.param("oracle_s_step", 0.01));
        worst = std::max(worst, std::abs(u - (1.0 - std::cos(std::sqrt(a2) * t)) / a2 * wave(x)));
      }
    r.checks.push_back({"E6.single_frequency", worst <= tol_single,
                        "duhamel vs closed form " + fmt(worst) + " <= " + fmt(tol_single)});
  });
  guarded(r, "E6.single_frequency_leapfrog", [&] {
    // v = cos(alpha . x)(1 - cos(beta t))/beta0^2 exactly on the lattice.
    const auto problem = DiscreteProblem::make(c.domain, c.base, zero, zero, {}, w1);
    const double b = beta(alpha, c.base), b0 = beta_semidiscrete(alpha, c.base.dx, n);
    double worst = 0.0;
    std::vector<std::size_t> idx;
    for (const auto& x : g.points) idx.push_back(*problem.classification->find(x));
    LeapfrogSolver(problem).solve(Record::Window, [&](int p, const GridField& f) {
      const double t = f.time(p);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const double exact = (1.0 - std::cos(b * t)) / (b0 * b0) * wave(g.points[i]);
        worst = std::max(worst, std::abs(f.value(p, idx[i]) - exact));
      }
    });
    r.checks.push_back({"E6.single_frequency_leapfrog", worst <= tol_single,
                        "leapfrog vs lattice closed form " + fmt(worst) + " <= " + fmt(tol_single)});
  });

  // Manufactured solution U = f(x) cos(omega t).
  guarded(r, "E6_manufactured", [&] {
    require(c.w.kind() == Forcing::Kind::ManufacturedCosine, ErrorKind::Config,
            "E6 needs a manufactured_cosine forcing in [w]");
    const double omega = c.w.omega();
    const auto& U0 = c.w.spatial();
    const double factor = c.tolerance("manufactured_factor", 5.0);
    ErrorTable t("E6_manufactured");
    bool ok = true;
    std::string detail;
    const auto family = halving_family(c.base, c.levels);
    const auto fine = coarse_grid(window_lo(c), window_hi(c), c.base);
    for (const auto& spec : family) {
      const auto problem = DiscreteProblem::make(c.domain, spec, U0, zero, {}, c.w);
      std::vector<std::size_t> idx;
      for (const auto& x : fine.points) idx.push_back(*problem.classification->find(x));
      double sup = 0.0, sum = 0.0, scale = 0.0;
      LeapfrogSolver(problem).solve(Record::Window, [&](int p, const GridField& f) {
        const double ct = std::cos(omega * f.time(p));
        for (std::size_t i = 0; i < idx.size(); ++i) {
          const double exact = U0(fine.points[i]) * ct;
          const double e = std::abs(f.value(p, idx[i]) - exact);
          scale = std::max(scale, std::abs(exact));
          sup = std::max(sup, e);
          if (p % static_cast<int>(std::llround(fine.dt / spec.dt)) == 0) sum += e * e;
        }
      });
      t.add(spec.dx, spec.dt, sup, std::sqrt(sum * std::pow(fine.dx, n) * fine.dt));
      const double bound = factor * (spec.dx * spec.dx + spec.dt * spec.dt) * scale;
      ok = ok && sup <= bound;
      detail += (detail.empty() ? "" : "; ") + fmt(sup) + " <= " + fmt(bound);
    }
    r.tables.push_back(t);
    r.checks.push_back({"E6.manufactured", ok, detail});

    // Same forced problem through the fully discrete Duhamel formula at t = T.
    const auto quad = FrequencyQuadrature::for_data(U0, zero, n, T);
    const auto problem = DiscreteProblem::make(c.domain, c.base, U0, zero, {}, c.w);
    const auto field = LeapfrogSolver(problem).solve(Record::Window);
    const int N = c.base.time_steps();
    double worst = 0.0;
    for (const auto& x : g.points) {
      const double d = duhamel_solve(U0, zero, c.w, Flavor::FullyDiscrete, c.base, x, T, quad, c.base.dt);
      worst = std::max(worst, std::abs(d - field.value(N, *problem.classification->find(x))));
    }
    const double bound = factor * (c.base.dx * c.base.dx + c.base.dt * c.base.dt);
    r.checks.push_back({"E6.duhamel_vs_leapfrog", worst <= bound,
                        "fully discrete Duhamel (Simpson in s) vs leapfrog at t = T: " + fmt(worst)});
  });
  return r;
}

ExperimentResult run_e7(const ExperimentConfig& c) {
  ExperimentResult r{c.id, {}, {}, {}};
  const int n = c.n;
  const double res_tol = c.tolerance("residual", 1e-9);

  // Linear boundary data on a segment: the harmonic extension is exact.
  guarded(r, "E7.linear_exactness", [&] {
    const LatticeSpec spec{1, c.base.dx, c.base.dt, c.base.T};
    const auto h = DataFunction::affine({2.0, 0, 0}, 0.5);
    const auto cls = std::make_shared<const LatticeClassification>(classify(Domain::box(1, Vec{}, Vec{1.0}), spec));
    const auto sol = assemble_and_solve({cls, DataFunction::zero(), DataFunction::zero(), h});
    double worst = 0.0;
    for (std::size_t i : cls->support()) worst = std::max(worst, std::abs(sol.v[i] - h(cls->position(i))));
    const double tol = c.tolerance("linear_exactness", 1e-12);
    r.checks.push_back({"E7.linear_exactness", worst <= tol, "max|v - h| = " + fmt(worst) + " <= " + fmt(tol)});
  });

  // Probes: a 0.2-spaced grid offset by 0.1 inside the unit box, t in {T/2, T}.
  Vec plo{}, phi_{};
  for (int k = 0; k < n; ++k) {
    plo[k] = 0.1;
    phi_[k] = 0.9;
  }
  const LatticeSpec probe_spec{n, 0.1, 0.5 * c.base.T, c.base.T};
  std::vector<Vec> probes;
  std::vector<MultiIndex> probe_index;
  const auto grid = coarse_grid(plo, phi_, probe_spec);
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    bool odd = true;
    for (int k = 0; k < n; ++k) odd = odd && (grid.index[i][k] % 2 != 0);
    if (!odd) continue;
    probes.push_back(grid.points[i]);
    probe_index.push_back(grid.index[i]);
  }

  const auto family = halving_family(c.base, c.levels);
  std::vector<SpaceTimeSamples> split(family.size(), SpaceTimeSamples(n, 0.1, probe_spec.dt));
  std::vector<SpaceTimeSamples> direct = split;
  std::vector<double> residual(family.size()), scale(family.size());
  std::vector<std::string> methods(family.size());
  guarded(r, "E7_split", [&] {
    parallel_for(family.size(), [&](std::size_t k) {
      const auto& spec = family[k];
      const auto sp = split_pipeline(c.domain, spec, c.f, c.g, c.h, c.b, c.sigma, c.w);
      residual[k] = sp.elliptic.residual;
      scale[k] = sp.elliptic.scale;
      methods[k] = sp.elliptic.method;
      const auto& cls = *sp.shifted.classification;
      const int m = static_cast<int>(std::llround(probe_spec.dt / spec.dt));
      std::vector<std::size_t> idx;
      for (const auto& x : probes) idx.push_back(*cls.find(x));
      LeapfrogSolver(sp.shifted).solve(Record::Window, [&](int p, const GridField& f) {
        if (p < 0 || p % m != 0) return;
        const auto u = sp.reconstruct(f.level(p));
        for (std::size_t i = 0; i < idx.size(); ++i) split[k].set(probe_index[i], p / m, u[idx[i]]);
      });
      // Theorem-c route: a = 1 + b and sigma inside the lattice ODE, h on the boundary.
      std::vector<double> hb;
      for (std::size_t i : cls.boundary) hb.push_back(c.h(cls.position(i)));
      LagrangeSystem system(sp.shifted.classification, hb);
      system.set_coefficients(c.b, c.sigma);
      system.set_forcing(c.w);
      integrate(system, system.initial_state(c.f, c.g), 0.0, c.base.T, OdeMethod::StormerVerlet, spec.dt,
                [&](int step, double, const OdeState& s) {
                  if (step % m != 0) return;
                  for (std::size_t i = 0; i < idx.size(); ++i) direct[k].set(probe_index[i], step / m, s.xi[idx[i]]);
                });
    });
    bool res_ok = true;
    std::string res_detail;
    for (std::size_t k = 0; k < family.size(); ++k) {
      res_ok = res_ok && residual[k] <= res_tol * scale[k];
      res_detail += (res_detail.empty() ? "" : ", ") + fmt(residual[k] / std::max(scale[k], 1e-300)) + " (" + methods[k] + ")";
    }
    r.checks.push_back({"E7.residual", res_ok, "residual/scale per lattice " + res_detail + " <= " + fmt(res_tol)});

    ErrorTable self("E7_split"), cross("E7_direct");
    for (std::size_t k = 0; k + 1 < family.size(); ++k) {
      const auto e = compare_on_common_lattice(split[k], split[k + 1], plo, phi_, 0.0, c.base.T);
      self.add(family[k].dx, family[k].dt, e.sup, e.l2);
    }
    for (std::size_t k = 0; k < family.size(); ++k) {
      const auto e = compare_on_common_lattice(split[k], direct[k], plo, phi_, 0.0, c.base.T);
      cross.add(family[k].dx, family[k].dt, e.sup, e.l2);
    }
    const double omin = c.tolerance("order_min", 1.0);
    bool ok = self.size() >= 2;
    std::string detail;
    for (std::size_t k = 1; k < self.size(); ++k) {
      const auto& o = self.rows()[k].observed_order;
      ok = ok && o && *o >= omin;
      detail += (detail.empty() ? "" : ", ") + fmt_order(o);
    }
    r.checks.push_back({"E7.self_convergence", ok, "orders " + detail + " >= " + fmt(omin)});
    r.notes.push_back("E7_split rows compare lattice k with lattice k+1 at the probes");
    r.notes.push_back("with sigma > 0 the shifted datum f - v has a second-derivative corner at the wall "
                      "(v'' = (sigma/b) h there), so orders between 1.5 and 2 are expected");
    r.notes.push_back("E7_direct rows compare the split reconstruction with the variable-coefficient lattice ODE; the "
                      "split route evolves the constant-coefficient wave equation, so these differences need not vanish");
    r.tables.push_back(self);
    r.tables.push_back(cross);
  });
  return r;
}

ExperimentResult run_e8(const ExperimentConfig& c) {
  ExperimentResult r{c.id, {}, {}, {}};
  const auto samples = static_cast<std::size_t>(c.param("samples", 10000));
  const auto chain_samples = static_cast<std::size_t>(c.param("chain_samples", 100));
  const double bound_tol = c.tolerance("bound", 1e-12);
  const double omin = c.tolerance("order_min", 1.9);

  const auto bound = audit_propagator_bound(samples, c.seed, bound_tol);
  r.checks.push_back({"E8.bound", bound.violations == 0,
                      std::to_string(bound.violations) + " of " + std::to_string(bound.samples) +
                          " samples exceed T; largest (value - T)/T = " + fmt(bound.worst)});
  const auto roots = audit_dispersion_roots(samples, c.seed + 1);
  r.checks.push_back({"E8.dispersion_roots", roots.violations == 0,
                      "max |G|/(1+|alpha|^2) = " + fmt(roots.worst) + " over " + std::to_string(roots.samples)});
  const auto chain = propagator_chain(chain_samples, c.seed + 2);
  r.checks.push_back({"E8.chain", chain.min_order_dt >= omin && chain.min_order_dx >= omin,
                      "min order dt " + fmt(chain.min_order_dt) + ", dx " + fmt(chain.min_order_dx) + " (mean " +
                          fmt(chain.mean_order_dt) + ", " + fmt(chain.mean_order_dx) + "), skipped " +
                          std::to_string(chain.skipped)});

  // One representative chain written out level by level.
  Vec alpha{1.7, 0, 0};
  const double t = 1.3, dx = 0.05;
  ErrorTable tdt("E8_chain_dt"), tdx("E8_chain_dx");
  auto gap = [](const PropagatorMatrix& a, const PropagatorMatrix& b) {
    double m = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
  };
  for (int k = 0; k < 5; ++k) {
    const LatticeSpec s{1, dx, 0.01 * dx / std::pow(2.0, k), t};
    const double e = gap(propagator(Flavor::FullyDiscrete, alpha, t, s), propagator(Flavor::Semidiscrete, alpha, t, s));
    tdt.add(s.dx, s.dt, e, e);
    const LatticeSpec q{1, dx / std::pow(2.0, k), 0.0, t};
    const double f = gap(propagator(Flavor::Semidiscrete, alpha, t, q), propagator(Flavor::Continuum, alpha, t, q));
    tdx.add(q.dx, 0.0, f, f);
  }
  r.tables.push_back(tdt);
  r.tables.push_back(tdx);
  r.notes.push_back("seed " + std::to_string(c.seed));
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const std::string& id = config.id;
  ExperimentResult r;
  if (id == "E1") r = run_e1(config);
  else if (id == "E2") r = run_e2(config);
  else if (id == "E3") r = run_e3(config);
  else if (id == "E4") r = run_e4(config);
  else if (id == "E5") r = run_e5(config);
  else if (id == "E6") r = run_e6(config);
  else if (id == "E7") r = run_e7(config);
  else if (id == "E8") r = run_e8(config);
  else throw Error(ErrorKind::Config, "unknown experiment '" + id + "'");
  r.id = id;
  return r;
}

}  // namespace latwave
