#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "latwave/dispersion.hpp"
#include "latwave/error.hpp"
#include "latwave/leapfrog.hpp"
#include "latwave/spectral.hpp"
#include "latwave/stencils.hpp"

using namespace latwave;

namespace {

const DataFunction kZero = DataFunction::zero();

DiscreteProblem free_space(int n, double dx, double dt, double T, double half_width, DataFunction f, DataFunction g,
                           Forcing w = {}) {
  const LatticeSpec spec{n, dx, dt, T};
  Vec lo{}, hi{};
  for (int k = 0; k < n; ++k) {
    lo[k] = -half_width;
    hi[k] = half_width;
  }
  return DiscreteProblem::make(Domain::full_space(n, lo, hi), spec, std::move(f), std::move(g), {}, std::move(w));
}

DiscreteProblem unit_box(int n, double dx, double dt, double T, DataFunction f, DataFunction g) {
  const LatticeSpec spec{n, dx, dt, T};
  Vec hi{};
  for (int k = 0; k < n; ++k) hi[k] = 1.0;
  return DiscreteProblem::make(Domain::box(n, {}, hi), spec, std::move(f), std::move(g));
}

}  // namespace

TEST_CASE("bootstrap on trivial data") {
  {
    const LeapfrogSolver s(free_space(2, 0.1, 0.05, 0.5, 0.5, DataFunction::constant(3.0), kZero));
    const auto field = s.bootstrap();
    const auto& c = field.classification();
    for (int p : {-1, 0, 1})
      for (std::size_t i : c.interior) REQUIRE(field.value(p, i) == 3.0);
  }
  {
    const LeapfrogSolver s(free_space(2, 0.1, 0.05, 0.5, 0.5, kZero, DataFunction::constant(1.0)));
    const auto field = s.bootstrap();
    for (std::size_t i : field.classification().window_indices()) {
      REQUIRE(field.value(1, i) == 0.05);
      REQUIRE(field.value(-1, i) == -0.05);
    }
  }
}

TEST_CASE("bootstrap of a plane wave is the exact first level") {
  const Vec alpha{1.0, 0, 0};
  const LeapfrogSolver s(free_space(1, 0.2, 0.1, 1.0, 1.0, DataFunction::plane_wave(alpha), kZero));
  const auto field = s.bootstrap();
  const double b = beta(alpha, {1, 0.2, 0.1, 1.0});
  const auto& c = field.classification();
  for (std::size_t i : c.window_indices()) {
    const double x = c.position(i)[0];
    CHECK(field.value(1, i) == doctest::Approx(std::cos(x) * std::cos(b * 0.1)).epsilon(1e-14));
    CHECK(field.value(-1, i) == field.value(1, i));
  }
}

TEST_CASE("step keeps constants and honours the unit Courant identity") {
  {
    const LeapfrogSolver s(unit_box(2, 0.1, 0.05, 0.5, DataFunction::constant(0.0), kZero));
    auto field = s.bootstrap();
    s.step(field, Direction::Forward);
    for (std::size_t i = 0; i < field.point_count(); ++i) REQUIRE(field.value(2, i) == 0.0);
  }
  {
    auto p = free_space(1, 0.1, 0.1, 1.0, 0.5, DataFunction::constant(2.5), kZero);
    const LeapfrogSolver s(p);
    auto field = s.bootstrap();
    s.step(field, Direction::Forward, true);
    s.step(field, Direction::Backward, true);
    for (std::size_t i : field.classification().interior) {
      REQUIRE(field.value(2, i) == 2.5);
      REQUIRE(field.value(-2, i) == 2.5);
    }
  }
  // random levels at dt = dx: v(t+dt) = v(x+dx) + v(x-dx) - v(t-dt)
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const LeapfrogSolver s(unit_box(1, 0.05, 0.05, 1.0, kZero, kZero));
  GridField field(s.problem().spec, s.problem().classification);
  auto a = field.add_level(0);
  auto b = field.add_level(1);
  const auto& c = field.classification();
  for (std::size_t i : c.interior) {
    a[i] = u(rng);
    b[i] = u(rng);
  }
  s.step(field, Direction::Forward, true);
  for (std::size_t i : c.interior) {
    if (!has_all_neighbors(c, i)) continue;
    const double expect = field.value(1, i + 1) + field.value(1, i - 1) - field.value(0, i);
    CHECK(field.value(2, i) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("gaussian data against the discrete closed form in 2-D") {
  const auto f = DataFunction::gaussian({0.1, -0.05, 0}, 0.4);
  const double dx = 0.1, dt = 0.05;
  const int steps = 20;
  const double T = steps * dt;
  const LeapfrogSolver s(free_space(2, dx, dt, T, 0.6, f, kZero));
  const auto field = s.solve(Record::Window);
  const auto& c = field.classification();

  const auto quad = FrequencyQuadrature::for_data(f, kZero, 2, T);
  const SpectralSynthesizer oracle(f, kZero, quad, T);
  std::vector<std::vector<double>> axes(2);
  for (int k = -6; k <= 6; ++k) {
    axes[0].push_back(k * dx);
    axes[1].push_back(k * dx);
  }
  const LatticeSpec spec{2, dx, dt, T};
  for (int p : {steps, -steps}) {
    const auto ref = oracle.on_grid(Flavor::FullyDiscrete, spec, axes, p * dt);
    double worst = 0.0;
    for (std::size_t a = 0; a < axes[0].size(); ++a)
      for (std::size_t b = 0; b < axes[1].size(); ++b) {
        const auto idx = c.find({axes[0][a], axes[1][b], 0});
        REQUIRE(idx.has_value());
        worst = std::max(worst, std::abs(field.value(p, *idx) - ref[a * axes[1].size() + b]));
      }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("solve: zero data, time symmetry and determinism") {
  {
    const LeapfrogSolver s(unit_box(2, 0.1, 0.05, 0.5, kZero, kZero));
    const auto field = s.solve(Record::Full);
    for (int p : field.level_indices())
      for (double v : field.level(p)) REQUIRE(v == 0.0);
    CHECK(field.level_count() == 21u);
  }
  const auto f = DataFunction::smooth_bump({0.45, 0.5, 0}, 0.3);
  const LeapfrogSolver s(unit_box(2, 0.05, 0.025, 1.0, f, kZero));
  const auto a = s.solve(Record::Full);
  const auto b = s.solve(Record::Full);
  for (int p = 1; p <= 40; ++p)
    for (std::size_t i = 0; i < a.point_count(); ++i) {
      REQUIRE(a.value(p, i) == a.value(-p, i));
      REQUIRE(a.value(p, i) == b.value(p, i));
    }
  const auto w = s.solve(Record::Window);
  CHECK(w.level_indices() == std::vector<int>{-40, -39, -38, 0, 38, 39, 40});
  for (int p : w.level_indices())
    for (std::size_t i = 0; i < a.point_count(); ++i) REQUIRE(w.value(p, i) == a.value(p, i));
}

TEST_CASE("observer sees every level once") {
  const LeapfrogSolver s(unit_box(1, 0.1, 0.05, 0.5, DataFunction::smooth_bump({0.5, 0, 0}, 0.2), kZero));
  std::vector<int> seen;
  s.solve(Record::Window, [&](int p, const GridField& field) {
    REQUIRE(field.has_level(p));
    seen.push_back(p);
  });
  std::sort(seen.begin(), seen.end());
  std::vector<int> all;
  for (int p = -10; p <= 10; ++p) all.push_back(p);
  CHECK(seen == all);
}

TEST_CASE("scheme residual equals the forcing") {
  const auto G = DataFunction::gaussian({0, 0, 0}, 0.3);
  const auto w = Forcing::manufactured_cosine(G, 2.0, 2);
  const LeapfrogSolver s(free_space(2, 0.1, 0.05, 0.5, 0.5, G, kZero, w));
  const auto field = s.solve(Record::Full);
  const auto& c = field.classification();
  double scale = 0.0;
  for (std::size_t i : c.window_indices()) scale = std::max(scale, std::abs(w.value(c.position(i), 0.0)));
  for (int p = -9; p <= 9; ++p)
    for (std::size_t i : c.window_indices())
      REQUIRE(std::abs(discrete_dalembert(field, i, p) - w.value(c.position(i), p * 0.05)) < 1e-10 * scale);
}

TEST_CASE("forced leapfrog against the Duhamel integral") {
  const auto G = DataFunction::gaussian({0.05, 0, 0}, 0.5);
  const auto w = Forcing::manufactured_cosine(G, 1.5, 1);
  const double dx = 0.002, dt = 0.001, T = 0.5;
  const LeapfrogSolver s(free_space(1, dx, dt, T, 1.0, G, kZero, w));
  const auto field = s.solve(Record::Window);
  const auto& c = field.classification();
  const LatticeSpec spec{1, dx, dt, T};
  const auto quad = FrequencyQuadrature::for_data(G, kZero, 1, T);
  const int N = spec.time_steps();
  int probes = 0;
  for (int j : {-400, -250, -100, -30, 0, 20, 90, 200, 310, 450}) {
    const int p = probes % 2 == 0 ? N : -N;
    const double x = j * dx;
    const double ref = duhamel_solve(G, kZero, w, Flavor::FullyDiscrete, spec, {x, 0, 0}, p * dt, quad, dt);
    CHECK(std::abs(field.value(p, *c.find({x, 0, 0})) - ref) < 1e-6);
    ++probes;
  }
}

TEST_CASE("discrete energy is conserved under strict CFL") {
  const auto f = DataFunction::smooth_bump({0.4, 0.55, 0}, 0.3);
  const auto g = DataFunction::gaussian({0.5, 0.5, 0}, 0.1, 0.5);
  const LeapfrogSolver s(unit_box(2, 0.04, 0.02, 1.0, f, g));
  const auto field = s.solve(Record::Full);
  const double e0 = discrete_energy(field, 0);
  CHECK(e0 > 0.0);
  for (int p = -50; p < 50; ++p) CHECK(std::abs(discrete_energy(field, p) - e0) < 1e-8 * e0);
}

TEST_CASE("finite domain of dependence") {
  // Perturb the starting levels outside |x| < R; values inside the shrinking
  // cone |x| + p dx < R stay bit-identical.
  const double dx = 0.05, dt = 0.025, R = 1.0;
  const LeapfrogSolver s(free_space(1, dx, dt, 0.5, 1.5, DataFunction::gaussian({0, 0, 0}, 0.3), kZero));
  GridField a = s.bootstrap();
  GridField b = s.bootstrap();
  const auto& c = a.classification();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int p : {0, 1})
    for (std::size_t i : c.interior)
      if (std::abs(c.position(i)[0]) >= R) b.level(p)[i] += u(rng);
  b.drop_level(-1);
  a.drop_level(-1);
  for (int step = 0; step < 19; ++step) {
    s.step(a, Direction::Forward, true);
    s.step(b, Direction::Forward, true);
  }
  int checked = 0;
  for (int p = 0; p <= 20; ++p)
    for (std::size_t i : c.interior)
      if (std::abs(c.position(i)[0]) + p * dx < R - 1e-9) {
        REQUIRE(a.value(p, i) == b.value(p, i));
        ++checked;
      }
  CHECK(checked > 100);
  // and the perturbation does reach the cone's edge
  CHECK(a.value(20, *c.find({R - 20 * dx + dx, 0, 0})) != b.value(20, *c.find({R - 20 * dx + dx, 0, 0})));
}

TEST_CASE("blowup is detected past the CFL limit") {
  auto p = unit_box(1, 0.05, 0.0525, 2.1, DataFunction::separable_cosine({3.14159265358979 * 19, 0, 0}, 1.0,
                                                                      {1.5707963267948966, 0, 0}),
                    kZero);
  CHECK_THROWS_WITH_AS(LeapfrogSolver{p}, doctest::Contains("cfl-violated"), Error);
  p.allow_cfl_violation = true;
  p.spec.T = 0.0525 * 4000;
  const LeapfrogSolver s(p);
  bool caught = false;
  try {
    s.solve(Record::Window);
  } catch (const BlowupError& e) {
    caught = true;
    CHECK(e.max_abs() > 1e12);
    CHECK(e.level() != 0);
  }
  CHECK(caught);
}

TEST_CASE("variable coefficients are refused") {
  auto p = unit_box(1, 0.1, 0.05, 0.5, kZero, kZero);
  p.b = DataFunction::constant(0.0);
  CHECK_NOTHROW(LeapfrogSolver{p});
  p.b = DataFunction::gaussian({0.5, 0, 0}, 0.2, 0.1);
  CHECK_THROWS_AS(LeapfrogSolver{p}, Error);
}

TEST_CASE("level dump round trip") {
  const auto f = DataFunction::smooth_bump({0.5, 0.5, 0}, 0.35);
  const LeapfrogSolver s(unit_box(2, 0.1, 0.05, 0.5, f, kZero));
  const auto field = s.solve(Record::Window);
  std::stringstream buf;
  write_level_dump(buf, field, 10);
  CHECK(buf.str().size() == 4 + 8 + 8 + 8 + 8 + 8 * field.classification().support().size());
  const auto d = read_level_dump(buf);
  CHECK(d.n == 2);
  CHECK(d.dx == 0.1);
  CHECK(d.dt == 0.05);
  CHECK(d.level == 10);
  const auto support = field.classification().support();
  REQUIRE(d.values.size() == support.size());
  for (std::size_t k = 0; k < support.size(); ++k) CHECK(d.values[k] == field.value(10, support[k]));
  std::stringstream truncated(buf.str().substr(0, 20));
  CHECK_THROWS_AS(read_level_dump(truncated), Error);
}
