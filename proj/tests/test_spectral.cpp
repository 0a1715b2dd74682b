#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "latwave/dispersion.hpp"
#include "latwave/error.hpp"
#include "latwave/spectral.hpp"

using namespace latwave;

namespace {

LatticeSpec lattice(int n, double dx, double dt, double T = 1.0) { return {n, dx, dt, T}; }

const DataFunction kZero = DataFunction::zero();

}  // namespace

TEST_CASE("continuum solution on single frequencies") {
  const auto quad = FrequencyQuadrature(2, 10.0, 9);
  const auto f = DataFunction::separable_cosine({1, 1, 0});
  CHECK(continuum_solution_u(f, kZero, {0, 0, 0}, 0.5, quad) ==
        doctest::Approx(0.7602445970756301).epsilon(1e-14));

  // f = cos x cos y: cos(x+y) and cos(x-y) both have |alpha| = sqrt 2
  const Vec x{0.3, -0.7, 0};
  const double t = 0.8;
  const double a = std::sqrt(2.0);
  CHECK(continuum_solution_u(f, kZero, x, t, quad) ==
        doctest::Approx(std::cos(0.3) * std::cos(-0.7) * std::cos(a * t)).epsilon(1e-13));
  CHECK(continuum_solution_u(kZero, f, x, t, quad) ==
        doctest::Approx(std::cos(0.3) * std::cos(-0.7) * std::sin(a * t) / a).epsilon(1e-13));
}

TEST_CASE("continuum solution at t = 0 reproduces the data") {
  const auto f = DataFunction::gaussian({0, 0, 0}, 1.0);
  const auto quad = FrequencyQuadrature::for_data(f, kZero, 1, 1.0);
  for (double x : {-2.0, -0.5, 0.0, 0.7, 1.9})
    CHECK(continuum_solution_u(f, kZero, {x, 0, 0}, 0.0, quad) == doctest::Approx(f({x, 0, 0})).epsilon(1e-10));
}

TEST_CASE("continuum gaussian against d'Alembert") {
  // 1-D: u = (f(x+t) + f(x-t))/2 for g = 0
  const auto f = DataFunction::gaussian({0.2, 0, 0}, 0.6);
  const auto quad = FrequencyQuadrature::for_data(f, kZero, 1, 2.0);
  for (double t : {0.3, 1.1, 2.0})
    for (double x : {-1.0, 0.0, 0.45}) {
      const double exact = 0.5 * (f({x + t, 0, 0}) + f({x - t, 0, 0}));
      CHECK(continuum_solution_u(f, kZero, {x, 0, 0}, t, quad) == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("discrete closed form on single frequencies") {
  const auto spec = lattice(2, 0.2, 0.1);
  const auto quad = FrequencyQuadrature(2, 10.0, 5);
  const Vec alpha{1.3, -0.4, 0};
  const auto f = DataFunction::plane_wave(alpha);
  const double b = beta(alpha, spec);
  for (int p : {0, 1, 3, 10}) {
    const Vec x{0.4, -0.6, 0};
    const double t = p * spec.dt;
    CHECK(discrete_closed_form_v(f, kZero, spec, x, t, quad) ==
          doctest::Approx(std::cos(dot(alpha, x, 2)) * std::cos(b * t)).epsilon(1e-13));
    // g-only: coefficient dt/sin(beta dt) times sin(beta t)
    const double c = spec.dt / std::sin(b * spec.dt);
    CHECK(discrete_closed_form_v(kZero, f, spec, x, t, quad) ==
          doctest::Approx(std::cos(dot(alpha, x, 2)) * c * std::sin(b * t)).epsilon(1e-12));
  }
  // one step of a g-only problem moves by exactly dt g
  CHECK(discrete_closed_form_v(kZero, f, spec, {0, 0, 0}, spec.dt, quad) == doctest::Approx(spec.dt).epsilon(1e-14));
}

TEST_CASE("discrete closed form agrees with direct stepping") {
  // Independent recurrence on a long 1-D array; four steps only see +-4 cells.
  const double dx = 0.1, dt = 0.05;
  const auto f = DataFunction::gaussian({0.05, 0, 0}, 0.5);
  const int half = 80;
  std::vector<double> prev(2 * half + 1), cur(2 * half + 1), next(2 * half + 1);
  for (int j = -half; j <= half; ++j) prev[j + half] = f({j * dx, 0, 0});
  const double r = dt * dt / (dx * dx);
  for (int j = 1; j < 2 * half; ++j) cur[j] = prev[j] + 0.5 * r * (prev[j + 1] - 2 * prev[j] + prev[j - 1]);
  for (int step = 1; step < 4; ++step) {
    for (int j = 1; j < 2 * half; ++j) next[j] = 2 * cur[j] - prev[j] + r * (cur[j + 1] - 2 * cur[j] + cur[j - 1]);
    prev.swap(cur);
    cur.swap(next);
  }
  const auto spec = lattice(1, dx, dt);
  const auto quad = FrequencyQuadrature::for_data(f, kZero, 1, 1.0);
  CHECK(std::abs(discrete_closed_form_v(f, kZero, spec, {0, 0, 0}, 4 * dt, quad) - cur[half]) < 1e-8);
}

TEST_CASE("semidiscrete closed form") {
  const Vec alpha{2.0, 0, 0};
  const auto f = DataFunction::plane_wave(alpha);
  const auto quad = FrequencyQuadrature(1, 10.0, 5);
  const double b0 = beta_semidiscrete(alpha, 0.5, 1);
  CHECK(semidiscrete_closed_form_phi(f, kZero, 0.5, {1.5, 0, 0}, 0.37, quad) ==
        doctest::Approx(std::cos(3.0) * std::cos(b0 * 0.37)).epsilon(1e-13));

  const auto g = DataFunction::gaussian({0, 0, 0}, 0.7);
  const auto gq = FrequencyQuadrature::for_data(g, g, 1, 1.0);
  CHECK(semidiscrete_closed_form_phi(g, g, 0.1, {0.3, 0, 0}, 0.0, gq) ==
        doctest::Approx(g({0.3, 0, 0})).epsilon(1e-10));

  // second order in dx towards the continuum solution
  const Vec x{0.4, 0, 0};
  const double t = 0.9;
  const double u = continuum_solution_u(g, g, x, t, gq);
  double prev = std::abs(semidiscrete_closed_form_phi(g, g, 0.4, x, t, gq) - u);
  for (double dx : {0.2, 0.1, 0.05}) {
    const double err = std::abs(semidiscrete_closed_form_phi(g, g, dx, x, t, gq) - u);
    CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("propagator identities") {
  const auto spec = lattice(2, 0.2, 0.1);
  const Vec alpha{1.1, -2.3, 0};
  for (Flavor flavor : {Flavor::Continuum, Flavor::FullyDiscrete, Flavor::Semidiscrete}) {
    const auto p0 = propagator(flavor, alpha, 0.0, spec);
    CHECK(p0(0, 0) == 1.0);
    CHECK(p0(0, 1) == 0.0);
  }
  const auto c0 = propagator(Flavor::Continuum, alpha, 0.0, spec);
  CHECK(c0(1, 0) == 0.0);
  CHECK(c0(1, 1) == 1.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(-8.0, 8.0), ut(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Vec a{ua(rng), ua(rng), 0};
    const double t = ut(rng);
    CHECK(propagator(Flavor::Continuum, a, t, spec).determinant() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("propagator lower row is the t-derivative of the upper row") {
  const auto spec = lattice(2, 0.25, 0.15);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(-6.0, 6.0), ut(-1.0, 1.0);
  const double h = 1e-4;
  for (int i = 0; i < 300; ++i) {
    const Vec a{ua(rng), ua(rng), 0};
    const double t = ut(rng);
    for (Flavor flavor : {Flavor::Continuum, Flavor::FullyDiscrete, Flavor::Semidiscrete}) {
      const auto p = propagator(flavor, a, t, spec);
      const auto pp = propagator(flavor, a, t + h, spec);
      const auto pm = propagator(flavor, a, t - h, spec);
      for (int col = 0; col < 2; ++col) {
        const double fd = (pp(0, col) - pm(0, col)) / (2 * h);
        CHECK(std::abs(fd - p(1, col)) < 1e-6 * std::max(1.0, std::abs(p(1, col))));
      }
    }
  }
}

TEST_CASE("propagator upper-left matches the discrete closed form") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(-10.0, 10.0);
  std::uniform_int_distribution<int> up(-20, 20);
  const auto spec = lattice(2, 0.2, 0.12);
  const auto quad = FrequencyQuadrature(2, 10.0, 3);
  for (int i = 0; i < 30; ++i) {
    const Vec a{ua(rng), ua(rng), 0};
    const int p = up(rng);
    const double t = p * spec.dt;
    const double v = discrete_closed_form_v(DataFunction::plane_wave(a), kZero, spec, {0, 0, 0}, t, quad);
    CHECK(propagator(Flavor::FullyDiscrete, a, t, spec)(0, 0) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("g-coefficients are bounded by the horizon") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(-40.0, 40.0), udx(0.01, 0.5), uc(0.05, 1.0);
  std::uniform_int_distribution<int> udim(1, 3), uN(1, 40);
  for (int i = 0; i < 10000; ++i) {
    const int n = udim(rng);
    const double dx = udx(rng);
    const int N = uN(rng);
    const double dt = uc(rng) * dx / std::sqrt(static_cast<double>(n));
    const LatticeSpec spec{n, dx, dt, N * dt};
    const Vec a{ua(rng), ua(rng), ua(rng)};
    std::uniform_int_distribution<int> uk(-N, N);
    const double t = uk(rng) * dt;
    for (Flavor flavor : {Flavor::Continuum, Flavor::FullyDiscrete, Flavor::Semidiscrete})
      REQUIRE(std::abs(propagator(flavor, a, t, spec)(0, 1)) <= spec.T * (1 + 1e-12));
  }
}

TEST_CASE("quadrature tail bound") {
  // radial oracle by trapezoid on [M, M + 20]
  auto radial = [](int n, double c, double M) {
    const int steps = 200000;
    const double h = 20.0 / steps;
    const double area = n == 1 ? 2.0 : n == 2 ? 2 * std::numbers::pi : 4 * std::numbers::pi;
    double s = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double r = M + i * h;
      const double v = std::pow(r, n - 1) * std::exp(-c * r * r);
      s += (i == 0 || i == steps) ? 0.5 * v : v;
    }
    return area * s * h;
  };
  for (int n = 1; n <= 3; ++n)
    for (double M : {0.0, 1.0, 3.5})
      CHECK(gaussian_tail_integral(n, 0.7, M) == doctest::Approx(radial(n, 0.7, M)).epsilon(1e-8));

  const auto f = DataFunction::gaussian({0, 0, 0}, 0.5);
  const auto g = DataFunction::modulated_gaussian({0.1, 0, 0}, 0.4, {2, 1, 0});
  for (int n = 1; n <= 2; ++n) {
    const auto quad = FrequencyQuadrature::for_data(f, g, n, 1.0);
    CHECK(*quad.tail_bound(f, g, 1.0) <= 1e-10 * 4.0 * (1 + 1e-9));
    CHECK(*FrequencyQuadrature(n, 0.95 * quad.cutoff(), 5).tail_bound(f, g, 1.0) > 4e-10);
  }
  // A short cutoff is refused.
  CHECK_THROWS_WITH_AS(SpectralSynthesizer(f, g, FrequencyQuadrature(1, 3.0, 33), 1.0),
                       doctest::Contains("tail-too-large"), Error);
  // No gaussian bound for a bump.
  const auto bump = DataFunction::smooth_bump({0, 0, 0}, 1.0);
  CHECK_FALSE(FrequencyQuadrature(1, 10.0, 5).tail_bound(bump, kZero, 1.0).has_value());
}

TEST_CASE("quadrature self-consistency under node doubling") {
  const auto f = DataFunction::gaussian({0, 0, 0}, 0.5);
  const auto g = DataFunction::gaussian({0.2, -0.1, 0}, 0.6, 0.5);
  const auto quad = FrequencyQuadrature::for_data(f, g, 2, 1.0, 65);
  const SpectralSynthesizer s(f, g, quad, 1.0);
  const auto spec = lattice(2, 0.1, 0.05);
  for (Flavor flavor : {Flavor::Continuum, Flavor::FullyDiscrete, Flavor::Semidiscrete})
    CHECK(s.self_consistency(flavor, spec, {0.3, 0.1, 0}, 1.0) < quad.tolerance());
}

TEST_CASE("separable contraction equals the direct sum") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 3, m = 4;
  const std::vector<int> rows{2, 3, 1};
  std::vector<std::complex<double>> tensor(m * m * m);
  for (auto& v : tensor) v = {u(rng), u(rng)};
  std::vector<std::vector<std::complex<double>>> factors(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < rows[k] * m; ++i) factors[k].push_back({u(rng), u(rng)});
  const auto r = separable_contract(tensor, n, m, factors, rows);
  REQUIRE(r.size() == 6u);
  for (int p0 = 0; p0 < 2; ++p0)
    for (int p1 = 0; p1 < 3; ++p1) {
      std::complex<double> s = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c)
            s += tensor[(a * m + b) * m + c] * factors[0][p0 * m + a] * factors[1][p1 * m + b] * factors[2][c];
      CHECK(std::abs(r[p0 * 3 + p1] - s) < 1e-13);
    }
}

TEST_CASE("node transforms") {
  const auto rule = gauss_legendre(7, -4.0, 4.0);
  const auto g = DataFunction::modulated_gaussian({0.3, -0.2, 0}, 0.8, {1.0, 0.5, 0});
  const auto hat = transform_on_nodes(g, 2, rule);
  CHECK(hat[3 * 7 + 5] == g.fourier({rule.nodes[3], rule.nodes[5], 0}, 2));

  const auto bump = DataFunction::smooth_bump({0.1, 0.2, 0}, 0.8);
  const auto bh = transform_on_nodes(bump, 2, rule);
  for (int idx : {0, 10, 24, 48}) {
    const Vec a{rule.nodes[idx / 7], rule.nodes[idx % 7], 0};
    CHECK(std::abs(bh[idx] - bump.fourier(a, 2)) < 1e-7);
  }
}

TEST_CASE("flavor degeneration") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ua(-3.0, 3.0);
  const double t = 0.7;
  for (int i = 0; i < 10; ++i) {
    const Vec a{ua(rng), ua(rng), 0};
    // dt -> 0 at fixed dx
    auto e_dt = [&](double dt) {
      const auto d = propagator(Flavor::FullyDiscrete, a, t, lattice(2, 0.2, dt));
      const auto s = propagator(Flavor::Semidiscrete, a, t, lattice(2, 0.2, 0.0));
      return std::abs(d(0, 0) - s(0, 0)) + std::abs(d(0, 1) - s(0, 1));
    };
    CHECK(std::log2(e_dt(0.02) / e_dt(0.01)) >= 1.9);
    auto e_dx = [&](double dx) {
      const auto s = propagator(Flavor::Semidiscrete, a, t, lattice(2, dx, 0.0));
      const auto c = propagator(Flavor::Continuum, a, t, lattice(2, 0.0, 0.0));
      return std::abs(s(0, 0) - c(0, 0)) + std::abs(s(0, 1) - c(0, 1));
    };
    CHECK(std::log2(e_dx(0.02) / e_dx(0.01)) >= 1.9);
  }
}

TEST_CASE("duhamel") {
  const auto quad = FrequencyQuadrature(1, 10.0, 5);
  const auto w = Forcing::separable(DataFunction::plane_wave({2, 0, 0}), {}, 1);
  CHECK(duhamel_solve(kZero, kZero, w, Flavor::Continuum, lattice(1, 0, 0), {0, 0, 0}, 1.0, quad, 0.01) ==
        doctest::Approx(0.3540367091367856).epsilon(1e-9));

  // no forcing: exactly the homogeneous value
  const auto f = DataFunction::gaussian({0, 0, 0}, 0.5);
  const auto fq = FrequencyQuadrature::for_data(f, kZero, 1, 1.0);
  CHECK(duhamel_solve(f, kZero, Forcing::none(), Flavor::Continuum, lattice(1, 0, 0), {0.2, 0, 0}, 0.6, fq, 0.1) ==
        continuum_solution_u(f, kZero, {0.2, 0, 0}, 0.6, fq));

  // manufactured U = G(x) cos t
  const auto G = DataFunction::gaussian({0.1, 0, 0}, 0.5);
  const auto wm = Forcing::manufactured_cosine(G, 1.0, 1);
  const auto gq = FrequencyQuadrature::for_data(G, kZero, 1, 1.0);
  for (double t : {0.4, 1.0})
    for (double x : {-0.3, 0.1, 0.8})
      CHECK(std::abs(duhamel_solve(G, kZero, wm, Flavor::Continuum, lattice(1, 0, 0), {x, 0, 0}, t, gq, 0.02) -
                     G({x, 0, 0}) * std::cos(t)) < 1e-7);

  // fully discrete s-grid must sit on time levels
  const auto spec = lattice(1, 0.1, 0.05);
  CHECK_NOTHROW(duhamel_solve(f, kZero, wm, Flavor::FullyDiscrete, spec, {0, 0, 0}, 0.5, fq, 0.05));
  CHECK_THROWS_WITH_AS(duhamel_solve(f, kZero, wm, Flavor::FullyDiscrete, spec, {0, 0, 0}, 0.5, fq, 0.03),
                       doctest::Contains("s-grid-misaligned"), Error);
  CHECK_THROWS_WITH_AS(duhamel_solve(f, kZero, wm, Flavor::FullyDiscrete, spec, {0, 0, 0}, 0.52, fq, 0.05),
                       doctest::Contains("s-grid-misaligned"), Error);
}
