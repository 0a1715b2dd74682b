#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "latwave/error.hpp"
#include "latwave/lattice.hpp"

using namespace latwave;

namespace {

std::set<std::vector<double>> coords(const LatticeClassification& c, const std::vector<std::size_t>& idx) {
  std::set<std::vector<double>> out;
  for (auto i : idx) {
    const Vec x = c.position(i);
    out.insert(std::vector<double>(x.begin(), x.begin() + c.dimension()));
  }
  return out;
}

}  // namespace

TEST_CASE("admissibility examples") {
  CHECK(is_admissible({2, 0.2, 0.1, 1.0}));
  CHECK_FALSE(is_admissible({4, 0.1, 0.1, 1.0}));
  CHECK_FALSE(is_admissible({1, 0.2, 0.15, 1.0}));
  CHECK(LatticeSpec{2, 0.2, 0.1, 1.0}.number_of_time_levels() == 21);
}

TEST_CASE("admissible specs satisfy dt sqrt(n) <= dx") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < 2000; ++s) {
    LatticeSpec spec{1 + static_cast<int>(rng() % 3), 0.01 + unit(rng), 0.0, 1.0};
    spec.dt = 1.0 / (1 + static_cast<int>(rng() % 200));
    if (spec.admissible()) CHECK(spec.dt * std::sqrt(double(spec.n)) <= spec.dx);
  }
}

TEST_CASE("refine_halving") {
  const auto fam = refine_halving({1, 0.2, 0.1, 1.0}, 2);
  REQUIRE(fam.size() == 2);
  CHECK(fam[0].dx == doctest::Approx(0.1));
  CHECK(fam[0].dt == doctest::Approx(0.05));
  CHECK(fam[1].dx == doctest::Approx(0.05));
  CHECK(fam[1].dt == doctest::Approx(0.025));
  const auto two = refine_halving({2, 0.2, 0.1, 1.0}, 1);
  CHECK(two[0].courant() == doctest::Approx(0.5));
  CHECK(two[0].admissible());
  CHECK_THROWS_AS(refine_halving({1, 0.2, 0.1, 1.0}, 0), Error);
  CHECK_THROWS_AS(refine_halving({1, 0.2, 0.15, 1.0}, 1), Error);
}

TEST_CASE("dyadic halving nests lattice coordinates bit-exactly") {
  const LatticeSpec base{1, 0.25, 0.125, 1.0};
  const auto fam = refine_halving(base, 3);
  for (int k = -8; k <= 8; ++k) {
    const double coarse = k * base.dx;
    CHECK(coarse == (2 * k) * fam[0].dx);
    CHECK(coarse == (8 * k) * fam[2].dx);
    CHECK(k * base.dt == (4 * k) * fam[1].dt);
  }
}

TEST_CASE("classify unit interval") {
  const auto c = classify(Domain::box(1, {0, 0, 0}, {1, 0, 0}), {1, 0.25, 0.125, 1.0});
  CHECK(coords(c, c.interior) == std::set<std::vector<double>>{{0.25}, {0.5}, {0.75}});
  CHECK(coords(c, c.boundary) == std::set<std::vector<double>>{{0.0}, {1.0}});
}

TEST_CASE("classify unit square") {
  const auto c = classify(Domain::box(2, {0, 0, 0}, {1, 1, 0}), {2, 0.5, 0.25, 1.0});
  CHECK(coords(c, c.interior) == std::set<std::vector<double>>{{0.5, 0.5}});
  CHECK(c.boundary.size() == 8);
  for (const auto& p : coords(c, c.boundary)) {
    CHECK(p[0] >= 0.0);
    CHECK(p[0] <= 1.0);
    CHECK(p[1] >= 0.0);
    CHECK(p[1] <= 1.0);
  }
}

TEST_CASE("classify ball matches brute-force neighbour enumeration") {
  const double dx = 0.4;
  const auto c = classify(Domain::ball(2, {0, 0, 0}, 1.0), {2, dx, 0.2, 1.0});
  auto in_open = [](double x, double y) { return x * x + y * y < 1.0; };
  auto in_closed = [](double x, double y) { return x * x + y * y <= 1.0; };
  std::set<std::vector<double>> interior;
  std::set<std::vector<double>> boundary;
  for (int i = -4; i <= 4; ++i)
    for (int j = -4; j <= 4; ++j) {
      const double x = i * dx;
      const double y = j * dx;
      if (std::abs(x) > 1.4 || std::abs(y) > 1.4 || !in_closed(x, y)) continue;
      const bool all_neighbours = in_closed(x + dx, y) && in_closed(x - dx, y) && in_closed(x, y + dx) &&
                                  in_closed(x, y - dx);
      if (in_open(x, y) && all_neighbours)
        interior.insert({x, y});
      else
        boundary.insert({x, y});
    }
  CHECK(coords(c, c.interior) == interior);
  CHECK(coords(c, c.boundary) == boundary);
}

TEST_CASE("classification invariants and idempotence") {
  const Domain d = Domain::ball(2, {0.1, -0.05, 0}, 0.93);
  const LatticeSpec spec{2, 0.125, 0.0625, 1.0};
  const auto a = classify(d, spec);
  const auto b = classify(d, spec);
  CHECK(a.interior == b.interior);
  CHECK(a.boundary == b.boundary);
  std::vector<std::size_t> both;
  std::set_intersection(a.interior.begin(), a.interior.end(), a.boundary.begin(), a.boundary.end(),
                        std::back_inserter(both));
  CHECK(both.empty());
  for (auto i : a.interior) {
    CHECK(d.contains(a.position(i)));
    for (int axis = 0; axis < 2; ++axis)
      for (int sign : {-1, 1}) {
        const std::size_t j = sign > 0 ? i + a.box.stride(axis) : i - a.box.stride(axis);
        CHECK(d.in_closure(a.position(j)));
      }
  }
  for (auto i : a.boundary) {
    CHECK(d.in_closure(a.position(i)));
    bool outside_neighbour = false;
    for (int axis = 0; axis < 2; ++axis)
      for (int sign : {-1, 1}) {
        const std::size_t j = sign > 0 ? i + a.box.stride(axis) : i - a.box.stride(axis);
        outside_neighbour = outside_neighbour || !d.contains(a.position(j));
      }
    CHECK(outside_neighbour);
  }
}

TEST_CASE("membership ties are reported") {
  // 3 * 0.1 lands 5.6e-17 away from the face at 0.3.
  CHECK_THROWS_WITH_AS(classify(Domain::box(1, {0.3, 0, 0}, {1, 0, 0}), {1, 0.1, 0.05, 1.0}),
                       doctest::Contains("ambiguous-boundary"), Error);
}

TEST_CASE("full space pads the window by the domain of dependence") {
  const LatticeSpec spec{1, 0.25, 0.125, 1.0};
  const auto c = classify(Domain::full_space(1, {-1, 0, 0}, {1, 0, 0}), spec);
  CHECK(c.boundary.empty());
  CHECK(c.free_space);
  CHECK(c.box.extent(0) == 9 + 2 * (spec.time_steps() + 1));
  CHECK(c.window_indices().size() == 9);
}

TEST_CASE("double points") {
  const LatticeSpec spec{2, 0.25, 0.125, 1.0};
  CHECK(detect_double_points(Domain::box(2, {0, 0, 0}, {1, 1, 0}), spec).empty());
  CHECK(detect_double_points(Domain::ball(2, {0, 0, 0}, 1.0), spec).empty());
  const Domain touching =
      Domain::union_of({Domain::box(2, {0, 0, 0}, {1, 1, 0}), Domain::box(2, {1, 1, 0}, {2, 2, 0})});
  const auto suspects = detect_double_points(touching, spec);
  REQUIRE(suspects.size() == 1);
  CHECK(suspects[0][0] == 1.0);
  CHECK(suspects[0][1] == 1.0);
  CHECK_THROWS_AS(detect_double_points(Domain::full_space(2, {0, 0, 0}, {1, 1, 0}), spec), Error);
}

TEST_CASE("compatibility checks") {
  const Domain box = Domain::box(2, {0, 0, 0}, {1, 1, 0});
  const auto zero = DataFunction::zero();
  const auto ok = check_compatibility(zero, zero, zero, box, 0.1, 1e-12);
  CHECK(ok.passed);
  CHECK(ok.samples >= 100);
  CHECK(ok.max_f_minus_h == 0.0);

  const auto bad = check_compatibility(DataFunction::constant(1.0), zero, zero, box, 0.1, 1e-12);
  CHECK_FALSE(bad.passed);
  CHECK(bad.max_f_minus_h == 1.0);

  // Narrow Gaussian at the centre: exp(-0.25/(2*0.02^2)) is far below 1e-12 on the boundary.
  const auto bump = DataFunction::gaussian({0.5, 0.5, 0}, 0.02);
  CHECK(check_compatibility(bump, bump, zero, box, 0.1, 1e-10).passed);

  const Domain ball = Domain::ball(2, {0, 0, 0}, 1.0);
  const auto curved = check_compatibility(zero, zero, DataFunction::plane_wave({3, 0, 0}), ball, 0.1, 1e-6);
  CHECK_FALSE(curved.passed);
  CHECK(curved.max_surface_laplacian_h > 1.0);
}
