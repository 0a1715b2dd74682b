#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "latwave/config.hpp"
#include "latwave/error.hpp"
#include "latwave/experiments.hpp"
#include "latwave/report.hpp"

using namespace latwave;

namespace {

bool same_table(const ErrorTable& a, const ErrorTable& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto &x = a.rows()[k], &y = b.rows()[k];
    if (x.level != y.level || x.dx != y.dx || x.dt != y.dt || x.sup_error != y.sup_error ||
        x.l2_error != y.l2_error || x.observed_order != y.observed_order)
      return false;
  }
  return true;
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("config round-trips through INI") {
  for (const char* id : {"E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "solve"})
    for (int n : {1, 2, 3}) {
      const auto c = default_config(id, n);
      const auto text = to_ini(c);
      const auto back = parse_config(text);
      CHECK(to_ini(back) == text);
      CHECK(back.id == c.id);
      CHECK(back.n == n);
      CHECK(back.base.dx == c.base.dx);
      CHECK(back.base.dt == c.base.dt);
      CHECK(back.ratios == c.ratios);
      CHECK(back.f.describe() == c.f.describe());
      CHECK(back.w.kind() == c.w.kind());
      CHECK(back.seed == c.seed);
    }
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(default_config("E9"), Error);
  try {
    parse_config("[experiment]\nid=E1\n[f]\nkind=sawtooth\n");
    FAIL("accepted an unknown kind");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
  try {
    parse_config("[experiment]\nid=E1\n[lattice]\ndx=0.1x\n");
    FAIL("accepted a malformed number");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
  const auto c = parse_config("[experiment]\nid=E3\n[lattice]\ndx=0.05\n");
  CHECK(c.base.dx == 0.05);
  CHECK(c.levels == default_config("E3").levels);
}

TEST_CASE("CSV emission") {
  ErrorTable empty("empty");
  CHECK(to_csv(empty) == "level,dx,dt,sup_error,l2_error,observed_order\n");

  ErrorTable t("three");
  t.add(0.1, 0.05, 1e-2, 2e-2);
  t.add(0.05, 0.025, 2.5e-3, 5e-3);
  t.add(0.025, 0.0125, 0.7e-3, 1e-3);
  CHECK(line_count(to_csv(t)) == 4);
  CHECK_FALSE(t.rows()[0].observed_order.has_value());
  CHECK(*t.rows()[1].observed_order == std::log2(1e-2 / 2.5e-3));
  CHECK(*t.rows()[2].observed_order == std::log2(2.5e-3 / 0.7e-3));
  CHECK(same_table(parse_csv(to_csv(t)), t));
  CHECK(plot_script(t, "three.csv").find("three.csv") != std::string::npos);
}

TEST_CASE("E4 CSV re-parses bit for bit") {
  auto c = default_config("E4");
  c.levels = 3;
  const auto r = run_experiment(c);
  const auto* t = r.table("E4");
  REQUIRE(t != nullptr);
  CHECK(same_table(parse_csv(to_csv(*t)), *t));
  const auto dir = std::filesystem::temp_directory_path() / "latwave_test_e4";
  write_artifacts(r, c, dir.string());
  CHECK(same_table(read_csv((dir / "E4.csv").string()), *t));
  CHECK(std::filesystem::exists(dir / "E4.gp"));
  CHECK(std::filesystem::exists(dir / "report.txt"));
  CHECK(parse_config(to_ini(c)).levels == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("compare on the common lattice") {
  SpaceTimeSamples a(1, 0.1, 0.1), b(1, 0.1, 0.1);
  for (int k = 0; k < 10; ++k)
    for (int p = 0; p < 10; ++p) {
      b.set({k, 0, 0}, p, std::sin(k + 0.3 * p));
      a.set({k, 0, 0}, p, std::sin(k + 0.3 * p));
    }
  const auto same = compare_on_common_lattice(a, b, {0, 0, 0}, {1, 0, 0}, 0.0, 1.0);
  CHECK(same.sup == 0.0);
  CHECK(same.l2 == 0.0);
  CHECK(same.count == 100u);

  for (const auto& [key, v] : b.values()) a.set(key.first, key.second, v + 1.0);
  const auto shifted = compare_on_common_lattice(a, b, {0, 0, 0}, {1, 0, 0}, 0.0, 1.0);
  CHECK(shifted.sup == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(shifted.l2 == doctest::Approx(1.0).epsilon(1e-14));

  // a refined lattice shares every other point
  SpaceTimeSamples fine(1, 0.05, 0.05);
  for (int k = 0; k < 20; ++k)
    for (int p = 0; p < 20; ++p) fine.set({k, 0, 0}, p, k % 2 || p % 2 ? 99.0 : std::sin(k / 2 + 0.3 * (p / 2)));
  const auto nested = compare_on_common_lattice(fine, b, {0, 0, 0}, {1, 0, 0}, 0.0, 1.0);
  CHECK(nested.sup == 0.0);
  CHECK(nested.count == 100u);

  try {
    compare_on_common_lattice(a, b, {5, 0, 0}, {6, 0, 0}, 0.0, 1.0);
    FAIL("disjoint windows accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoCommonPoints);
  }
}

TEST_CASE("E1 on zero data has zero error") {
  auto c = default_config("E1");
  c.levels = 3;
  c.f = DataFunction::zero();
  c.g = DataFunction::zero();
  const auto r = run_experiment(c);
  for (const char* name : {"E1_fixed", "E1_varying"}) {
    const auto* t = r.table(name);
    REQUIRE(t != nullptr);
    for (const auto& row : t->rows()) {
      CHECK(row.sup_error == 0.0);
      CHECK(row.l2_error == 0.0);
      CHECK_FALSE(row.observed_order.has_value());
    }
  }
}

TEST_CASE("experiments are deterministic") {
  auto c = default_config("E1");
  c.levels = 3;
  setenv("HARNESS_THREADS", "1", 1);
  const auto serial = run_experiment(c);
  setenv("HARNESS_THREADS", "3", 1);
  const auto threaded = run_experiment(c);
  unsetenv("HARNESS_THREADS");
  REQUIRE(serial.tables.size() == threaded.tables.size());
  for (std::size_t k = 0; k < serial.tables.size(); ++k) CHECK(same_table(serial.tables[k], threaded.tables[k]));
  CHECK(serial.report() == threaded.report());

  auto e8 = default_config("E8");
  e8.params["samples"] = 500;
  e8.params["chain_samples"] = 20;
  CHECK(run_experiment(e8).report() == run_experiment(e8).report());
}

TEST_CASE("parallel_for") {
  setenv("HARNESS_THREADS", "4", 1);
  CHECK(harness_threads() == 4);
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) REQUIRE(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw Error(ErrorKind::InvalidArgument, "seven");
                  }),
                  Error);
  setenv("HARNESS_THREADS", "junk", 1);
  CHECK(harness_threads() >= 1);
  unsetenv("HARNESS_THREADS");
}

TEST_CASE("small audits") {
  CHECK(audit_dispersion_roots(300, 1).violations == 0);
  CHECK(audit_plane_wave_annihilation(300, 2).violations == 0);
  const auto bound = audit_propagator_bound(300, 3);
  CHECK(bound.violations == 0);
  CHECK(bound.samples == 300u);
  const auto chain = propagator_chain(12, 4);
  CHECK(chain.min_order_dt >= 1.9);
  CHECK(chain.min_order_dx >= 1.9);
  const auto keystone = keystone_identity(64, 30);
  CHECK(keystone.identical);
  CHECK(keystone.compared == 64u * 30u);
}

TEST_CASE("E5 demonstrates the instability") {
  auto c = default_config("E5");
  const auto r = run_experiment(c);
  REQUIRE(r.check("E5.blowup") != nullptr);
  CHECK(r.check("E5.blowup")->passed);
  CHECK(r.check("E5.seed_unstable")->passed);
  CHECK(r.check("E5.control_bounded")->passed);
}

TEST_CASE("experiment failures are reported, not thrown") {
  auto c = default_config("E3");
  c.params["h0"] = 0.3;  // does not divide T
  const auto r = run_experiment(c);
  CHECK_FALSE(r.passed());
  CHECK(r.check("E3") != nullptr);
  auto unknown = default_config("E1");
  unknown.id = "E0";
  CHECK_THROWS_AS(run_experiment(unknown), Error);
}
