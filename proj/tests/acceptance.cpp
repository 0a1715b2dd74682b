// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "latwave/config.hpp"
#include "latwave/error.hpp"
#include "latwave/experiments.hpp"

using namespace latwave;

namespace {

constexpr unsigned kSeed = 20240601;

struct Outcome {
  bool passed = false;
  std::string detail;
};

// All named checks of a result must pass; the details are joined.
Outcome require_checks(const ExperimentResult& r, const std::vector<std::string>& names, const std::string& tag) {
  Outcome o{true, {}};
  for (const auto& name : names) {
    const Check* c = r.check(name);
    const bool ok = c && c->passed;
    o.passed = o.passed && ok;
    o.detail += (o.detail.empty() ? "" : "; ") + tag + name + " " + (c ? c->detail : std::string("missing"));
  }
  // failures raised inside the experiment show up as extra checks
  for (const auto& c : r.checks)
    if (!c.passed) {
      o.passed = false;
      if (std::find(names.begin(), names.end(), c.name) == names.end()) o.detail += "; " + tag + c.name + " " + c.detail;
    }
  return o;
}

Outcome merge(Outcome a, const Outcome& b) {
  a.passed = a.passed && b.passed;
  a.detail += "; " + b.detail;
  return a;
}

Outcome audit_outcome(const SampleAudit& a, const std::string& what) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu violations, worst %s %.3g", a.violations, a.samples, what.c_str(), a.worst);
  return {a.violations == 0 && a.samples > 0, buf};
}

ExperimentResult run(const std::string& id, int n) { return run_experiment(default_config(id, n)); }

struct Criterion {
  int number;
  std::string title;
  double budget_s;
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "dispersion root property", 5.0,
       [] { return audit_outcome(audit_dispersion_roots(10000, kSeed, 1e-11), "|G|/(1+|alpha|^2)"); }},
      {2, "plane-wave annihilation", 5.0,
       [] { return audit_outcome(audit_plane_wave_annihilation(1000, kSeed, 1e-10), "|box u|"); }},
      {3, "propagator bound audit", 5.0,
       [] { return audit_outcome(audit_propagator_bound(10000, kSeed, 1e-12), "(value - T)/T"); }},
      {4, "keystone identity", 1.0,
       [] {
         const auto k = keystone_identity(512, 200);
         char buf[128];
         std::snprintf(buf, sizeof buf, "%zu values compared, max difference %.3g", k.compared, k.max_difference);
         return Outcome{k.identical, buf};
       }},
      {5, "joint limit E1 (n = 1, 2)", 120.0,
       [] {
         const std::vector<std::string> names{"E1_fixed.monotone", "E1_fixed.order", "E1_varying.monotone",
                                              "E1_varying.order", "E1.ratio_free"};
         return merge(require_checks(run("E1", 1), names, "n=1 "), require_checks(run("E1", 2), names, "n=2 "));
       }},
      {6, "iterated limit E3 + E4", 60.0,
       [] {
         return merge(require_checks(run("E3", 1), {"E3.ratio"}, ""),
                      require_checks(run("E4", 1), {"E4.monotone", "E4.order"}, ""));
       }},
      {7, "CFL asymmetry E5", 30.0,
       [] {
         const std::vector<std::string> names{"E5.seed_unstable", "E5.blowup", "E5.control_bounded"};
         return merge(require_checks(run("E5", 1), names, "n=1 "), require_checks(run("E5", 2), names, "n=2 "));
       }},
      {8, "Duhamel E6", 30.0,
       [] { return require_checks(run("E6", 1), {"E6.single_frequency", "E6.manufactured"}, ""); }},
      {9, "elliptic + splitting E7", 60.0,
       [] {
         const std::vector<std::string> names{"E7.residual", "E7.linear_exactness", "E7.self_convergence"};
         return merge(require_checks(run("E7", 1), names, "n=1 "), require_checks(run("E7", 2), names, "n=2 "));
       }},
      {10, "propagator degeneration chain", 10.0,
       [] {
         const auto c = propagator_chain(100, kSeed);
         char buf[160];
         std::snprintf(buf, sizeof buf, "min order dt %.3f, dx %.3f over %zu samples (%zu skipped)", c.min_order_dt,
                       c.min_order_dx, c.samples, c.skipped);
         return Outcome{c.min_order_dt >= 1.9 && c.min_order_dx >= 1.9 && c.skipped < c.samples, buf};
       }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool ok = o.passed && in_time;
    failed += !ok;
    std::printf("%s criterion %d (%s): %s [%.2f s, budget %.0f s%s]\n", ok ? "PASS" : "FAIL", c.number,
                c.title.c_str(), o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
