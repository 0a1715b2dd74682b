#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "latwave/config.hpp"
#include "latwave/report.hpp"

namespace latwave {

/// Worker count: HARNESS_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int harness_threads();

/// Runs body(i) for i in [0, count) on up to harness_threads() threads.
/// Work is split into contiguous chunks so results written by index are
/// independent of the thread count. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  std::string id;
  std::vector<ErrorTable> tables;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool passed() const;
  const ErrorTable* table(const std::string& name) const;
  const Check* check(const std::string& name) const;
  std::string report() const;
};

/// Dispatches on config.id (E1..E8). Failures inside an experiment become
/// failed checks; only configuration errors propagate.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// One CSV and one gnuplot script per table, report.txt and config.ini.
void write_artifacts(const ExperimentResult& result, const ExperimentConfig& config, const std::string& dir);

ExperimentResult run_e1(const ExperimentConfig& config);
ExperimentResult run_e2(const ExperimentConfig& config);
ExperimentResult run_e3(const ExperimentConfig& config);
ExperimentResult run_e4(const ExperimentConfig& config);
ExperimentResult run_e5(const ExperimentConfig& config);
ExperimentResult run_e6(const ExperimentConfig& config);
ExperimentResult run_e7(const ExperimentConfig& config);
ExperimentResult run_e8(const ExperimentConfig& config);

/// Random admissible lattices and frequencies inside one Brillouin zone.
struct SampleAudit {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest normalized deviation seen
};

/// |G(alpha, beta^2)| / (1 + |alpha|^2) for n cycling through 1, 2, 3.
SampleAudit audit_dispersion_roots(std::size_t samples, unsigned seed, double tol = 1e-11);

/// |box Re exp(i(alpha.x + beta t))| at random space-time points, amplitude 1.
SampleAudit audit_plane_wave_annihilation(std::size_t samples, unsigned seed, double tol = 1e-10);

/// (|dt sin(beta t)/sin(beta dt)| - T)/T over t = k dt, |t| <= T.
SampleAudit audit_propagator_bound(std::size_t samples, unsigned seed, double tol = 1e-12);

/// Entry-wise propagator differences along dt -> 0 (fully discrete vs
/// semidiscrete) and dx -> 0 (semidiscrete vs continuum).
struct ChainAudit {
  std::size_t samples = 0;
  std::size_t skipped = 0;  // differences already at round-off
  double min_order_dt = 0.0;
  double min_order_dx = 0.0;
  double mean_order_dt = 0.0;
  double mean_order_dx = 0.0;
};

ChainAudit propagator_chain(std::size_t samples, unsigned seed);

/// Leapfrog and Stormer-Verlet (h = dt) on a 1-D box with `points` lattice
/// points, compared level by level.
struct KeystoneResult {
  bool identical = false;
  std::size_t compared = 0;
  double max_difference = 0.0;
};

KeystoneResult keystone_identity(int points = 512, int steps = 200);

}  // namespace latwave
