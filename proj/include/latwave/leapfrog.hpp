#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "latwave/data_function.hpp"
#include "latwave/grid_field.hpp"
#include "latwave/lattice.hpp"

namespace latwave {

/// Explicit scheme data: lattice, initial data, Dirichlet values and forcing.
struct DiscreteProblem {
  LatticeSpec spec;
  std::shared_ptr<const LatticeClassification> classification;
  DataFunction f;
  DataFunction g;
  /// Lattice-sampled initial data (box-sized); when present they replace f / g.
  std::vector<double> f_samples;
  std::vector<double> g_samples;
  /// One value per entry of classification->boundary; empty means zero.
  std::vector<double> boundary_value;
  Forcing forcing;
  /// a = 1 + b and sigma. The explicit core only runs with b = sigma = 0.
  std::optional<DataFunction> b;
  std::optional<DataFunction> sigma;
  /// Skip the dt/dx <= 1/sqrt(n) check (instability demonstrations).
  bool allow_cfl_violation = false;

  /// Classifies `domain` and samples `h` (if given) on the boundary points.
  static DiscreteProblem make(const Domain& domain, const LatticeSpec& spec, DataFunction f, DataFunction g,
                              const std::optional<DataFunction>& h = {}, Forcing forcing = {});

  void validate() const;
  double boundary_at(std::size_t k) const { return boundary_value.empty() ? 0.0 : boundary_value[k]; }
  double f_at(std::size_t i) const { return f_samples.empty() ? f.value(classification->position(i)) : f_samples[i]; }
  double g_at(std::size_t i) const { return g_samples.empty() ? g.value(classification->position(i)) : g_samples[i]; }
};

enum class Direction { Forward, Backward };
enum class Record { Window, Full };

/// Called once per computed level (including the three bootstrap levels).
using LevelObserver = std::function<void(int level, const GridField& field)>;

class LeapfrogSolver {
 public:
  explicit LeapfrogSolver(DiscreteProblem problem);

  const DiscreteProblem& problem() const { return problem_; }

  /// Levels -1, 0, +1:
  ///   v(+-dt) = f +- dt g + dt^2/2 (lap f + w(., 0)).
  GridField bootstrap() const;

  /// Adds the level after the newest one (forward) or before the oldest one
  /// (backward). With `keep_history` false the level three slots behind is
  /// dropped. Throws BlowupError when max|v| exceeds blowup_threshold.
  int step(GridField& field, Direction direction, bool keep_history = false) const;

  /// Bootstrap, then forward to level p_max and backward to p_min
  /// (default +-N). Window recording keeps level 0 and the last three on each side.
  GridField solve(Record record = Record::Window, const LevelObserver& observer = {},
                  std::optional<int> p_min = {}, std::optional<int> p_max = {}) const;

  double blowup_threshold = 1e12;

 private:
  void fill_fixed(std::span<double> level) const;

  DiscreteProblem problem_;
  std::vector<std::size_t> update_;  // interior points with all 2n neighbours
  std::vector<std::size_t> frame_;   // free-space interior points at the lattice edge
  std::vector<Vec> update_pos_;
  std::vector<double> f_values_;
  std::vector<double> g_values_;
};

/// Leapfrog energy between levels p and p+1:
///   sum_x ((v^{p+1} - v^p)/dt)^2 + sum_k D_k v^{p+1} D_k v^p, times dx^n,
/// with forward differences over pairs of support points.
double discrete_energy(const GridField& field, int p);

/// Binary snapshot: uint32 n, f64 dx, f64 dt, i64 level, u64 count, then
/// count little-endian f64 values over the support in lattice order.
struct LevelDump {
  int n = 0;
  double dx = 0.0;
  double dt = 0.0;
  long long level = 0;
  std::vector<double> values;
};

void write_level_dump(std::ostream& out, const GridField& field, int p);
LevelDump read_level_dump(std::istream& in);

}  // namespace latwave
