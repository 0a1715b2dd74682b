#pragma once

#include <map>
#include <string>
#include <vector>

#include "latwave/data_function.hpp"
#include "latwave/lattice.hpp"

namespace latwave {

/// Everything an experiment or a solve needs. Serialized as INI with the
/// sections [experiment] [lattice] [domain] [f] [g] [h] [w] [w_spatial]
/// [b] [sigma] [params] [tolerances] [output].
struct ExperimentConfig {
  std::string id = "solve";
  int n = 1;
  int levels = 4;
  unsigned seed = 20240601;
  Domain domain = Domain::full_space(1, {-1, 0, 0}, {1, 0, 0});
  LatticeSpec base{1, 0.2, 0.1, 1.0};
  DataFunction f;
  DataFunction g;
  DataFunction h;
  DataFunction b;
  DataFunction sigma;
  Forcing w;
  /// dt/dx per level for the varying-ratio family (cycled).
  std::vector<double> ratios;
  std::map<std::string, double> params;
  std::map<std::string, double> tolerances;
  std::string output_dir = "out";

  double param(const std::string& key, double fallback) const;
  double tolerance(const std::string& key, double fallback) const;
};

/// Throws Error(Config) on unknown kinds, malformed numbers or missing keys.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Keys present in `text` override `base`.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base);
std::string to_ini(const ExperimentConfig& config);

/// Defaults for E1..E8 in dimension n.
ExperimentConfig default_config(const std::string& id, int n = 1);

}  // namespace latwave
