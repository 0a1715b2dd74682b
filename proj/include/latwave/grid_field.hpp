#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "latwave/lattice.hpp"

namespace latwave {

/// Values on the lattice points of a classification at a set of time
/// levels t = p dt. Each level stores the whole lattice box; points outside
/// the support (interior + boundary) hold zero.
class GridField {
 public:
  GridField(LatticeSpec spec, std::shared_ptr<const LatticeClassification> classification);

  const LatticeSpec& spec() const { return spec_; }
  const LatticeClassification& classification() const { return *classification_; }
  std::shared_ptr<const LatticeClassification> classification_ptr() const { return classification_; }
  std::size_t point_count() const { return classification_->box.size(); }

  bool has_level(int p) const { return levels_.count(p) != 0; }
  std::span<const double> level(int p) const;
  std::span<double> level(int p);
  /// Inserts (or resets) level p with zeros and returns it.
  std::span<double> add_level(int p);
  void set_level(int p, std::vector<double> values);
  void drop_level(int p) { levels_.erase(p); }
  std::vector<int> level_indices() const;
  std::size_t level_count() const { return levels_.size(); }

  double value(int p, std::size_t index) const { return level(p)[index]; }
  double time(int p) const { return p * spec_.dt; }

  /// Throws corrupted-state if level p holds a NaN or infinity on the support.
  void check_finite(int p) const;
  /// max |v| over the support at level p.
  double max_abs(int p) const;

 private:
  LatticeSpec spec_;
  std::shared_ptr<const LatticeClassification> classification_;
  std::map<int, std::vector<double>> levels_;
};

}  // namespace latwave
