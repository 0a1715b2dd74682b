#include "latwave/grid_field.hpp"

#include <cmath>

#include "latwave/error.hpp"

namespace latwave {

GridField::GridField(LatticeSpec spec, std::shared_ptr<const LatticeClassification> classification)
    : spec_(spec), classification_(std::move(classification)) {
  require(classification_ != nullptr, ErrorKind::InvalidArgument, "grid field without classification");
}

std::span<const double> GridField::level(int p) const {
  const auto it = levels_.find(p);
  if (it == levels_.end()) throw Error(ErrorKind::MissingLevel, "time level " + std::to_string(p));
  return it->second;
}

std::span<double> GridField::level(int p) {
  const auto it = levels_.find(p);
  if (it == levels_.end()) throw Error(ErrorKind::MissingLevel, "time level " + std::to_string(p));
  return it->second;
}

std::span<double> GridField::add_level(int p) {
  auto& v = levels_[p];
  v.assign(point_count(), 0.0);
  return v;
}

void GridField::set_level(int p, std::vector<double> values) {
  require(values.size() == point_count(), ErrorKind::InvalidArgument, "level size does not match lattice");
  levels_[p] = std::move(values);
}

std::vector<int> GridField::level_indices() const {
  std::vector<int> out;
  out.reserve(levels_.size());
  for (const auto& [p, v] : levels_) out.push_back(p);
  return out;
}

void GridField::check_finite(int p) const {
  const auto v = level(p);
  const auto& kinds = classification_->kinds;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (kinds[i] != PointKind::Outside && !std::isfinite(v[i]))
      throw Error(ErrorKind::CorruptedState, "non-finite value at level " + std::to_string(p));
}

double GridField::max_abs(int p) const {
  const auto v = level(p);
  const auto& kinds = classification_->kinds;
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (kinds[i] != PointKind::Outside) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace latwave
