#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "latwave/data_function.hpp"
#include "latwave/types.hpp"

namespace latwave {

/// Space-time lattice steps with horizon T in n space dimensions.
struct LatticeSpec {
  int n = 1;
  double dx = 0.0;
  double dt = 0.0;
  double T = 0.0;

  /// T/dt is an integer (relative tolerance 1e-12) and dt/dx <= 1/sqrt(n).
  bool admissible() const;
  bool satisfies_cfl() const;
  bool integral_horizon() const;
  /// Number of steps N with T = N dt.
  int time_steps() const;
  /// 2 N + 1 levels covering [-T, T].
  int number_of_time_levels() const { return 2 * time_steps() + 1; }
  double time(int level) const { return level * dt; }
  double courant() const { return dt / dx; }
};

bool is_admissible(const LatticeSpec& spec);

/// Halves (dx, dt) once per level. The input must be admissible.
std::vector<LatticeSpec> refine_halving(const LatticeSpec& spec, int levels);

/// Boxes, balls, a full-space evaluation window, and finite unions.
class Domain {
 public:
  enum class Shape { Box, Ball, FullSpace, Union };

  /// Open box prod_k (lo_k, hi_k).
  static Domain box(int n, const Vec& lo, const Vec& hi);
  static Domain ball(int n, const Vec& center, double radius);
  /// Whole space; [lo, hi] is the window where errors are measured. The
  /// stored lattice is padded around it (pad_cells, or N + 1 from the spec).
  static Domain full_space(int n, const Vec& lo, const Vec& hi, std::optional<int> pad_cells = {});
  static Domain union_of(std::vector<Domain> parts);

  Shape shape() const { return shape_; }
  int dimension() const { return n_; }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<Domain>& parts() const { return parts_; }
  std::optional<int> pad_cells() const { return pad_cells_; }

  bool contains(const Vec& x) const;
  bool in_closure(const Vec& x) const;
  /// Distance from x to the boundary (exact for box and ball; for unions the
  /// minimum over the parts' boundaries).
  double boundary_distance(const Vec& x) const;
  /// Axis-aligned bounding box of the closure, or the window for full space.
  void bounds(Vec& lo, Vec& hi) const;

 private:
  Shape shape_ = Shape::Box;
  int n_ = 1;
  Vec lo_{};
  Vec hi_{};
  Vec center_{};
  double radius_ = 0.0;
  std::optional<int> pad_cells_;
  std::vector<Domain> parts_;
};

/// Dense rectangular block of lattice multi-indices, lexicographic order
/// with the first axis most significant.
class LatticeBox {
 public:
  LatticeBox() = default;
  LatticeBox(int n, const MultiIndex& lo, const MultiIndex& hi);

  int dimension() const { return n_; }
  const MultiIndex& lo() const { return lo_; }
  const MultiIndex& hi() const { return hi_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return stride_[axis]; }
  int extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }

  bool contains(const MultiIndex& k) const;
  std::size_t index(const MultiIndex& k) const;
  MultiIndex multi_index(std::size_t index) const;
  Vec position(std::size_t index, double dx) const;
  /// True if the axis neighbour in direction `sign` (+1/-1) exists in the box.
  bool has_neighbor(std::size_t index, int axis, int sign) const;

 private:
  int n_ = 1;
  MultiIndex lo_{};
  MultiIndex hi_{};
  std::array<std::size_t, kMaxDim> stride_{};
  std::size_t size_ = 0;
};

enum class PointKind : std::uint8_t { Outside, Interior, Boundary };

/// Lattice points of the closure split into interior and boundary sets.
struct LatticeClassification {
  LatticeBox box;
  double dx = 0.0;
  std::vector<PointKind> kinds;        // one per box point
  std::vector<std::size_t> interior;   // box indices, ascending
  std::vector<std::size_t> boundary;   // box indices, ascending
  bool free_space = false;
  Vec window_lo{};
  Vec window_hi{};

  int dimension() const { return box.dimension(); }
  bool in_support(std::size_t index) const { return kinds[index] != PointKind::Outside; }
  Vec position(std::size_t index) const { return box.position(index, dx); }
  /// Interior and boundary indices merged, ascending (lexicographic lattice order).
  std::vector<std::size_t> support() const;
  std::vector<MultiIndex> interior_points() const;
  std::vector<MultiIndex> boundary_points() const;
  /// Free space only: indices inside the measurement window.
  std::vector<std::size_t> window_indices() const;
  std::optional<std::size_t> find(const Vec& x) const;
};

LatticeClassification classify(const Domain& domain, const LatticeSpec& spec);

/// Boundary points whose neighbourhood meets the domain in a disconnected set.
/// Boxes and balls never have any; unions are scanned with a local
/// connectivity test at resolution dx/8 (a heuristic).
std::vector<Vec> detect_double_points(const Domain& domain, const LatticeSpec& spec);

struct CompatibilityReport {
  double max_f_minus_h = 0.0;
  double max_g = 0.0;
  double max_surface_laplacian_h = 0.0;
  std::size_t samples = 0;
  bool passed = false;
};

/// Samples the boundary and checks f -> h, g -> 0 and that h has vanishing
/// tangential Laplacian (second differences at resolution dx/4).
CompatibilityReport check_compatibility(const DataFunction& f, const DataFunction& g,
                                        const DataFunction& h, const Domain& domain, double dx,
                                        double tol);

}  // namespace latwave
