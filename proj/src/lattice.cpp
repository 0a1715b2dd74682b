#include "latwave/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "latwave/error.hpp"

namespace latwave {

namespace {

constexpr double kIntegralTolerance = 1e-12;
constexpr double kTieTolerance = 1e-12;

void validate(const LatticeSpec& spec) {
  require(spec.n >= 1 && spec.n <= kMaxDim, ErrorKind::InvalidArgument, "dimension must be in 1..3");
  require(spec.dx > 0.0 && spec.dt > 0.0 && spec.T > 0.0, ErrorKind::InvalidArgument,
          "dx, dt and T must be positive");
}

}  // namespace

// One part in 1e14 absorbs the rounding of dt = dx / sqrt(n).
bool LatticeSpec::satisfies_cfl() const { return dt * std::sqrt(static_cast<double>(n)) <= dx * (1.0 + 1e-14); }

bool LatticeSpec::integral_horizon() const {
  const double ratio = T / dt;
  return std::abs(ratio - std::round(ratio)) <= kIntegralTolerance * std::max(1.0, ratio) &&
         std::round(ratio) >= 1.0;
}

bool LatticeSpec::admissible() const {
  if (n < 1 || n > kMaxDim || !(dx > 0.0) || !(dt > 0.0) || !(T > 0.0)) return false;
  return integral_horizon() && satisfies_cfl();
}

int LatticeSpec::time_steps() const { return static_cast<int>(std::llround(T / dt)); }

bool is_admissible(const LatticeSpec& spec) { return spec.admissible(); }

std::vector<LatticeSpec> refine_halving(const LatticeSpec& spec, int levels) {
  require(levels >= 1, ErrorKind::InvalidArgument, "refine_halving needs levels >= 1");
  require(spec.admissible(), ErrorKind::InvalidArgument, "refine_halving needs an admissible spec");
  std::vector<LatticeSpec> out;
  LatticeSpec current = spec;
  for (int i = 0; i < levels; ++i) {
    current.dx *= 0.5;
    current.dt *= 0.5;
    out.push_back(current);
  }
  return out;
}

// ---------------------------------------------------------------- Domain

Domain Domain::box(int n, const Vec& lo, const Vec& hi) {
  require(n >= 1 && n <= kMaxDim, ErrorKind::InvalidArgument, "dimension must be in 1..3");
  for (int k = 0; k < n; ++k)
    require(lo[k] < hi[k], ErrorKind::InvalidArgument, "box bounds must satisfy lo < hi");
  Domain d;
  d.shape_ = Shape::Box;
  d.n_ = n;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

Domain Domain::ball(int n, const Vec& center, double radius) {
  require(n >= 1 && n <= kMaxDim, ErrorKind::InvalidArgument, "dimension must be in 1..3");
  require(radius > 0.0, ErrorKind::InvalidArgument, "ball radius must be positive");
  Domain d;
  d.shape_ = Shape::Ball;
  d.n_ = n;
  d.center_ = center;
  d.radius_ = radius;
  for (int k = 0; k < n; ++k) {
    d.lo_[k] = center[k] - radius;
    d.hi_[k] = center[k] + radius;
  }
  return d;
}

Domain Domain::full_space(int n, const Vec& lo, const Vec& hi, std::optional<int> pad_cells) {
  Domain d = box(n, lo, hi);
  d.shape_ = Shape::FullSpace;
  d.pad_cells_ = pad_cells;
  return d;
}

Domain Domain::union_of(std::vector<Domain> parts) {
  require(!parts.empty(), ErrorKind::InvalidArgument, "union of no domains");
  Domain d;
  d.shape_ = Shape::Union;
  d.n_ = parts.front().dimension();
  for (const auto& p : parts) {
    require(p.dimension() == d.n_, ErrorKind::InvalidArgument, "union parts differ in dimension");
    require(p.shape() == Shape::Box || p.shape() == Shape::Ball, ErrorKind::UnsupportedShape,
            "unions are built from boxes and balls");
  }
  d.lo_ = parts.front().lo();
  d.hi_ = parts.front().hi();
  for (const auto& p : parts)
    for (int k = 0; k < d.n_; ++k) {
      d.lo_[k] = std::min(d.lo_[k], p.lo()[k]);
      d.hi_[k] = std::max(d.hi_[k], p.hi()[k]);
    }
  d.parts_ = std::move(parts);
  return d;
}

bool Domain::contains(const Vec& x) const {
  switch (shape_) {
    case Shape::Box:
      for (int k = 0; k < n_; ++k)
        if (!(x[k] > lo_[k] && x[k] < hi_[k])) return false;
      return true;
    case Shape::Ball: {
      double r2 = 0.0;
      for (int k = 0; k < n_; ++k) r2 += (x[k] - center_[k]) * (x[k] - center_[k]);
      return r2 < radius_ * radius_;
    }
    case Shape::FullSpace:
      return true;
    case Shape::Union:
      return std::any_of(parts_.begin(), parts_.end(), [&](const Domain& p) { return p.contains(x); });
  }
  return false;
}

bool Domain::in_closure(const Vec& x) const {
  switch (shape_) {
    case Shape::Box:
      for (int k = 0; k < n_; ++k)
        if (!(x[k] >= lo_[k] && x[k] <= hi_[k])) return false;
      return true;
    case Shape::Ball: {
      double r2 = 0.0;
      for (int k = 0; k < n_; ++k) r2 += (x[k] - center_[k]) * (x[k] - center_[k]);
      return r2 <= radius_ * radius_;
    }
    case Shape::FullSpace:
      return true;
    case Shape::Union:
      return std::any_of(parts_.begin(), parts_.end(), [&](const Domain& p) { return p.in_closure(x); });
  }
  return false;
}

double Domain::boundary_distance(const Vec& x) const {
  switch (shape_) {
    case Shape::Box: {
      if (contains(x)) {
        double d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n_; ++k) d = std::min({d, x[k] - lo_[k], hi_[k] - x[k]});
        return d;
      }
      double s = 0.0;
      for (int k = 0; k < n_; ++k) {
        const double e = std::max({lo_[k] - x[k], 0.0, x[k] - hi_[k]});
        s += e * e;
      }
      return std::sqrt(s);
    }
    case Shape::Ball: {
      double r2 = 0.0;
      for (int k = 0; k < n_; ++k) r2 += (x[k] - center_[k]) * (x[k] - center_[k]);
      return std::abs(std::sqrt(r2) - radius_);
    }
    case Shape::FullSpace:
      return std::numeric_limits<double>::infinity();
    case Shape::Union: {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& p : parts_) d = std::min(d, p.boundary_distance(x));
      return d;
    }
  }
  return 0.0;
}

void Domain::bounds(Vec& lo, Vec& hi) const {
  lo = lo_;
  hi = hi_;
}

// ---------------------------------------------------------------- LatticeBox

LatticeBox::LatticeBox(int n, const MultiIndex& lo, const MultiIndex& hi) : n_(n), lo_(lo), hi_(hi) {
  for (int k = n; k < kMaxDim; ++k) {
    lo_[k] = 0;
    hi_[k] = 0;
  }
  std::size_t s = 1;
  for (int k = kMaxDim - 1; k >= 0; --k) {
    stride_[k] = s;
    require(hi_[k] >= lo_[k], ErrorKind::InvalidArgument, "empty lattice box");
    s *= static_cast<std::size_t>(hi_[k] - lo_[k] + 1);
  }
  size_ = s;
}

bool LatticeBox::contains(const MultiIndex& k) const {
  for (int a = 0; a < n_; ++a)
    if (k[a] < lo_[a] || k[a] > hi_[a]) return false;
  return true;
}

std::size_t LatticeBox::index(const MultiIndex& k) const {
  std::size_t i = 0;
  for (int a = 0; a < n_; ++a) i += static_cast<std::size_t>(k[a] - lo_[a]) * stride_[a];
  return i;
}

MultiIndex LatticeBox::multi_index(std::size_t index) const {
  MultiIndex k{};
  for (int a = 0; a < n_; ++a) {
    k[a] = lo_[a] + static_cast<int>(index / stride_[a]);
    index %= stride_[a];
  }
  return k;
}

Vec LatticeBox::position(std::size_t index, double dx) const {
  const MultiIndex k = multi_index(index);
  Vec x{};
  for (int a = 0; a < n_; ++a) x[a] = k[a] * dx;
  return x;
}

bool LatticeBox::has_neighbor(std::size_t index, int axis, int sign) const {
  const int coord = lo_[axis] + static_cast<int>((index / stride_[axis]) % extent(axis));
  return sign > 0 ? coord < hi_[axis] : coord > lo_[axis];
}

// ---------------------------------------------------------------- classification

std::vector<std::size_t> LatticeClassification::support() const {
  std::vector<std::size_t> out;
  out.reserve(interior.size() + boundary.size());
  std::merge(interior.begin(), interior.end(), boundary.begin(), boundary.end(), std::back_inserter(out));
  return out;
}

std::vector<MultiIndex> LatticeClassification::interior_points() const {
  std::vector<MultiIndex> out;
  out.reserve(interior.size());
  for (auto i : interior) out.push_back(box.multi_index(i));
  return out;
}

std::vector<MultiIndex> LatticeClassification::boundary_points() const {
  std::vector<MultiIndex> out;
  out.reserve(boundary.size());
  for (auto i : boundary) out.push_back(box.multi_index(i));
  return out;
}

std::vector<std::size_t> LatticeClassification::window_indices() const {
  std::vector<std::size_t> out;
  const double slack = 1e-12 * dx;
  for (auto i : interior) {
    const Vec x = position(i);
    bool inside = true;
    for (int k = 0; k < dimension(); ++k)
      inside = inside && x[k] >= window_lo[k] - slack && x[k] <= window_hi[k] + slack;
    if (inside) out.push_back(i);
  }
  return out;
}

std::optional<std::size_t> LatticeClassification::find(const Vec& x) const {
  MultiIndex k{};
  for (int a = 0; a < dimension(); ++a) {
    const double q = x[a] / dx;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-12 * std::max(1.0, std::abs(q))) return std::nullopt;
    k[a] = static_cast<int>(r);
  }
  if (!box.contains(k)) return std::nullopt;
  const auto i = box.index(k);
  if (!in_support(i)) return std::nullopt;
  return i;
}

LatticeClassification classify(const Domain& domain, const LatticeSpec& spec) {
  validate(spec);
  require(domain.dimension() == spec.n, ErrorKind::InvalidArgument, "domain and lattice dimensions differ");
  const int n = spec.n;
  const double dx = spec.dx;
  Vec lo{};
  Vec hi{};
  domain.bounds(lo, hi);

  LatticeClassification c;
  c.dx = dx;
  MultiIndex klo{};
  MultiIndex khi{};

  if (domain.shape() == Domain::Shape::FullSpace) {
    const int pad = domain.pad_cells().value_or(spec.time_steps() + 1);
    for (int k = 0; k < n; ++k) {
      klo[k] = static_cast<int>(std::ceil(lo[k] / dx - 1e-12)) - pad;
      khi[k] = static_cast<int>(std::floor(hi[k] / dx + 1e-12)) + pad;
    }
    c.box = LatticeBox(n, klo, khi);
    c.free_space = true;
    c.window_lo = lo;
    c.window_hi = hi;
    c.kinds.assign(c.box.size(), PointKind::Interior);
    c.interior.resize(c.box.size());
    for (std::size_t i = 0; i < c.box.size(); ++i) c.interior[i] = i;
    return c;
  }

  for (int k = 0; k < n; ++k) {
    klo[k] = static_cast<int>(std::floor(lo[k] / dx)) - 1;
    khi[k] = static_cast<int>(std::ceil(hi[k] / dx)) + 1;
  }
  c.box = LatticeBox(n, klo, khi);
  c.window_lo = lo;
  c.window_hi = hi;
  const std::size_t size = c.box.size();
  std::vector<char> open(size, 0);
  std::vector<char> closed(size, 0);
  for (std::size_t i = 0; i < size; ++i) {
    const Vec x = c.box.position(i, dx);
    const double gap = domain.boundary_distance(x);
    if (gap > 0.0 && gap < kTieTolerance * dx)
      throw Error(ErrorKind::AmbiguousBoundary, "lattice point within 1e-12 dx of the boundary");
    open[i] = domain.contains(x) ? 1 : 0;
    closed[i] = domain.in_closure(x) ? 1 : 0;
  }
  c.kinds.assign(size, PointKind::Outside);
  for (std::size_t i = 0; i < size; ++i) {
    if (!closed[i]) continue;
    bool interior = open[i] != 0;
    for (int a = 0; a < n && interior; ++a) {
      for (int sign : {-1, 1}) {
        if (!c.box.has_neighbor(i, a, sign)) {
          interior = false;
          break;
        }
        const std::size_t j = sign > 0 ? i + c.box.stride(a) : i - c.box.stride(a);
        if (!closed[j]) {
          interior = false;
          break;
        }
      }
    }
    if (interior) {
      c.kinds[i] = PointKind::Interior;
      c.interior.push_back(i);
    } else {
      c.kinds[i] = PointKind::Boundary;
      c.boundary.push_back(i);
    }
  }
  return c;
}

// ---------------------------------------------------------------- double points

std::vector<Vec> detect_double_points(const Domain& domain, const LatticeSpec& spec) {
  if (domain.shape() == Domain::Shape::FullSpace)
    throw Error(ErrorKind::UnsupportedShape, "full space has no bounded boundary to scan");
  if (domain.shape() == Domain::Shape::Box || domain.shape() == Domain::Shape::Ball) return {};

  const int n = spec.n;
  const LatticeClassification c = classify(domain, spec);
  constexpr int kSide = 8;  // samples per axis, offsets (j + 1/2) dx/8
  const double h = spec.dx / 8.0;
  int total = 1;
  for (int k = 0; k < n; ++k) total *= kSide;

  std::vector<Vec> suspects;
  std::vector<char> inside(total);
  std::vector<int> label(total);
  for (auto b : c.boundary) {
    const Vec x0 = c.position(b);
    for (int s = 0; s < total; ++s) {
      Vec x = x0;
      int rest = s;
      for (int k = n - 1; k >= 0; --k) {
        const int j = rest % kSide - kSide / 2;
        rest /= kSide;
        x[k] += (j + 0.5) * h;
      }
      inside[s] = domain.contains(x) ? 1 : 0;
    }
    std::fill(label.begin(), label.end(), -1);
    int components = 0;
    for (int s = 0; s < total; ++s) {
      if (!inside[s] || label[s] >= 0) continue;
      std::vector<int> stack{s};
      label[s] = components;
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        int stride = 1;
        for (int k = n - 1; k >= 0; --k) {
          const int coord = (cur / stride) % kSide;
          for (int sign : {-1, 1}) {
            const int nc = coord + sign;
            if (nc < 0 || nc >= kSide) continue;
            const int nb = cur + sign * stride;
            if (inside[nb] && label[nb] < 0) {
              label[nb] = components;
              stack.push_back(nb);
            }
          }
          stride *= kSide;
        }
      }
      ++components;
    }
    if (components >= 2) suspects.push_back(x0);
  }
  return suspects;
}

// ---------------------------------------------------------------- compatibility

namespace {

struct BoundarySample {
  Vec x;
  // Unit tangent directions along which the boundary is locally straight
  // (box faces) or along great circles (balls).
  std::vector<Vec> tangents;
};

std::vector<BoundarySample> sample_boundary(const Domain& domain, int per_edge) {
  const int n = domain.dimension();
  std::vector<BoundarySample> out;
  if (domain.shape() == Domain::Shape::Box) {
    const Vec lo = domain.lo();
    const Vec hi = domain.hi();
    if (n == 1) {
      out.push_back({lo, {}});
      out.push_back({hi, {}});
      return out;
    }
    for (int axis = 0; axis < n; ++axis) {
      for (double side : {lo[axis], hi[axis]}) {
        // Grid over the face in the remaining axes, corners excluded.
        std::vector<int> others;
        for (int k = 0; k < n; ++k)
          if (k != axis) others.push_back(k);
        const int m = per_edge;
        const int count = n == 2 ? m : m * m;
        for (int s = 0; s < count; ++s) {
          BoundarySample bs;
          bs.x = Vec{};
          bs.x[axis] = side;
          int rest = s;
          for (int o : others) {
            const int j = rest % m;
            rest /= m;
            bs.x[o] = lo[o] + (hi[o] - lo[o]) * (j + 0.5) / m;
            Vec t{};
            t[o] = 1.0;
            bs.tangents.push_back(t);
          }
          out.push_back(bs);
        }
      }
    }
    return out;
  }
  if (domain.shape() == Domain::Shape::Ball) {
    const Vec c = domain.center();
    const double r = domain.radius();
    if (n == 1) {
      out.push_back({Vec{c[0] - r, 0, 0}, {}});
      out.push_back({Vec{c[0] + r, 0, 0}, {}});
      return out;
    }
    if (n == 2) {
      const int m = std::max(128, 4 * per_edge);
      for (int s = 0; s < m; ++s) {
        const double th = 2.0 * std::numbers::pi * s / m;
        out.push_back({Vec{c[0] + r * std::cos(th), c[1] + r * std::sin(th), 0}, {}});
      }
      return out;
    }
    const int m = std::max(12, per_edge);
    for (int i = 0; i < m; ++i) {
      const double th = std::numbers::pi * (i + 0.5) / m;
      for (int j = 0; j < 2 * m; ++j) {
        const double ph = std::numbers::pi * j / m;
        out.push_back({Vec{c[0] + r * std::sin(th) * std::cos(ph), c[1] + r * std::sin(th) * std::sin(ph),
                           c[2] + r * std::cos(th)},
                       {}});
      }
    }
    return out;
  }
  throw Error(ErrorKind::UnsupportedShape, "compatibility checks cover boxes and balls");
}

// Second derivative of h along the boundary at x, step `step` in arclength.
double surface_laplacian(const DataFunction& h, const Domain& domain, const BoundarySample& s, double step) {
  const int n = domain.dimension();
  if (n == 1) return 0.0;
  const double h0 = h.value(s.x);
  if (domain.shape() == Domain::Shape::Box) {
    double sum = 0.0;
    for (const Vec& t : s.tangents) {
      Vec xp = s.x;
      Vec xm = s.x;
      for (int k = 0; k < n; ++k) {
        xp[k] += step * t[k];
        xm[k] -= step * t[k];
      }
      sum += (h.value(xp) - 2.0 * h0 + h.value(xm)) / (step * step);
    }
    return sum;
  }
  // Ball: second differences along great circles through x.
  const Vec c = domain.center();
  const double r = domain.radius();
  Vec radial{};
  for (int k = 0; k < n; ++k) radial[k] = (s.x[k] - c[k]) / r;
  std::vector<Vec> tangents;
  if (n == 2) {
    tangents.push_back(Vec{-radial[1], radial[0], 0});
  } else {
    Vec ref = std::abs(radial[2]) < 0.9 ? Vec{0, 0, 1} : Vec{1, 0, 0};
    Vec t1{radial[1] * ref[2] - radial[2] * ref[1], radial[2] * ref[0] - radial[0] * ref[2],
           radial[0] * ref[1] - radial[1] * ref[0]};
    const double l = norm(t1, 3);
    for (auto& v : t1) v /= l;
    Vec t2{radial[1] * t1[2] - radial[2] * t1[1], radial[2] * t1[0] - radial[0] * t1[2],
           radial[0] * t1[1] - radial[1] * t1[0]};
    tangents = {t1, t2};
  }
  const double angle = step / r;
  double sum = 0.0;
  for (const Vec& t : tangents) {
    Vec xp{};
    Vec xm{};
    for (int k = 0; k < n; ++k) {
      xp[k] = c[k] + r * (std::cos(angle) * radial[k] + std::sin(angle) * t[k]);
      xm[k] = c[k] + r * (std::cos(angle) * radial[k] - std::sin(angle) * t[k]);
    }
    sum += (h.value(xp) - 2.0 * h0 + h.value(xm)) / (step * step);
  }
  return sum;
}

}  // namespace

CompatibilityReport check_compatibility(const DataFunction& f, const DataFunction& g, const DataFunction& h,
                                        const Domain& domain, double dx, double tol) {
  require(tol > 0.0 && dx > 0.0, ErrorKind::InvalidArgument, "tol and dx must be positive");
  CompatibilityReport report;
  const auto samples = sample_boundary(domain, 25);
  const double step = dx / 4.0;
  for (const auto& s : samples) {
    report.max_f_minus_h = std::max(report.max_f_minus_h, std::abs(f.value(s.x) - h.value(s.x)));
    report.max_g = std::max(report.max_g, std::abs(g.value(s.x)));
    report.max_surface_laplacian_h =
        std::max(report.max_surface_laplacian_h, std::abs(surface_laplacian(h, domain, s, step)));
  }
  report.samples = samples.size();
  report.passed = report.max_f_minus_h <= tol && report.max_g <= tol && report.max_surface_laplacian_h <= tol;
  return report;
}

}  // namespace latwave
