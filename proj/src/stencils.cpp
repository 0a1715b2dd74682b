#include "latwave/stencils.hpp"

#include "latwave/error.hpp"

namespace latwave {

namespace {

double at(const GridField& u, int level, std::size_t point) {
  if (!u.has_level(level)) throw Error(ErrorKind::MissingLevel, "time level " + std::to_string(level));
  return u.level(level)[point];
}

std::size_t neighbor(const LatticeClassification& c, std::size_t point, int axis, int sign) {
  if (!c.box.has_neighbor(point, axis, sign))
    throw Error(ErrorKind::MissingNeighbor, "axis " + std::to_string(axis) + " neighbour outside lattice");
  const std::size_t j = sign > 0 ? point + c.box.stride(axis) : point - c.box.stride(axis);
  if (!c.in_support(j))
    throw Error(ErrorKind::MissingNeighbor, "axis " + std::to_string(axis) + " neighbour outside support");
  return j;
}

}  // namespace

double delta_t_forward(const GridField& u, std::size_t point, int level) {
  return (at(u, level + 1, point) - at(u, level, point)) / u.spec().dt;
}

double delta_t_backward(const GridField& u, std::size_t point, int level) {
  return (at(u, level, point) - at(u, level - 1, point)) / u.spec().dt;
}

double delta_t_centered(const GridField& u, std::size_t point, int level) {
  return (at(u, level + 1, point) - at(u, level - 1, point)) / (2.0 * u.spec().dt);
}

double delta_t_second(const GridField& u, std::size_t point, int level) {
  const double dt = u.spec().dt;
  return (at(u, level + 1, point) - 2.0 * at(u, level, point) + at(u, level - 1, point)) / (dt * dt);
}

double delta_x_second(const GridField& u, std::size_t point, int level, int axis) {
  const auto& c = u.classification();
  const std::size_t up = neighbor(c, point, axis, +1);
  const std::size_t down = neighbor(c, point, axis, -1);
  const double dx = u.spec().dx;
  return (at(u, level, up) - 2.0 * at(u, level, point) + at(u, level, down)) / (dx * dx);
}

double discrete_laplacian(const GridField& u, std::size_t point, int level) {
  double acc = 0.0;
  for (int k = 0; k < u.spec().n; ++k) acc += delta_x_second(u, point, level, k);
  return acc;
}

double discrete_dalembert(const GridField& u, std::size_t point, int level) {
  return delta_t_second(u, point, level) - discrete_laplacian(u, point, level);
}

bool has_all_neighbors(const LatticeClassification& c, std::size_t point) {
  for (int k = 0; k < c.dimension(); ++k)
    for (int sign : {-1, 1}) {
      if (!c.box.has_neighbor(point, k, sign)) return false;
      const std::size_t j = sign > 0 ? point + c.box.stride(k) : point - c.box.stride(k);
      if (!c.in_support(j)) return false;
    }
  return true;
}

}  // namespace latwave
