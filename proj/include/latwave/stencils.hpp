#pragma once

#include <cstddef>
#include <span>

#include "latwave/grid_field.hpp"
#include "latwave/lattice.hpp"

namespace latwave {

// Difference quotients on stored levels. `point` is a lattice box index.

double delta_t_forward(const GridField& u, std::size_t point, int level);
double delta_t_backward(const GridField& u, std::size_t point, int level);
double delta_t_centered(const GridField& u, std::size_t point, int level);
/// (u(t+dt) - 2u(t) + u(t-dt)) / dt^2
double delta_t_second(const GridField& u, std::size_t point, int level);
/// (u(x+dx e_k) - 2u(x) + u(x-dx e_k)) / dx^2; missing-neighbor if either
/// neighbour is outside the support.
double delta_x_second(const GridField& u, std::size_t point, int level, int axis);
double discrete_laplacian(const GridField& u, std::size_t point, int level);
double discrete_dalembert(const GridField& u, std::size_t point, int level);

/// Whether all 2n axis neighbours of `point` are in the support.
bool has_all_neighbors(const LatticeClassification& c, std::size_t point);

/// Discrete Laplacian of one level at an index whose neighbours are known
/// to exist. Axes are summed in ascending order; every solver routes its
/// spatial operator through here so their arithmetic agrees bit for bit.
inline double laplacian_kernel(std::span<const double> u, std::size_t i, const LatticeBox& box, double dx) {
  const double dx2 = dx * dx;
  double acc = 0.0;
  for (int k = 0; k < box.dimension(); ++k) {
    const std::size_t s = box.stride(k);
    acc += (u[i + s] - 2.0 * u[i] + u[i - s]) / dx2;
  }
  return acc;
}

/// The same operators applied to callables u(x, t) (real or complex valued).
namespace symbolic {

template <class F>
auto delta_t_second(const F& u, const Vec& x, double t, double dt) {
  return (u(x, t + dt) - 2.0 * u(x, t) + u(x, t - dt)) / (dt * dt);
}

template <class F>
auto delta_x_second(const F& u, const Vec& x, double t, double dx, int axis) {
  Vec xp = x;
  Vec xm = x;
  xp[axis] += dx;
  xm[axis] -= dx;
  return (u(xp, t) - 2.0 * u(x, t) + u(xm, t)) / (dx * dx);
}

template <class F>
auto discrete_laplacian(const F& u, const Vec& x, double t, double dx, int n) {
  auto acc = delta_x_second(u, x, t, dx, 0);
  for (int k = 1; k < n; ++k) acc += delta_x_second(u, x, t, dx, k);
  return acc;
}

template <class F>
auto discrete_dalembert(const F& u, const Vec& x, double t, const LatticeSpec& spec) {
  return delta_t_second(u, x, t, spec.dt) - discrete_laplacian(u, x, t, spec.dx, spec.n);
}

}  // namespace symbolic

}  // namespace latwave
