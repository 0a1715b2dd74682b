#pragma once

#include <vector>

namespace latwave {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `count` nodes on [lo, hi], nodes ascending.
QuadratureRule gauss_legendre(int count, double lo = -1.0, double hi = 1.0);

}  // namespace latwave
