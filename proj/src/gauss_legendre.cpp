#include "latwave/gauss_legendre.hpp"

#include <cmath>
#include <numbers>

#include "latwave/error.hpp"

namespace latwave {

QuadratureRule gauss_legendre(int count, double lo, double hi) {
  require(count >= 1, ErrorKind::InvalidArgument, "gauss_legendre needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  // Newton on P_count from the Tricomi initial guesses; symmetric pairs.
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= count; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= count; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[count - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[count - 1 - i] = half * w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = mid;
  return rule;
}

}  // namespace latwave
