#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "latwave/data_function.hpp"
#include "latwave/lattice.hpp"
#include "latwave/leapfrog.hpp"

namespace latwave {

/// b(x) lap v = sigma(x) v at interior points, v = h on the boundary.
/// Interior rows where b and sigma both vanish use the plain Laplacian, so
/// b = sigma = 0 gives the discrete harmonic extension of h.
struct EllipticProblem {
  std::shared_ptr<const LatticeClassification> classification;
  DataFunction b;
  DataFunction sigma;
  DataFunction h;
};

/// Rows and unknowns follow classification->support() order.
struct AssembledSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<std::size_t> unknowns;  // box index per row
};

AssembledSystem assemble(const EllipticProblem& problem);

enum class EllipticMethod { Auto, ConjugateGradient, Dense };

struct EllipticSolution {
  std::vector<double> v;  // box-sized, zero outside the support
  double residual = 0.0;  // max over interior of |b lap v - sigma v|
  double scale = 0.0;     // max over interior of (|b| 2n/dx^2 + |sigma|) max|v|
  std::string method;     // "cg", "dense" or "sparse-lu"
  int iterations = 0;
};

/// Conjugate gradients (Jacobi preconditioned) on -lap + sigma/b when b > 0
/// and sigma >= 0, dense LU for up to 4096 unknowns otherwise, sparse LU
/// beyond that. Throws singular-system when no solve succeeds.
EllipticSolution assemble_and_solve(const EllipticProblem& problem, EllipticMethod method = EllipticMethod::Auto);

/// max over interior points of |b lap v - sigma v|, computed from the stencil.
double elliptic_residual(const EllipticProblem& problem, std::span<const double> v);

/// u = phi + v: v solves the elliptic problem with boundary data h, and phi
/// is the zero-boundary wave problem with data (f - v, g) and forcing w.
struct SplitProblem {
  EllipticSolution elliptic;
  DiscreteProblem shifted;

  /// phi + v on the support.
  std::vector<double> reconstruct(std::span<const double> phi) const;
};

SplitProblem split_pipeline(const Domain& domain, const LatticeSpec& spec, const DataFunction& f, const DataFunction& g,
                            const DataFunction& h, const DataFunction& b, const DataFunction& sigma,
                            const Forcing& w = {}, EllipticMethod method = EllipticMethod::Auto);

}  // namespace latwave
