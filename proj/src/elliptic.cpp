#include "latwave/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "latwave/error.hpp"
#include "latwave/stencils.hpp"

namespace latwave {

namespace {

constexpr std::size_t kDenseLimit = 4096;

struct Coefficients {
  std::vector<double> b;  // per interior point, after the b = sigma = 0 substitution
  std::vector<double> sigma;
};

Coefficients sample_coefficients(const EllipticProblem& p) {
  const auto& c = *p.classification;
  Coefficients k;
  for (std::size_t i : c.interior) {
    const Vec x = c.position(i);
    double b = p.b.value(x);
    const double s = p.sigma.value(x);
    if (b == 0.0 && s == 0.0) b = 1.0;
    k.b.push_back(b);
    k.sigma.push_back(s);
  }
  return k;
}

void check_problem(const EllipticProblem& p) {
  require(p.classification != nullptr, ErrorKind::InvalidArgument, "elliptic problem has no lattice");
  require(!p.classification->free_space, ErrorKind::UnsupportedShape, "elliptic problems need a bounded domain");
  for (std::size_t i : p.classification->interior)
    require(has_all_neighbors(*p.classification, i), ErrorKind::MissingNeighbor, "interior point without neighbours");
}

// Interior-only system after moving boundary values to the right-hand side.
// spd = true gives -lap + sigma/b, otherwise b lap - sigma.
void reduced_system(const EllipticProblem& p, const Coefficients& k, const std::vector<double>& h_box, bool spd,
                    Eigen::SparseMatrix<double>& A, Eigen::VectorXd& rhs) {
  const auto& c = *p.classification;
  const int n = c.dimension();
  const double dx2 = c.dx * c.dx;
  std::unordered_map<std::size_t, int> row_of;
  for (std::size_t r = 0; r < c.interior.size(); ++r) row_of[c.interior[r]] = r;
  std::vector<Eigen::Triplet<double>> trip;
  rhs = Eigen::VectorXd::Zero(c.interior.size());
  for (std::size_t r = 0; r < c.interior.size(); ++r) {
    const std::size_t i = c.interior[r];
    const double off = spd ? -1.0 / dx2 : k.b[r] / dx2;
    const double diag = spd ? 2.0 * n / dx2 + k.sigma[r] / k.b[r] : -2.0 * n * k.b[r] / dx2 - k.sigma[r];
    trip.emplace_back(r, r, diag);
    for (int ax = 0; ax < n; ++ax)
      for (int sign : {-1, 1}) {
        const std::size_t j = sign > 0 ? i + c.box.stride(ax) : i - c.box.stride(ax);
        const auto it = row_of.find(j);
        if (it != row_of.end())
          trip.emplace_back(r, it->second, off);
        else
          rhs[r] -= off * h_box[j];
      }
  }
  A.resize(c.interior.size(), c.interior.size());
  A.setFromTriplets(trip.begin(), trip.end());
}

}  // namespace

AssembledSystem assemble(const EllipticProblem& problem) {
  check_problem(problem);
  const auto& c = *problem.classification;
  const auto k = sample_coefficients(problem);
  const int n = c.dimension();
  const double dx2 = c.dx * c.dx;
  AssembledSystem sys;
  sys.unknowns = c.support();
  std::unordered_map<std::size_t, int> row_of;
  for (std::size_t r = 0; r < sys.unknowns.size(); ++r) row_of[sys.unknowns[r]] = r;
  std::vector<Eigen::Triplet<double>> trip;
  sys.rhs = Eigen::VectorXd::Zero(sys.unknowns.size());
  std::size_t interior_row = 0;
  for (std::size_t r = 0; r < sys.unknowns.size(); ++r) {
    const std::size_t i = sys.unknowns[r];
    if (c.kinds[i] == PointKind::Boundary) {
      trip.emplace_back(r, r, 1.0);
      sys.rhs[r] = problem.h.value(c.position(i));
      continue;
    }
    const double b = k.b[interior_row], s = k.sigma[interior_row];
    ++interior_row;
    trip.emplace_back(r, r, -2.0 * n * b / dx2 - s);
    for (int ax = 0; ax < n; ++ax)
      for (int sign : {-1, 1}) {
        const std::size_t j = sign > 0 ? i + c.box.stride(ax) : i - c.box.stride(ax);
        trip.emplace_back(r, row_of.at(j), b / dx2);
      }
  }
  sys.matrix.resize(sys.unknowns.size(), sys.unknowns.size());
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

double elliptic_residual(const EllipticProblem& problem, std::span<const double> v) {
  const auto& c = *problem.classification;
  const auto k = sample_coefficients(problem);
  double worst = 0.0;
  for (std::size_t r = 0; r < c.interior.size(); ++r) {
    const std::size_t i = c.interior[r];
    worst = std::max(worst, std::abs(k.b[r] * laplacian_kernel(v, i, c.box, c.dx) - k.sigma[r] * v[i]));
  }
  return worst;
}

EllipticSolution assemble_and_solve(const EllipticProblem& problem, EllipticMethod method) {
  check_problem(problem);
  const auto& c = *problem.classification;
  const auto k = sample_coefficients(problem);
  EllipticSolution out;
  out.v.assign(c.box.size(), 0.0);
  for (std::size_t i : c.boundary) out.v[i] = problem.h.value(c.position(i));

  const std::size_t m = c.interior.size();
  bool spd = true;
  for (std::size_t r = 0; r < m; ++r) spd = spd && k.b[r] > 0.0 && k.sigma[r] >= 0.0;

  Eigen::VectorXd x;
  bool solved = false;
  if (m == 0) {
    solved = true;
    out.method = "none";
  }
  if (!solved && spd && method != EllipticMethod::Dense) {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd rhs;
    reduced_system(problem, k, out.v, true, A, rhs);
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-14);
    cg.setMaxIterations(std::max<int>(1000, 20 * static_cast<int>(m)));
    cg.compute(A);
    x = cg.solve(rhs);
    out.iterations = cg.iterations();
    out.method = "cg";
    solved = cg.info() == Eigen::Success && x.allFinite();
  }
  if (!solved && method == EllipticMethod::ConjugateGradient && !spd)
    throw Error(ErrorKind::InvalidArgument, "conjugate gradients need b > 0 and sigma >= 0");
  if (!solved) {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd rhs;
    reduced_system(problem, k, out.v, false, A, rhs);
    if (m <= kDenseLimit || method == EllipticMethod::Dense) {
      const Eigen::MatrixXd dense(A);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
      if (!(lu.rcond() > 1e-13))
        throw Error(ErrorKind::SingularSystem,
                    "elliptic matrix is singular (reciprocal condition " + std::to_string(lu.rcond()) + ")");
      x = lu.solve(rhs);
      out.method = "dense";
    } else {
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(A);
      if (lu.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "sparse LU failed: " + lu.lastErrorMessage());
      x = lu.solve(rhs);
      out.method = "sparse-lu";
    }
    if (!x.allFinite()) throw Error(ErrorKind::SingularSystem, "elliptic solve produced non-finite values");
  }
  for (std::size_t r = 0; r < m; ++r) out.v[c.interior[r]] = x[r];

  double vmax = 0.0, coef = 0.0;
  for (std::size_t i : c.support()) vmax = std::max(vmax, std::abs(out.v[i]));
  const double dx2 = c.dx * c.dx;
  for (std::size_t r = 0; r < m; ++r)
    coef = std::max(coef, std::abs(k.b[r]) * 2.0 * c.dimension() / dx2 + std::abs(k.sigma[r]));
  out.scale = coef * vmax;
  out.residual = elliptic_residual(problem, out.v);
  if (out.residual > 1e-6 * std::max(out.scale, 1e-300) && out.scale > 0.0)
    throw Error(ErrorKind::SingularSystem, "elliptic residual " + std::to_string(out.residual) + " too large");
  return out;
}

std::vector<double> SplitProblem::reconstruct(std::span<const double> phi) const {
  const auto& c = *shifted.classification;
  std::vector<double> u(c.box.size(), 0.0);
  for (std::size_t i : c.support()) u[i] = phi[i] + elliptic.v[i];
  return u;
}

SplitProblem split_pipeline(const Domain& domain, const LatticeSpec& spec, const DataFunction& f, const DataFunction& g,
                            const DataFunction& h, const DataFunction& b, const DataFunction& sigma, const Forcing& w,
                            EllipticMethod method) {
  auto c = std::make_shared<const LatticeClassification>(classify(domain, spec));
  const EllipticProblem ep{c, b, sigma, h};
  SplitProblem out{assemble_and_solve(ep, method), {}};
  auto& d = out.shifted;
  d.spec = spec;
  d.classification = c;
  d.f = f;
  d.g = g;
  d.forcing = w;
  d.f_samples.assign(c->box.size(), 0.0);
  for (std::size_t i : c->interior) d.f_samples[i] = f.value(c->position(i)) - out.elliptic.v[i];
  d.boundary_value.assign(c->boundary.size(), 0.0);
  return out;
}

}  // namespace latwave
