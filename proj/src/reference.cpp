#include "vrdec/reference.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace vrdec {

namespace {

constexpr int kDirectRidgeLimit = 4096;
constexpr int kCheckEvery = 10;

ReferenceSolution solve_ridge_direct(const Problem& problem, double tol) {
  const int p = problem.p;
  DenseMatrix h = DenseMatrix::Zero(p, p);
  Vector rhs = Vector::Zero(p);
  for (const auto& node : problem.nodes) {
    const double scale = 1.0 / node.sample_count();
    const SparseRowMatrix& a = node.features();
    const Eigen::SparseMatrix<double> ata = a.transpose() * a;
    h += scale * DenseMatrix(ata);
    h.diagonal().array() += node.mu();
    rhs += scale * (a.transpose() * node.labels());
  }
  const Eigen::LDLT<DenseMatrix> ldlt(h);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("ridge normal equations are singular");
  ReferenceSolution out;
  out.x = ldlt.solve(rhs);
  // A couple of refinement sweeps against the true gradient.
  for (int sweep = 0; sweep < 3; ++sweep) {
    const Vector g = problem.grad(out.x);
    out.grad_norm = g.norm();
    if (out.grad_norm <= tol) break;
    out.x -= ldlt.solve(g);
    ++out.iterations;
  }
  out.grad_norm = problem.grad(out.x).norm();
  out.f = problem.value(out.x);
  return out;
}

ReferenceSolution solve_accelerated(const Problem& problem, double tol, int max_iters) {
  double lipschitz = 0.0;
  double strong = 0.0;
  for (const auto& node : problem.nodes) {
    lipschitz += node.L_local();
    strong += node.mu();
  }
  const double root = std::sqrt(lipschitz / strong);
  const double momentum = (root - 1.0) / (root + 1.0);

  Vector x = Vector::Zero(problem.p);
  Vector y = x;
  double grad_norm = problem.grad(x).norm();
  int it = 0;
  while (grad_norm > tol) {
    if (it >= max_iters) {
      std::ostringstream msg;
      msg << "reference solver hit the iteration cap (" << max_iters
          << ") with gradient norm " << grad_norm << " > tol " << tol;
      throw std::runtime_error(msg.str());
    }
    const Vector x_next = y - problem.grad(y) / lipschitz;
    // Restart the momentum whenever it points uphill.
    if ((y - x_next).dot(x_next - x) > 0.0) {
      y = x_next;
    } else {
      y = x_next + momentum * (x_next - x);
    }
    x = x_next;
    ++it;
    if (it % kCheckEvery == 0) grad_norm = problem.grad(x).norm();
  }
  ReferenceSolution out;
  out.x = std::move(x);
  out.grad_norm = grad_norm;
  out.f = problem.value(out.x);
  out.iterations = it;
  return out;
}

}  // namespace

ReferenceSolution reference_solution(const Problem& problem, double tol, int max_iters) {
  if (!(tol > 0.0)) throw std::invalid_argument("reference tolerance must be positive");
  if (problem.family == LossFamily::Ridge && problem.p <= kDirectRidgeLimit) {
    return solve_ridge_direct(problem, tol);
  }
  return solve_accelerated(problem, tol, max_iters);
}

}  // namespace vrdec
