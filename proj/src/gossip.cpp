#include "vrdec/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace vrdec {

DenseMatrix metropolis_weights(const Graph& g) {
  const int m = g.size();
  DenseMatrix M = DenseMatrix::Zero(m, m);
  for (const auto& [i, j] : g.edges()) {
    const double wij = 1.0 / std::max(g.degree(i), g.degree(j));
    M(i, j) = wij;
    M(j, i) = wij;
  }
  for (int i = 0; i < m; ++i) M(i, i) = 1.0 - M.row(i).sum();
  return M;
}

Vector symmetric_eigenvalues(const DenseMatrix& a, int dense_cap) {
  if (a.rows() > dense_cap) {
    throw std::runtime_error("m=" + std::to_string(a.rows()) +
                             " exceeds the dense eigensolver cap of " +
                             std::to_string(dense_cap) +
                             "; raise the cap or use an iterative spectrum estimate");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return solver.eigenvalues();
}

GossipMatrix spectral_shift(const DenseMatrix& M, double target_floor, int dense_cap) {
  const int m = static_cast<int>(M.rows());
  if (m < 2 || M.cols() != m) throw std::invalid_argument("mixing matrix must be square, m >= 2");
  if (!(target_floor >= 0.0 && target_floor < 1.0)) {
    throw std::invalid_argument("spectral floor must lie in [0, 1)");
  }
  if ((M - M.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("mixing matrix is not symmetric");
  }
  if ((M.rowwise().sum().array() - 1.0).abs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("mixing matrix rows do not sum to 1");
  }

  const Vector m_eigs = symmetric_eigenvalues(M, dense_cap);
  const double lambda_min = m_eigs(0);
  if (std::abs(m_eigs(m - 1) - 1.0) > 1e-10) {
    throw std::invalid_argument("largest eigenvalue of the mixing matrix is not 1");
  }

  const double scale = (1.0 - target_floor) / (1.0 - lambda_min);
  GossipMatrix out;
  out.w = scale * M;
  // Diagonal: omega + scale * (M_ii - lambda_min).
  for (int i = 0; i < m; ++i) out.w(i, i) = target_floor + scale * (M(i, i) - lambda_min);
  // Exact symmetry is kept by copying the upper triangle.
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) out.w(j, i) = out.w(i, j);

  out.sparse = out.w.sparseView(0.0, 0.0);
  out.sparse.makeCompressed();
  out.eigenvalues = symmetric_eigenvalues(out.w, dense_cap);
  out.omega_floor = target_floor;
  out.sigma2 = out.eigenvalues(m - 2);
  out.lambda_min_nonzero_of_IminusW = 1.0 - out.sigma2;

  if (out.eigenvalues(0) < target_floor - 1e-10 ||
      std::abs(out.eigenvalues(m - 1) - 1.0) > 1e-10) {
    throw std::logic_error("shifted spectrum left [omega, 1]");
  }
  if (!(out.sigma2 < 1.0 - 1e-12)) throw std::invalid_argument("graph not connected");
  out.kappa_c = 1.0 / (1.0 - out.sigma2);
  return out;
}

}  // namespace vrdec
