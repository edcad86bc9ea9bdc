#pragma once

#include "vrdec/graph.hpp"
#include "vrdec/linalg.hpp"

namespace vrdec {

inline constexpr int kDefaultDenseEigenCap = 2048;

// M_ij = 1/max{d(i), d(j)} on edges, diagonal absorbs the remainder.
DenseMatrix metropolis_weights(const Graph& g);

// Symmetric doubly stochastic mixing matrix with its spectrum. Immutable.
struct GossipMatrix {
  DenseMatrix w;
  SparseRowMatrix sparse;   // same entries as w, used for applications
  Vector eigenvalues;       // ascending
  double sigma2 = 0.0;      // second-largest eigenvalue
  double lambda_min_nonzero_of_IminusW = 0.0;  // 1 - sigma2
  double omega_floor = 0.0;
  double kappa_c = 0.0;     // 1 / (1 - sigma2)

  int size() const { return static_cast<int>(w.rows()); }
  double lambda_min() const { return eigenvalues(0); }
  Stack apply(const Stack& x) const { return sparse * x; }
};

// W = omega I + (1 - omega) (M - lambda_min I) / (1 - lambda_min). With
// omega = 0 this is the plain shift that makes the smallest eigenvalue zero.
GossipMatrix spectral_shift(const DenseMatrix& M, double target_floor,
                            int dense_cap = kDefaultDenseEigenCap);

// Eigenvalues (ascending) of a symmetric matrix; throws above the dense cap.
Vector symmetric_eigenvalues(const DenseMatrix& a, int dense_cap = kDefaultDenseEigenCap);

}  // namespace vrdec
