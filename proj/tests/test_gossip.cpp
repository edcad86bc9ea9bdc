#include <gtest/gtest.h>

#include <cmath>

#include "vrdec/gossip.hpp"

using namespace vrdec;

namespace {

DenseMatrix path_metropolis() { return metropolis_weights(build_graph(GraphSpec::line(3))); }

}  // namespace

TEST(Metropolis, PathGraph) {
  DenseMatrix expected(3, 3);
  expected << 0.5, 0.5, 0.0,
              0.5, 0.0, 0.5,
              0.0, 0.5, 0.5;
  EXPECT_TRUE(path_metropolis().isApprox(expected, 0.0));
}

TEST(Metropolis, Triangle) {
  DenseMatrix expected(3, 3);
  expected << 0.0, 0.5, 0.5,
              0.5, 0.0, 0.5,
              0.5, 0.5, 0.0;
  EXPECT_EQ(metropolis_weights(build_graph(GraphSpec::ring(3))), expected);
}

TEST(Metropolis, CompleteGraph) {
  const DenseMatrix M = metropolis_weights(build_graph(GraphSpec::complete(5)));
  for (int i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(M(i, i), 0.0);
    for (int j = 0; j < 5; ++j) {
      if (i != j) EXPECT_DOUBLE_EQ(M(i, j), 0.25);
    }
  }
}

TEST(SpectralShift, PathGraphSpectrum) {
  const GossipMatrix W = spectral_shift(path_metropolis(), 0.0);
  EXPECT_NEAR(W.eigenvalues(0), 0.0, 1e-12);
  EXPECT_NEAR(W.eigenvalues(1), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(W.eigenvalues(2), 1.0, 1e-12);
  EXPECT_NEAR(W.sigma2, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(W.kappa_c, 3.0, 1e-10);
  EXPECT_NEAR(W.lambda_min_nonzero_of_IminusW, 1.0 / 3.0, 1e-12);
  // (M + 0.5 I) / 1.5
  const DenseMatrix expected = (path_metropolis() + 0.5 * DenseMatrix::Identity(3, 3)) / 1.5;
  EXPECT_TRUE(W.w.isApprox(expected, 1e-14));
}

TEST(SpectralShift, FloorSqrtTwoOverTwo) {
  const double omega = std::sqrt(2.0) / 2.0;
  const GossipMatrix W = spectral_shift(path_metropolis(), omega);
  EXPECT_NEAR(W.eigenvalues(0), omega, 1e-12);
  EXPECT_NEAR(W.eigenvalues(1), omega + (1.0 - omega) * 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(W.eigenvalues(2), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(W.omega_floor, omega);
}

TEST(SpectralShift, AlreadyShiftedMatrixUnchanged) {
  const GossipMatrix once = spectral_shift(path_metropolis(), 0.0);
  const GossipMatrix twice = spectral_shift(once.w, 0.0);
  EXPECT_TRUE(twice.w.isApprox(once.w, 1e-12));
}

TEST(SpectralShift, Invariants) {
  for (const char* spec : {"ring:16", "grid:3x3", "er:20:0.3:5", "complete:6"}) {
    const Graph g = build_graph(parse_graph_spec(spec));
    const DenseMatrix M = metropolis_weights(g);
    for (const double omega : {0.0, std::sqrt(2.0) / 2.0}) {
      const GossipMatrix W = spectral_shift(M, omega);
      const int m = W.size();
      EXPECT_EQ((W.w - W.w.transpose()).cwiseAbs().maxCoeff(), 0.0) << spec;
      EXPECT_LE((W.w.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12) << spec;
      EXPECT_GE(W.eigenvalues(0), omega - 1e-10) << spec;
      EXPECT_NEAR(W.eigenvalues(m - 1), 1.0, 1e-10) << spec;
      EXPECT_LT(W.sigma2, 1.0);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          if (i != j && !g.has_edge(i, j)) EXPECT_EQ(W.w(i, j), 0.0) << spec;
        }
      }
      // Affine image of the spectrum of M.
      const Vector mu = symmetric_eigenvalues(M);
      const double lmin = mu(0);
      for (int k = 0; k < m; ++k) {
        const double mapped = omega + (1.0 - omega) * (mu(k) - lmin) / (1.0 - lmin);
        EXPECT_NEAR(W.eigenvalues(k), mapped, 1e-10) << spec;
      }
      EXPECT_TRUE(DenseMatrix(W.sparse).isApprox(W.w, 0.0));
    }
  }
}

TEST(SpectralShift, RejectsNonStochastic) {
  DenseMatrix M = path_metropolis();
  M(0, 0) += 0.1;
  EXPECT_THROW(spectral_shift(M, 0.0), std::invalid_argument);
  EXPECT_THROW(spectral_shift(path_metropolis(), 1.0), std::invalid_argument);
}

TEST(SpectralShift, DenseCapAdvisesIterativeMode) {
  try {
    spectral_shift(path_metropolis(), 0.0, 2);
    FAIL() << "expected an exception";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("iterative"), std::string::npos);
  }
}
