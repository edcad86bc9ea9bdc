#pragma once

#include <functional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace vrdec {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

// Aggregate variable: one row per node, one column per coordinate (m x p).
using Stack = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// A linear map on m x p stacks acting identically on every column.
using LinearAction = std::function<Stack(const Stack&)>;

// Materializes the m x m matrix of a column-wise linear action.
inline DenseMatrix dense_of(const LinearAction& action, int m) {
  const Stack identity = Stack::Identity(m, m);
  return action(identity);
}

}  // namespace vrdec
