#pragma once

#include "vrdec/objective.hpp"

namespace vrdec {

struct ReferenceSolution {
  Vector x;
  double f = 0.0;          // sum_i f_(i)(x)
  double grad_norm = 0.0;  // |sum_i grad f_(i)(x)|
  int iterations = 0;
};

// Ridge with p <= 4096: direct solve of the regularized normal equations.
// Otherwise: accelerated full-batch gradient descent on the aggregate until
// the gradient norm is <= tol. Throws std::runtime_error on hitting max_iters.
ReferenceSolution reference_solution(const Problem& problem, double tol = 1e-10,
                                     int max_iters = 500000);

}  // namespace vrdec
