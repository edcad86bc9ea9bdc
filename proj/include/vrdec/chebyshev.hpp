#pragma once

#include "vrdec/linalg.hpp"

namespace vrdec {

// Coefficients of the shifted-and-scaled Chebyshev polynomial
//   P_t(y) = 1 - T_t(c2 (1 - y)) / T_t(c2)
// for an operator L whose nonzero spectrum lies in [lambda_nm1, lambda1].
// c3 * L then has its nonzero spectrum in [1 - 1/c2, 1 + 1/c2].
struct ChebyshevPlan {
  double lambda1 = 0.0;
  double lambda_nm1 = 0.0;
  double gamma = 0.0;  // lambda_nm1 / lambda1
  double c1 = 0.0;     // (1 - sqrt(gamma)) / (1 + sqrt(gamma))
  double c2 = 0.0;     // (1 + gamma) / (1 - gamma); +inf when gamma == 1
  double c3 = 0.0;     // 2 / (lambda1 + lambda_nm1)
  int t = 0;

  // Worst-case deviation of P_t(c3 L) from 1 on the nonzero spectrum:
  // 2 c1^t / (1 + c1^{2t}).
  double deviation_bound() const;
};

// Degree t = ceil(3 / sqrt(gamma)) unless an explicit degree >= 1 is given.
ChebyshevPlan chebyshev_plan(double lambda1, double lambda_nm1, int degree = 0);

// Computes P_t(c3 L) x with the three-term recurrence on (a^s, z^s). Performs
// exactly t applications of `apply_l`.
Stack chebyshev_apply(const LinearAction& apply_l, const ChebyshevPlan& plan, const Stack& x);

Stack chebyshev_apply(const LinearAction& apply_l, double lambda1, double lambda_nm1,
                      const Stack& x);

}  // namespace vrdec
