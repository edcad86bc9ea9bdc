#include "vrdec/chebyshev.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vrdec {

namespace {
// Below this gap the nonzero spectrum is a single point and c2 is infinite;
// P_t then degenerates to 1 - (1 - y)^t.
constexpr double kFlatSpectrumGap = 1e-12;
}  // namespace

double ChebyshevPlan::deviation_bound() const {
  const double c1t = std::pow(c1, t);
  return 2.0 * c1t / (1.0 + c1t * c1t);
}

ChebyshevPlan chebyshev_plan(double lambda1, double lambda_nm1, int degree) {
  if (!(lambda_nm1 > 0.0)) {
    throw std::invalid_argument(
        "smallest nonzero eigenvalue must be positive (disconnected graph or bad spectrum)");
  }
  if (lambda1 < lambda_nm1) {
    throw std::invalid_argument("largest eigenvalue is below the smallest nonzero one");
  }
  ChebyshevPlan plan;
  plan.lambda1 = lambda1;
  plan.lambda_nm1 = lambda_nm1;
  plan.gamma = lambda_nm1 / lambda1;
  const double root = std::sqrt(plan.gamma);
  plan.c1 = (1.0 - root) / (1.0 + root);
  plan.c2 = 1.0 - plan.gamma <= kFlatSpectrumGap
                ? std::numeric_limits<double>::infinity()
                : (1.0 + plan.gamma) / (1.0 - plan.gamma);
  plan.c3 = 2.0 / (lambda1 + lambda_nm1);
  if (degree > 0) {
    plan.t = degree;
  } else {
    // 3/sqrt(gamma) is often an exact integer in exact arithmetic.
    plan.t = static_cast<int>(std::ceil(3.0 / root - 1e-9));
  }
  return plan;
}

Stack chebyshev_apply(const LinearAction& apply_l, const ChebyshevPlan& plan, const Stack& x) {
  if (plan.t < 1) throw std::invalid_argument("Chebyshev degree must be at least 1");
  const double c3 = plan.c3;

  if (std::isinf(plan.c2)) {
    Stack z = x;
    for (int s = 0; s < plan.t; ++s) z -= c3 * apply_l(z);
    return x - z;
  }

  const double c2 = plan.c2;
  double a_prev = 1.0;
  double a = c2;
  Stack z_prev = x;
  Stack z = c2 * (x - c3 * apply_l(x));
  for (int s = 1; s < plan.t; ++s) {
    const double a_next = 2.0 * c2 * a - a_prev;
    Stack z_next = 2.0 * c2 * (z - c3 * apply_l(z)) - z_prev;
    a_prev = a;
    a = a_next;
    z_prev = std::move(z);
    z = std::move(z_next);
  }
  return x - z / a;
}

Stack chebyshev_apply(const LinearAction& apply_l, double lambda1, double lambda_nm1,
                      const Stack& x) {
  return chebyshev_apply(apply_l, chebyshev_plan(lambda1, lambda_nm1), x);
}

}  // namespace vrdec
