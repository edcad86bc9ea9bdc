#pragma once

#include <cstdint>
#include <vector>

#include "vrdec/estimator.hpp"
#include "vrdec/mixing.hpp"
#include "vrdec/params.hpp"

namespace vrdec {

// Iterates of one run, all stacked m x p. Which members are live depends on
// the method:
//   EXTRA family : x, x_prev, wx_prev, grad_prev, lam (= U lambda, diagnostic)
//   DIGing family: x, s, grad_prev, lam (= lambda, diagnostic)
//   Acc-EXTRA    : x, z, wz, lam (= U lambda)
//   Acc-DIGing   : x, z, wz, wwz, lam (= lambda), wlam (= W lambda)
// The w* members cache products with the effective gossip matrix so each
// iteration performs exactly the communications it is charged for.
struct SolverState {
  SolverParams params;
  int m = 0;
  int p = 0;

  Stack x;
  Stack x_prev;
  Stack wx_prev;
  Stack grad_prev;
  Stack s;
  Stack z;
  Stack y;
  Stack wz;
  Stack wwz;
  Stack lam;
  Stack wlam;

  std::vector<VRNodeState> vr;             // VR and Acc methods
  std::vector<SamplingDistribution> dists;  // VR and Acc methods
  std::vector<EvalCounter> batch_evals;     // EXTRA / DIGing

  long iter = 0;
  std::uint64_t cum_rounds = 0;
  int rounds_per_iteration = 1;
  int threads = 1;
  double max_dual_violation = 0.0;  // running max of |1^T lam|_inf / max(1, |lam|)

  const Method& method() const { return params.method; }
  // Raw count: 2 per real draw plus the real sample count per refresh.
  std::uint64_t evals(int node) const;
  // One per real draw plus the real sample count per refresh.
  std::uint64_t per_draw_evals(int node) const;
  std::uint64_t max_evals(bool per_draw = false) const;
};

// Gossip applications per iteration (before the Chebyshev factor t).
int gossips_per_iteration(Variant variant);

// Iteration 0: x^0 = w^0 = z^0 = 1 x0^T (x0 defaults to zero), lambda = 0,
// and the full gradient at x^0 (counted as a snapshot refresh). The first
// step() of a non-accelerated method then performs the x^1 / s^1 / w^1
// initialization. `threads` > 1 runs the per-node compute phase on that
// many workers; results are identical to the serial run.
SolverState make_solver(const Problem& problem, const MixingOperator& mixing,
                        const SolverParams& params, std::uint64_t seed, const Vector& x0 = Vector(),
                        int threads = 1);

void batch_step(SolverState& state, const Problem& problem, const MixingOperator& mixing);
void vr_step(SolverState& state, const Problem& problem, const MixingOperator& mixing);
void acc_step(SolverState& state, const Problem& problem, const MixingOperator& mixing);
// Dispatches on the method.
void step(SolverState& state, const Problem& problem, const MixingOperator& mixing);

// max over columns of |1^T lam| divided by max(1, |lam|_F).
double dual_violation(const Stack& lam);

}  // namespace vrdec
