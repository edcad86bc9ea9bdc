#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "vrdec/reference.hpp"
#include "vrdec/solver.hpp"

using namespace vrdec;
using vrdec::testing::mixing_of;

namespace {

Stack grad_stack(const Problem& problem, const Stack& x) {
  Stack out(x.rows(), x.cols());
  EvalCounter counter;
  for (int i = 0; i < problem.m(); ++i) {
    out.row(i) = problem.nodes[i].full_grad(x.row(i).transpose(), counter).transpose();
  }
  return out;
}

DenseMatrix psd_sqrt(const DenseMatrix& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a);
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

struct DenseUV {
  DenseMatrix u;
  DenseMatrix vsq;
};

DenseUV dense_uv(const MixingOperator& mixing) {
  const DenseMatrix& w = mixing.base().w;
  const int m = mixing.size();
  const DenseMatrix eye = DenseMatrix::Identity(m, m);
  if (mixing.kind() == MixingKind::Extra) {
    const DenseMatrix half = 0.5 * (eye - w);
    return {psd_sqrt(half), half};
  }
  return {eye - w, eye - w * w};
}

// x^{k+1} = x^k - (alpha grad^k + U lambda^k + V^2 x^k), lambda^{k+1} = lambda^k + U x^{k+1}
std::vector<Stack> primal_dual_oracle(const Problem& problem, const DenseUV& uv, double alpha, int iters) {
  Stack x = Stack::Zero(problem.m(), problem.p);
  Stack lam = Stack::Zero(problem.m(), problem.p);
  std::vector<Stack> out{x};
  for (int k = 0; k < iters; ++k) {
    x = x - (alpha * grad_stack(problem, x) + uv.u * lam + uv.vsq * x);
    lam = lam + uv.u * x;
    out.push_back(x);
  }
  return out;
}

std::vector<Stack> extra_oracle(const Problem& problem, const DenseMatrix& w, double alpha, int iters) {
  const int m = problem.m();
  const DenseMatrix eye = DenseMatrix::Identity(m, m);
  const DenseMatrix wt = 0.5 * (eye + w);
  Stack prev = Stack::Zero(m, problem.p);
  Stack x = w * prev - alpha * grad_stack(problem, prev);
  std::vector<Stack> out{prev, x};
  for (int k = 1; k < iters; ++k) {
    Stack next = (eye + w) * x - wt * prev - alpha * (grad_stack(problem, x) - grad_stack(problem, prev));
    prev = x;
    x = next;
    out.push_back(x);
  }
  return out;
}

std::vector<Stack> diging_oracle(const Problem& problem, const DenseMatrix& w, double alpha, int iters) {
  Stack x = Stack::Zero(problem.m(), problem.p);
  Stack s = grad_stack(problem, x);
  std::vector<Stack> out{x};
  for (int k = 0; k < iters; ++k) {
    Stack next = w * x - alpha * s;
    s = w * s + grad_stack(problem, next) - grad_stack(problem, x);
    x = next;
    out.push_back(x);
  }
  return out;
}

double max_abs(const Stack& a) { return a.cwiseAbs().maxCoeff(); }

Problem small_ridge(int m = 5) { return make_ridge(m, 8, 4, 0.05, 7, 10.0); }

}  // namespace

TEST(Solver, ExtraMatchesDenseOracles) {
  const Problem problem = small_ridge();
  const MixingOperator mixing = mixing_of("ring:5", MixingKind::Extra);
  const SolverParams params = default_params(Method{Variant::Extra, false}, problem, mixing, {.alpha_multiplier = 5.0});
  const auto textbook = extra_oracle(problem, mixing.base().w, params.alpha, 10);
  const auto primal_dual = primal_dual_oracle(problem, dense_uv(mixing), params.alpha, 10);
  SolverState state = make_solver(problem, mixing, params, 1);
  for (int k = 1; k <= 10; ++k) {
    step(state, problem, mixing);
    EXPECT_LE(max_abs(state.x - textbook[k]), 1e-12) << k;
    EXPECT_LE(max_abs(state.x - primal_dual[k]), 1e-12) << k;
  }
}

TEST(Solver, DigingMatchesDenseOracles) {
  const Problem problem = small_ridge();
  const MixingOperator mixing = mixing_of("ring:5", MixingKind::Diging);
  const SolverParams params = default_params(Method{Variant::Diging, false}, problem, mixing, {.alpha_multiplier = 5.0});
  const auto textbook = diging_oracle(problem, mixing.base().w, params.alpha, 10);
  const auto primal_dual = primal_dual_oracle(problem, dense_uv(mixing), params.alpha, 10);
  SolverState state = make_solver(problem, mixing, params, 1);
  for (int k = 1; k <= 10; ++k) {
    step(state, problem, mixing);
    EXPECT_LE(max_abs(state.x - textbook[k]), 1e-12) << k;
    EXPECT_LE(max_abs(state.x - primal_dual[k]), 1e-12) << k;
  }
}

TEST(Solver, VrWithFullSnapshotsIsBatchMethod) {
  const Problem problem = make_ridge(5, 12, 4, 0.02, 3, 1.0);
  for (const auto& [vr, batch] : {std::pair{Variant::VrExtra, Variant::Extra}, std::pair{Variant::VrDiging, Variant::Diging}}) {
    const MixingOperator mixing = mixing_of("ring:5", mixing_kind(Method{vr, false}));
    SolverParams vr_params = default_params(Method{vr, false}, problem, mixing, {.snapshot_prob_override = 1.0});
    SolverParams batch_params = vr_params;
    batch_params.method.variant = batch;
    SolverState a = make_solver(problem, mixing, vr_params, 4);
    SolverState b = make_solver(problem, mixing, batch_params, 4);
    for (int k = 0; k < 50; ++k) {
      step(a, problem, mixing);
      step(b, problem, mixing);
      ASSERT_LE(max_abs(a.x - b.x), 1e-12) << k;
    }
  }
}

TEST(Solver, AcceleratedDegeneratesToZSequence) {
  const Problem problem = small_ridge();
  const MixingOperator mixing = mixing_of("ring:5", MixingKind::Extra);
  SolverParams params = default_params(Method{Variant::AccVrExtra, false}, problem, mixing);
  params.theta1 = 1.0;
  params.theta2 = 0.0;
  SolverState state = make_solver(problem, mixing, params, 2);
  for (int k = 0; k < 10; ++k) {
    const Stack z = state.z;
    step(state, problem, mixing);
    EXPECT_LE(max_abs(state.y - z), 1e-15);
    EXPECT_LE(max_abs(state.x - state.z), 1e-15);
  }
}

TEST(Solver, AcceleratedMatchesDenseOracle) {
  // Explicit U, V^2 and lambda. A second solver state replays the same
  // random draws through the public estimator.
  const Problem problem = small_ridge();
  for (const Variant v : {Variant::AccVrExtra, Variant::AccVrDiging}) {
    const MixingOperator mixing = mixing_of("ring:5", mixing_kind(Method{v, false}));
    const SolverParams params = default_params(Method{v, false}, problem, mixing);
    const DenseUV uv = dense_uv(mixing);
    SolverState state = make_solver(problem, mixing, params, 9);
    SolverState shadow = make_solver(problem, mixing, params, 9);  // supplies identical random draws
    const int m = problem.m();
    Stack x = state.x, z = state.z, lam = Stack::Zero(m, problem.p);
    const double t1 = params.theta1, t2 = params.theta2, a = params.alpha;
    const double shrink = problem.mu * a / t1;
    for (int k = 0; k < 15; ++k) {
      Stack w(m, problem.p);
      for (int i = 0; i < m; ++i) w.row(i) = shadow.vr[i].w.transpose();
      const Stack y = t1 * z + t2 * w + (1.0 - t1 - t2) * x;
      Stack g(m, problem.p);
      for (int i = 0; i < m; ++i) {
        const auto batch = sample_batch(shadow.dists[i], params.b, shadow.vr[i].sample_rng);
        g.row(i) = vr_gradient(shadow.vr[i], problem.nodes[i], shadow.dists[i], y.row(i).transpose(), batch).transpose();
      }
      const Stack z_next = (shrink * y + z - (a * g + uv.u * lam + t1 * uv.vsq * z) / t1) / (1.0 + shrink);
      lam = lam + t1 * uv.u * z_next;
      x = y + t1 * (z_next - z);
      z = z_next;
      for (int i = 0; i < m; ++i) snapshot_update(shadow.vr[i], problem.nodes[i], x.row(i).transpose(), params.snapshot_prob);
      step(state, problem, mixing);
      ASSERT_LE(max_abs(state.x - x), 1e-12) << to_string(params.method) << " " << k;
      ASSERT_LE(max_abs(state.z - z), 1e-12) << to_string(params.method) << " " << k;
    }
  }
}

TEST(Solver, AcceleratedStationaryAtSaddlePoint) {
  const Problem problem = small_ridge();
  const Vector xstar = reference_solution(problem).x;
  for (const Variant v : {Variant::AccVrExtra, Variant::AccVrDiging}) {
    const MixingOperator mixing = mixing_of("ring:5", mixing_kind(Method{v, false}));
    const SolverParams params = default_params(Method{v, false}, problem, mixing);
    SolverState state = make_solver(problem, mixing, params, 3, xstar);
    const Stack gstar = grad_stack(problem, state.x);
    // U lambda* = -alpha grad f(x*).
    const Stack target = -params.alpha * gstar;
    if (v == Variant::AccVrExtra) {
      state.lam = target;
    } else {
      const DenseMatrix u = dense_uv(mixing).u;
      const Stack lam = u.completeOrthogonalDecomposition().solve(DenseMatrix(target));
      ASSERT_LE(max_abs(u * lam - target), 1e-13);
      state.lam = lam;
      state.wlam = mixing.gossip(lam);
    }
    const Stack start = state.x;
    for (int k = 0; k < 20; ++k) step(state, problem, mixing);
    EXPECT_LE(max_abs(state.x - start), 1e-12) << to_string(params.method);
  }
}

TEST(Solver, DeterministicAndThreadIndependent) {
  const Problem problem = make_ridge(6, 20, 5, 0.01, 5, 10.0);
  for (const Variant v : {Variant::VrExtra, Variant::VrDiging, Variant::AccVrExtra, Variant::AccVrDiging}) {
    const MixingOperator mixing = mixing_of("ring:6", mixing_kind(Method{v, false}));
    const SolverParams params = default_params(Method{v, false}, problem, mixing);
    SolverState a = make_solver(problem, mixing, params, 42);
    SolverState b = make_solver(problem, mixing, params, 42);
    SolverState c = make_solver(problem, mixing, params, 42, Vector(), 3);
    for (int k = 0; k < 40; ++k) {
      step(a, problem, mixing);
      step(b, problem, mixing);
      step(c, problem, mixing);
    }
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.x, c.x);
    for (int i = 0; i < 6; ++i) EXPECT_EQ(a.evals(i), c.evals(i));
    SolverState d = make_solver(problem, mixing, params, 43);
    for (int k = 0; k < 40; ++k) step(d, problem, mixing);
    EXPECT_NE(a.x, d.x);
  }
}

TEST(Solver, RoundAccounting) {
  const Problem problem = make_ridge(9, 10, 3, 0.05, 1, 1.0);
  for (const Variant v : {Variant::Extra, Variant::Diging, Variant::VrExtra, Variant::VrDiging,
                          Variant::AccVrExtra, Variant::AccVrDiging}) {
    for (const bool ca : {false, true}) {
      const Method method{v, ca};
      const MixingOperator mixing = mixing_of("grid:3x3", mixing_kind(method));
      SolverState state = make_solver(problem, mixing, default_params(method, problem, mixing), 1);
      const int per_iter = (v == Variant::AccVrDiging ? 2 : 1) * (ca ? mixing.t() : 1);
      EXPECT_EQ(state.rounds_per_iteration, per_iter) << to_string(method);
      for (int k = 0; k < 7; ++k) step(state, problem, mixing);
      EXPECT_EQ(state.cum_rounds, 7u * per_iter) << to_string(method);
      EXPECT_EQ(state.iter, 7);
    }
  }
}

TEST(Solver, BatchEvaluationCount) {
  const Problem problem = make_ridge(5, 10, 3, 0.05, 1, 1.0);
  const MixingOperator mixing = mixing_of("ring:5", MixingKind::Extra);
  SolverState state = make_solver(problem, mixing, default_params(Method{Variant::Extra, false}, problem, mixing), 1);
  EXPECT_EQ(state.max_evals(), 10u);
  for (int k = 0; k < 4; ++k) step(state, problem, mixing);
  // The first step reuses the gradient at x^0.
  EXPECT_EQ(state.max_evals(), 40u);
  EXPECT_EQ(state.max_evals(true), 40u);
}

TEST(Solver, PerDrawEvaluationConvention) {
  const Problem problem = make_ridge(5, 10, 3, 0.05, 1, 1.0);
  const MixingOperator mixing = mixing_of("ring:5", MixingKind::Extra);
  SolverState state = make_solver(problem, mixing, default_params(Method{Variant::VrExtra, false}, problem, mixing), 1);
  for (int k = 0; k < 30; ++k) step(state, problem, mixing);
  for (int i = 0; i < 5; ++i) {
    const VRNodeState& node = state.vr[i];
    EXPECT_EQ(state.evals(i), 2 * node.real_draws + 10 * node.refreshes);
    EXPECT_EQ(state.per_draw_evals(i), node.real_draws + 10 * node.refreshes);
  }
}

TEST(Solver, DualFeasibility) {
  const Problem problem = make_ridge(9, 10, 3, 0.05, 1, 1.0);
  for (const Variant v : {Variant::Extra, Variant::Diging, Variant::VrExtra, Variant::VrDiging,
                          Variant::AccVrExtra, Variant::AccVrDiging}) {
    for (const bool ca : {false, true}) {
      const Method method{v, ca};
      const MixingOperator mixing = mixing_of("grid:3x3", mixing_kind(method));
      SolverState state = make_solver(problem, mixing, default_params(method, problem, mixing), 1);
      for (int k = 0; k < 200; ++k) step(state, problem, mixing);
      EXPECT_GT(state.lam.norm(), 0.0) << to_string(method);
      EXPECT_LE(state.max_dual_violation, 1e-9) << to_string(method);
    }
  }
  Stack lam(2, 1);
  lam << 3.0, -1.0;
  EXPECT_DOUBLE_EQ(dual_violation(lam), 2.0 / std::sqrt(10.0));
}

TEST(Solver, AcceleratedChebyshevOnLongRing) {
  const Problem problem = make_ridge(32, 20, 5, 1e-2, 3, 1.0);
  const Vector xstar = reference_solution(problem).x;
  const Method method{Variant::AccVrExtra, true};
  const MixingOperator mixing = mixing_of("ring:32", MixingKind::ExtraCa);
  SolverState state = make_solver(problem, mixing, default_params(method, problem, mixing), 1);
  double dist = 0.0;
  for (int k = 0; k < 3000; ++k) {
    step(state, problem, mixing);
    dist = (state.x.rowwise() - xstar.transpose()).squaredNorm() / 32.0;
    if (dist <= 1e-10) break;
  }
  EXPECT_LE(dist, 1e-10);
  EXPECT_EQ(state.cum_rounds, static_cast<std::uint64_t>(state.iter) * mixing.t());
}

TEST(Solver, RejectsMismatches) {
  const Problem problem = small_ridge();
  const MixingOperator extra = mixing_of("ring:5", MixingKind::Extra);
  const MixingOperator ring6 = mixing_of("ring:6", MixingKind::Extra);
  const SolverParams params = default_params(Method{Variant::VrExtra, false}, problem, extra);
  EXPECT_THROW(make_solver(problem, ring6, params, 1), std::invalid_argument);
  EXPECT_THROW(make_solver(problem, mixing_of("ring:5", MixingKind::Diging), params, 1), std::invalid_argument);
  EXPECT_THROW(make_solver(problem, extra, params, 1, Vector::Zero(2)), std::invalid_argument);
  SolverState state = make_solver(problem, extra, params, 1);
  EXPECT_THROW(acc_step(state, problem, extra), std::logic_error);
  EXPECT_THROW(batch_step(state, problem, extra), std::logic_error);
}
