#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "vrdec/data.hpp"
#include "vrdec/estimator.hpp"
#include "vrdec/reference.hpp"

using namespace vrdec;
using vrdec::testing::random_shard;
using vrdec::testing::random_vector;

namespace {

Sample scalar_sample(double a, double y) {
  Vector v(1);
  v << a;
  Sample s;
  s.feature = v.sparseView();
  s.label = y;
  return s;
}

// Ridge node whose per-sample constants are 1 + mu and 3 + mu, scaled by mu
// so that they are exactly 1 and 3 up to the regularizer.
LocalObjective one_three_node() {
  return make_ridge({{scalar_sample(std::sqrt(1.0 - 1e-9), 0.0), scalar_sample(std::sqrt(3.0 - 1e-9), 0.0)}}, 1,
                    1e-9)
      .nodes[0];
}

Vector exact_expectation(VRNodeState& state, const LocalObjective& f, const SamplingDistribution& dist,
                         const Vector& x) {
  Vector total = Vector::Zero(x.size());
  for (int j = 0; j < f.real_count(); ++j) total += dist.probs(j) * vr_gradient(state, f, dist, x, {j});
  if (dist.zero_block_prob > 0.0) total += dist.zero_block_prob * vr_gradient(state, f, dist, x, {kZeroSample});
  return total;
}

}  // namespace

TEST(Sampling, UniformWhenConstantsEqual) {
  const Problem problem = make_logistic(synthetic_logistic(1, 8, 3, 1), 3, 0.1);
  const SamplingDistribution dist = build_distribution(problem.nodes[0]);
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(dist.probs(j), 1.0 / 8.0, 1e-15);
  EXPECT_EQ(dist.cumulative.back(), 1.0);
}

TEST(Sampling, ProportionalToSmoothness) {
  const SamplingDistribution dist = build_distribution(one_three_node());
  EXPECT_NEAR(dist.probs(0), 0.25, 1e-12);
  EXPECT_NEAR(dist.probs(1), 0.75, 1e-12);
  const std::vector<double> uniforms{0.1, 0.5, 0.9};
  std::size_t k = 0;
  const auto batch = sample_batch(dist, 3, [&] { return uniforms[k++]; });
  EXPECT_EQ(batch, (std::vector<int>{0, 1, 1}));
}

TEST(Sampling, ZeroBlockTakesRemainingMass) {
  // Lbar = 2 + mu over 2 samples; padding to 4 with synthetic L = Lbar makes
  // the zero block carry half of the mass.
  const LocalObjective base = one_three_node();
  const LocalObjective padded = base.with_zero_samples(4, base.Lbar_local());
  const SamplingDistribution dist = build_distribution(padded);
  EXPECT_NEAR(dist.zero_block_prob, 0.5, 1e-12);
  EXPECT_NEAR(dist.probs.sum() + dist.zero_block_prob, 1.0, 1e-15);
  EXPECT_EQ(dist.index_of(0.99), kZeroSample);
  EXPECT_EQ(dist.index_of(0.0), 0);
}

TEST(Sampling, SingleSample) {
  const LocalObjective f = make_ridge({{scalar_sample(2.0, 1.0)}}, 1, 0.5).nodes[0];
  const SamplingDistribution dist = build_distribution(f);
  StreamRng rng(3);
  for (const int j : sample_batch(dist, 50, rng)) EXPECT_EQ(j, 0);
}

TEST(Sampling, EmpiricalFrequencies) {
  const LocalObjective f = make_ridge({random_shard(6, 3, 2)}, 3, 0.1).nodes[0];
  const SamplingDistribution dist = build_distribution(f);
  StreamRng rng(12);
  const int draws = 100000;
  std::vector<int> counts(6, 0);
  for (const int j : sample_batch(dist, draws, rng)) ++counts[j];
  for (int j = 0; j < 6; ++j) {
    const double p = dist.probs(j);
    const double sigma = std::sqrt(p * (1.0 - p) / draws);
    EXPECT_NEAR(counts[j] / static_cast<double>(draws), p, 3.0 * sigma) << j;
  }
}

TEST(Estimator, ExactAtSnapshot) {
  const LocalObjective f = make_ridge({random_shard(5, 4, 1)}, 4, 0.1).nodes[0];
  const SamplingDistribution dist = build_distribution(f);
  const Vector w = random_vector(4, 2);
  VRNodeState state = make_vr_state(f, w, 1, 0);
  StreamRng rng(5);
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(vr_gradient(state, f, dist, w, sample_batch(dist, 3, rng)), state.grad_at_w);
  }
}

TEST(Estimator, UnbiasedByEnumeration) {
  for (const bool logistic : {false, true}) {
    const Problem problem = logistic ? make_logistic({random_shard(5, 3, 4, true)}, 3, 0.05)
                                     : make_ridge({random_shard(5, 3, 4)}, 3, 0.05);
    const LocalObjective& f = problem.nodes[0];
    const SamplingDistribution dist = build_distribution(f);
    VRNodeState state = make_vr_state(f, random_vector(3, 7), 1, 0);
    const Vector x = random_vector(3, 8);
    EvalCounter counter;
    const Vector truth = f.full_grad(x, counter);
    EXPECT_LE((exact_expectation(state, f, dist, x) - truth).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Estimator, UnbiasedOnPaddedNode) {
  const Problem original = make_ridge(1, 2, 2, 0.1, 3, 1.0);
  const Problem padded = zero_pad(original, 10.0 * std::max(original.kappa_s, 2.0));
  const LocalObjective& f = padded.nodes[0];
  const SamplingDistribution dist = build_distribution(f);
  EXPECT_GT(dist.zero_block_prob, 0.0);
  VRNodeState state = make_vr_state(f, random_vector(2, 1), 1, 0);
  const Vector x = random_vector(2, 2);
  EvalCounter counter;
  EXPECT_LE((exact_expectation(state, f, dist, x) - f.full_grad(x, counter)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Estimator, TwoDrawBatchEnumeration) {
  const LocalObjective f = one_three_node();
  const SamplingDistribution dist = build_distribution(f);
  VRNodeState state = make_vr_state(f, Vector::Constant(1, 0.7), 1, 0);
  const Vector x = Vector::Constant(1, -0.4);
  Vector total = Vector::Zero(1);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) total += dist.probs(a) * dist.probs(b) * vr_gradient(state, f, dist, x, {a, b});
  }
  EvalCounter counter;
  EXPECT_NEAR(total(0), f.full_grad(x, counter)(0), 1e-12);
}

TEST(Estimator, VarianceWithinBound) {
  const Problem problem = make_ridge({random_shard(5, 3, 9)}, 3, 0.05);
  const LocalObjective& f = problem.nodes[0];
  const Vector xstar = reference_solution(problem).x;
  const SamplingDistribution dist = build_distribution(f);
  const Vector x = random_vector(3, 1);
  VRNodeState state = make_vr_state(f, random_vector(3, 2), 1, 0);
  EvalCounter counter;
  const Vector truth = f.full_grad(x, counter);
  const Vector gstar = f.full_grad(xstar, counter);
  auto bregman = [&](const Vector& v) { return f.value(v) - f.value(xstar) - gstar.dot(v - xstar); };
  double variance = 0.0;
  for (int j = 0; j < 5; ++j) variance += dist.probs(j) * (vr_gradient(state, f, dist, x, {j}) - truth).squaredNorm();
  const double bound = 4.0 * f.Lbar_local() * (bregman(x) + bregman(state.w));
  EXPECT_GT(variance, 0.0);
  EXPECT_LE(variance, bound);
}

TEST(Snapshot, ProbabilityOneAlwaysRefreshes) {
  const LocalObjective f = make_ridge({random_shard(4, 2, 1)}, 2, 0.1).nodes[0];
  VRNodeState state = make_vr_state(f, Vector::Zero(2), 1, 0);
  for (int k = 0; k < 20; ++k) {
    const Vector x = random_vector(2, 100 + k);
    EXPECT_TRUE(snapshot_update(state, f, x, 1.0));
    EXPECT_EQ(state.w, x);
  }
  EXPECT_EQ(state.refreshes, 21u);
  EXPECT_THROW(snapshot_update(state, f, Vector::Zero(2), 0.0), std::invalid_argument);
}

TEST(Snapshot, CoinFrequency) {
  const LocalObjective f = make_ridge({random_shard(4, 2, 1)}, 2, 0.1).nodes[0];
  VRNodeState state = make_vr_state(f, Vector::Zero(2), 4, 2);
  int hits = 0;
  const int trials = 10000;
  for (int k = 0; k < trials; ++k) hits += snapshot_update(state, f, Vector::Zero(2), 0.1) ? 1 : 0;
  EXPECT_NEAR(hits / static_cast<double>(trials), 0.1, 3.0 * std::sqrt(0.09 / trials));
}

TEST(Estimator, EvaluationAudit) {
  const Problem original = make_ridge(1, 6, 3, 0.1, 2, 1.0);
  const Problem padded = zero_pad(original, 10.0 * std::max(original.kappa_s, 6.0));
  const LocalObjective& f = padded.nodes[0];
  const SamplingDistribution dist = build_distribution(f);
  VRNodeState state = make_vr_state(f, Vector::Zero(3), 1, 0);
  EXPECT_EQ(state.evals.count, 6u);
  std::uint64_t real = 0;
  std::uint64_t refreshes = 1;
  for (int k = 0; k < 200; ++k) {
    const auto batch = sample_batch(dist, 2, state.sample_rng);
    for (const int j : batch) real += j == kZeroSample ? 0 : 1;
    vr_gradient(state, f, dist, random_vector(3, k), batch);
    refreshes += snapshot_update(state, f, random_vector(3, 1000 + k), 0.05) ? 1 : 0;
  }
  EXPECT_GT(real, 0u);
  EXPECT_LT(real, 400u);
  EXPECT_EQ(state.real_draws, real);
  EXPECT_EQ(state.refreshes, refreshes);
  EXPECT_EQ(state.evals.count, 2 * real + 6 * refreshes);
}
