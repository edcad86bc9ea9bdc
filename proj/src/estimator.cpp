#include "vrdec/estimator.hpp"

#include <stdexcept>

namespace vrdec {

SamplingDistribution build_distribution(const LocalObjective& local) {
  const int n = local.real_count();
  const double total =
      local.smoothness().sum() + local.zero_count() * local.zero_smoothness();
  SamplingDistribution dist;
  dist.n_total = local.sample_count();
  dist.probs.resize(n);
  dist.cumulative.resize(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double pj = local.smoothness(j) / total;
    if (!(pj > 0.0)) throw std::invalid_argument("sampling probabilities must be positive");
    dist.probs(j) = pj;
    acc += pj;
    dist.cumulative[static_cast<std::size_t>(j)] = acc;
  }
  if (local.zero_count() > 0) {
    dist.zero_block_prob = local.zero_count() * local.zero_smoothness() / total;
  } else {
    // Absorb rounding so every u < 1 maps to a real sample.
    dist.cumulative.back() = 1.0;
  }
  return dist;
}

VRNodeState make_vr_state(const LocalObjective& local, const Vector& w, std::uint64_t master_seed,
                          int node) {
  VRNodeState state;
  state.w = w;
  state.grad_at_w = local.full_grad(w, state.evals);
  state.refreshes = 1;
  state.sample_rng = derive_stream(master_seed, static_cast<std::uint64_t>(node), StreamId::BatchSampling);
  state.coin_rng = derive_stream(master_seed, static_cast<std::uint64_t>(node), StreamId::SnapshotCoin);
  return state;
}

Vector vr_gradient(VRNodeState& state, const LocalObjective& local,
                   const SamplingDistribution& dist, const Vector& point,
                   const std::vector<int>& batch) {
  if (batch.empty()) throw std::invalid_argument("empty mini-batch");
  Vector correction = Vector::Zero(point.size());
  const double n_total = dist.n_total;
  for (const int j : batch) {
    if (j == kZeroSample) continue;
    const double weight = 1.0 / (n_total * dist.probs(j));
    correction += weight * (local.component_grad(j, point, state.evals) -
                            local.component_grad(j, state.w, state.evals));
    ++state.real_draws;
  }
  return correction / static_cast<double>(batch.size()) + state.grad_at_w;
}

bool snapshot_update(VRNodeState& state, const LocalObjective& local, const Vector& x_new,
                     double prob, double coin) {
  if (!(prob > 0.0 && prob <= 1.0)) throw std::invalid_argument("snapshot probability must be in (0, 1]");
  if (!(coin < prob)) return false;
  state.w = x_new;
  state.grad_at_w = local.full_grad(x_new, state.evals);
  ++state.refreshes;
  return true;
}

bool snapshot_update(VRNodeState& state, const LocalObjective& local, const Vector& x_new,
                     double prob) {
  return snapshot_update(state, local, x_new, prob, state.coin_rng.uniform());
}

}  // namespace vrdec
