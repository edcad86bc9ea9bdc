#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "vrdec/objective.hpp"
#include "vrdec/rng.hpp"

namespace vrdec {

// Returned by sample_batch for draws that land in the zero-sample block.
inline constexpr int kZeroSample = -1;

// p_j = L_j / (n' Lbar') over the real samples; the zero samples of a padded
// node share the remaining mass `zero_block_prob`.
struct SamplingDistribution {
  Vector probs;                    // real samples only
  std::vector<double> cumulative;  // prefix sums of probs
  double zero_block_prob = 0.0;
  int n_total = 0;

  int real_count() const { return static_cast<int>(probs.size()); }
  // Inverse CDF of a uniform draw in [0, 1).
  int index_of(double u) const {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) return zero_block_prob > 0.0 ? kZeroSample : real_count() - 1;
    return static_cast<int>(it - cumulative.begin());
  }
};

SamplingDistribution build_distribution(const LocalObjective& local);

// b i.i.d. draws with replacement; `uniform()` must return values in [0, 1).
template <class UniformSource>
std::vector<int> sample_batch(const SamplingDistribution& dist, int b, UniformSource&& uniform) {
  std::vector<int> batch(static_cast<std::size_t>(b));
  for (auto& j : batch) j = dist.index_of(uniform());
  return batch;
}

inline std::vector<int> sample_batch(const SamplingDistribution& dist, int b, StreamRng& rng) {
  return sample_batch(dist, b, [&rng] { return rng.uniform(); });
}

struct VRNodeState {
  Vector w;
  Vector grad_at_w;
  EvalCounter evals;           // raw: 2 per real draw + real count per refresh
  std::uint64_t real_draws = 0;
  std::uint64_t refreshes = 0;
  StreamRng sample_rng;
  StreamRng coin_rng;
};

// Snapshot at w with its full gradient. The initial refresh is counted.
VRNodeState make_vr_state(const LocalObjective& local, const Vector& w, std::uint64_t master_seed,
                          int node);

// (1/b) sum_{j in batch} (grad f_j(point) - grad f_j(w)) / (n' p_j) + grad f(w).
Vector vr_gradient(VRNodeState& state, const LocalObjective& local,
                   const SamplingDistribution& dist, const Vector& point,
                   const std::vector<int>& batch);

// Sets w := x_new and refreshes the cached gradient when coin < prob.
bool snapshot_update(VRNodeState& state, const LocalObjective& local, const Vector& x_new,
                     double prob, double coin);
// Same, drawing the coin from the node's own stream.
bool snapshot_update(VRNodeState& state, const LocalObjective& local, const Vector& x_new,
                     double prob);

}  // namespace vrdec
