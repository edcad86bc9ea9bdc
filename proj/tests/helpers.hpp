#pragma once

#include <memory>
#include <string>

#include "vrdec/gossip.hpp"
#include "vrdec/mixing.hpp"
#include "vrdec/objective.hpp"
#include "vrdec/rng.hpp"

namespace vrdec::testing {

inline std::shared_ptr<const GossipMatrix> gossip_of(const std::string& spec, double floor = 0.0) {
  return std::make_shared<const GossipMatrix>(
      spectral_shift(metropolis_weights(build_graph(parse_graph_spec(spec))), floor));
}

inline MixingOperator mixing_of(const std::string& spec, MixingKind kind) {
  const double floor = kind == MixingKind::Diging ? kDigingFloor : 0.0;
  return make_mixing(kind, gossip_of(spec, floor));
}

inline Stack random_stack(int rows, int cols, std::uint64_t seed) {
  StreamRng rng(seed);
  Stack x(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) x(i, j) = rng.normal();
  }
  return x;
}

inline Vector random_vector(int n, std::uint64_t seed) {
  return random_stack(n, 1, seed).col(0);
}

// Dense ridge shard with Gaussian features and targets.
inline Dataset random_shard(int n, int p, std::uint64_t seed, bool logistic = false) {
  StreamRng rng(seed);
  Dataset out;
  for (int j = 0; j < n; ++j) {
    Vector a(p);
    for (int k = 0; k < p; ++k) a(k) = rng.normal();
    Sample s;
    s.feature = a.sparseView();
    s.label = logistic ? (rng.uniform() < 0.5 ? -1.0 : 1.0) : rng.normal();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace vrdec::testing
