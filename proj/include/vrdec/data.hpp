#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vrdec/objective.hpp"

namespace vrdec {

struct LibsvmData {
  Dataset samples;
  int p = 0;  // max 1-based index seen, or the override
};

// Parses "label idx:val idx:val ..." lines with 1-based indices. Blank lines
// and '#' comments are skipped.
LibsvmData load_libsvm(const std::string& path, std::optional<int> p_override = std::nullopt);

// Shuffles (identity order when seed is empty), then deals the first m*n
// samples round-robin into m shards.
std::vector<Dataset> partition(const Dataset& samples, int m, int n,
                               std::optional<std::uint64_t> seed = std::nullopt);

// Scales every nonzero feature vector to unit Euclidean norm.
void normalize_rows(Dataset& samples);

// Unit-norm Gaussian features, labels sign(a^T x_planted) flipped with
// probability `label_noise`. Coordinate k is scaled by
// conditioning^(-k/(2(p-1))) before normalizing.
std::vector<Dataset> synthetic_logistic(int m, int n, int p, std::uint64_t seed,
                                        double label_noise = 0.1, double conditioning = 1.0);

}  // namespace vrdec
