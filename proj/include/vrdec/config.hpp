#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vrdec/objective.hpp"
#include "vrdec/params.hpp"

namespace vrdec {

// Invalid or unreadable configuration; the message names the key or path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemConfig {
  LossFamily family = LossFamily::Ridge;
  int n = 50;
  int p = 10;
  double mu = 1e-2;
  std::uint64_t seed = 1;
  double conditioning = 1.0;       // synthetic problems only
  double label_noise = 0.1;        // synthetic logistic only
  std::optional<std::filesystem::path> data;  // libsvm file; synthetic when absent
  bool normalize = true;           // unit-normalize libsvm features
  std::optional<std::uint64_t> shuffle_seed;  // libsvm partition shuffle
};

struct VariantConfig {
  Method method;
  double alpha_multiplier = 1.0;
  std::optional<int> b;
  std::optional<double> snapshot_prob;
  std::optional<long> max_iters;
};

enum class EvalConvention { Raw, PerDraw };

struct StopRule {
  long max_iters = 10000;
  std::optional<double> target_mean_sq_dist;
  std::optional<double> target_subopt;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ProblemConfig problem;
  std::string graph = "ring:5";
  std::vector<VariantConfig> variants;
  StopRule stop;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output;  // CSV path; see default_output_path
  EvalConvention evals = EvalConvention::Raw;
  long full_trace_until = 10000;  // every iteration up to here, then every `thin_every`-th
  long thin_every = 10;
  int threads = 1;
  bool auto_zero_pad = true;
  bool acc_fallback = true;
  double reference_tol = 1e-10;
};

// JSON text. Unknown keys, wrong types and out-of-range values raise
// ConfigError naming the key (e.g. "problem.mu"). Relative data paths are
// resolved against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// <out_dir>/<name>.csv when out_dir is given, else `output`, else
// $VRDEC_OUT_DIR/<name>.csv, else ./<name>.csv.
std::filesystem::path default_output_path(const ExperimentConfig& config,
                                          const std::optional<std::filesystem::path>& out_dir = {});

}  // namespace vrdec
