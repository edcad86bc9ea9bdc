#include "vrdec/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vrdec/graph.hpp"

namespace vrdec {

namespace {

using json = nlohmann::json;

std::string join_key(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError((where.empty() ? std::string("config") : where) + ": expected an object");
}

void reject_unknown(const json& j, const std::string& prefix, const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw ConfigError("unknown key '" + join_key(prefix, item.key()) + "'");
  }
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

long get_integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return j.get<long>();
}

std::uint64_t get_seed(const json& j, const std::string& key) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long>() < 0)) {
    throw ConfigError("'" + key + "' must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw ConfigError("'" + key + "' must be true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("'" + key + "' must be a string");
  return j.get<std::string>();
}

void positive(double v, const std::string& key) {
  if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive");
}

ProblemConfig parse_problem(const json& j, const std::filesystem::path& base_dir) {
  const std::string prefix = "problem";
  require_object(j, prefix);
  reject_unknown(j, prefix,
                 {"family", "n", "p", "mu", "seed", "conditioning", "label_noise", "data", "normalize",
                  "shuffle_seed"});
  ProblemConfig out;
  for (const auto& item : j.items()) {
    const std::string key = join_key(prefix, item.key());
    const json& v = item.value();
    if (item.key() == "family") {
      const std::string s = get_string(v, key);
      if (s == "ridge") out.family = LossFamily::Ridge;
      else if (s == "logistic") out.family = LossFamily::Logistic;
      else throw ConfigError("'" + key + "' must be \"ridge\" or \"logistic\"");
    } else if (item.key() == "n") {
      out.n = static_cast<int>(get_integer(v, key));
      if (out.n < 1) throw ConfigError("'" + key + "' must be positive");
    } else if (item.key() == "p") {
      out.p = static_cast<int>(get_integer(v, key));
      if (out.p < 1) throw ConfigError("'" + key + "' must be positive");
    } else if (item.key() == "mu") {
      out.mu = get_number(v, key);
      positive(out.mu, key);
    } else if (item.key() == "seed") {
      out.seed = get_seed(v, key);
    } else if (item.key() == "conditioning") {
      out.conditioning = get_number(v, key);
      if (!(out.conditioning >= 1.0)) throw ConfigError("'" + key + "' must be >= 1");
    } else if (item.key() == "label_noise") {
      out.label_noise = get_number(v, key);
      if (!(out.label_noise >= 0.0 && out.label_noise < 0.5)) throw ConfigError("'" + key + "' must be in [0, 0.5)");
    } else if (item.key() == "data") {
      std::filesystem::path path = get_string(v, key);
      out.data = path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    } else if (item.key() == "normalize") {
      out.normalize = get_bool(v, key);
    } else if (item.key() == "shuffle_seed") {
      out.shuffle_seed = get_seed(v, key);
    }
  }
  return out;
}

VariantConfig parse_variant(const json& j, const std::string& prefix) {
  VariantConfig out;
  if (j.is_string()) {
    try {
      out.method = parse_method(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("'" + prefix + "': " + e.what());
    }
    return out;
  }
  require_object(j, prefix);
  reject_unknown(j, prefix, {"name", "alpha_multiplier", "b", "snapshot_prob", "max_iters"});
  if (!j.contains("name")) throw ConfigError("missing key '" + prefix + ".name'");
  for (const auto& item : j.items()) {
    const std::string key = join_key(prefix, item.key());
    const json& v = item.value();
    if (item.key() == "name") {
      try {
        out.method = parse_method(get_string(v, key));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("'" + key + "': " + e.what());
      }
    } else if (item.key() == "alpha_multiplier") {
      out.alpha_multiplier = get_number(v, key);
      positive(out.alpha_multiplier, key);
    } else if (item.key() == "b") {
      out.b = static_cast<int>(get_integer(v, key));
      if (*out.b < 1) throw ConfigError("'" + key + "' must be >= 1");
    } else if (item.key() == "snapshot_prob") {
      out.snapshot_prob = get_number(v, key);
      if (!(*out.snapshot_prob > 0.0 && *out.snapshot_prob <= 1.0)) throw ConfigError("'" + key + "' must be in (0, 1]");
    } else if (item.key() == "max_iters") {
      out.max_iters = get_integer(v, key);
      if (*out.max_iters < 0) throw ConfigError("'" + key + "' must be >= 0");
    }
  }
  return out;
}

StopRule parse_stop(const json& j) {
  const std::string prefix = "stop";
  require_object(j, prefix);
  reject_unknown(j, prefix, {"max_iters", "target_mean_sq_dist", "target_subopt"});
  StopRule out;
  for (const auto& item : j.items()) {
    const std::string key = join_key(prefix, item.key());
    if (item.key() == "max_iters") {
      out.max_iters = get_integer(item.value(), key);
      if (out.max_iters < 1) throw ConfigError("'" + key + "' must be >= 1");
    } else if (item.key() == "target_mean_sq_dist") {
      out.target_mean_sq_dist = get_number(item.value(), key);
    } else if (item.key() == "target_subopt") {
      out.target_subopt = get_number(item.value(), key);
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(root, "");
  reject_unknown(root, "",
                 {"name", "problem", "graph", "variants", "stop", "seed", "output", "evals",
                  "full_trace_until", "thin_every", "threads", "auto_zero_pad", "acc_fallback",
                  "reference_tol"});
  ExperimentConfig out;
  for (const auto& item : root.items()) {
    const std::string& key = item.key();
    const json& v = item.value();
    if (key == "name") {
      out.name = get_string(v, key);
      if (out.name.empty() || out.name.find('/') != std::string::npos) {
        throw ConfigError("'name' must be a non-empty file stem");
      }
    } else if (key == "problem") {
      out.problem = parse_problem(v, base_dir);
    } else if (key == "graph") {
      out.graph = get_string(v, key);
      try {
        (void)parse_graph_spec(out.graph);
      } catch (const std::exception& e) {
        throw ConfigError("'graph': " + std::string(e.what()));
      }
    } else if (key == "variants") {
      if (!v.is_array()) throw ConfigError("'variants' must be a list");
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.variants.push_back(parse_variant(v[i], "variants[" + std::to_string(i) + "]"));
      }
    } else if (key == "stop") {
      out.stop = parse_stop(v);
    } else if (key == "seed") {
      out.seed = get_seed(v, key);
    } else if (key == "output") {
      out.output = std::filesystem::path(get_string(v, key));
    } else if (key == "evals") {
      const std::string s = get_string(v, key);
      if (s == "raw") out.evals = EvalConvention::Raw;
      else if (s == "per_draw") out.evals = EvalConvention::PerDraw;
      else throw ConfigError("'evals' must be \"raw\" or \"per_draw\"");
    } else if (key == "full_trace_until") {
      out.full_trace_until = get_integer(v, key);
      if (out.full_trace_until < 0) throw ConfigError("'full_trace_until' must be >= 0");
    } else if (key == "thin_every") {
      out.thin_every = get_integer(v, key);
      if (out.thin_every < 1) throw ConfigError("'thin_every' must be >= 1");
    } else if (key == "threads") {
      out.threads = static_cast<int>(get_integer(v, key));
      if (out.threads < 1) throw ConfigError("'threads' must be >= 1");
    } else if (key == "auto_zero_pad") {
      out.auto_zero_pad = get_bool(v, key);
    } else if (key == "acc_fallback") {
      out.acc_fallback = get_bool(v, key);
    } else if (key == "reference_tol") {
      out.reference_tol = get_number(v, key);
      positive(out.reference_tol, key);
    }
  }
  if (out.variants.empty()) throw ConfigError("'variants' must list at least one method");
  return out;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

std::filesystem::path default_output_path(const ExperimentConfig& config,
                                          const std::optional<std::filesystem::path>& out_dir) {
  const std::string file = config.name + ".csv";
  if (out_dir) return *out_dir / file;
  if (config.output) return *config.output;
  if (const char* env = std::getenv("VRDEC_OUT_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env) / file;
  }
  return std::filesystem::path(file);
}

}  // namespace vrdec
