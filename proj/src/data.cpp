#include "vrdec/data.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vrdec/rng.hpp"

namespace vrdec {

namespace {

[[noreturn]] void parse_error(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& token, const std::string& path, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    parse_error(path, line, "bad number '" + token + "'");
  }
  if (used != token.size()) parse_error(path, line, "bad number '" + token + "'");
  return v;
}

}  // namespace

LibsvmData load_libsvm(const std::string& path, std::optional<int> p_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  struct Raw {
    std::vector<std::pair<int, double>> entries;
    double label;
  };
  std::vector<Raw> rows;
  int max_index = 0;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream tokens(text);
    std::string token;
    if (!(tokens >> token)) continue;
    Raw raw;
    raw.label = parse_double(token, path, line_no);
    int last = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) parse_error(path, line_no, "expected idx:val, got '" + token + "'");
      const double idx = parse_double(token.substr(0, colon), path, line_no);
      if (idx < 1 || idx != std::floor(idx)) parse_error(path, line_no, "feature index must be a positive integer");
      const int k = static_cast<int>(idx);
      if (k <= last) parse_error(path, line_no, "feature indices must be strictly increasing");
      last = k;
      raw.entries.emplace_back(k - 1, parse_double(token.substr(colon + 1), path, line_no));
      max_index = std::max(max_index, k);
    }
    rows.push_back(std::move(raw));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no samples");

  LibsvmData out;
  out.p = max_index;
  if (p_override) {
    if (*p_override < max_index) {
      throw std::runtime_error(path + ": feature index " + std::to_string(max_index) +
                               " exceeds dimension override " + std::to_string(*p_override));
    }
    out.p = *p_override;
  }
  if (out.p < 1) throw std::runtime_error(path + ": no features");
  out.samples.reserve(rows.size());
  for (const auto& raw : rows) {
    Sample s;
    s.feature.resize(out.p);
    s.feature.reserve(static_cast<Eigen::Index>(raw.entries.size()));
    for (const auto& [k, v] : raw.entries) s.feature.insert(k) = v;
    s.label = raw.label;
    out.samples.push_back(std::move(s));
  }
  return out;
}

std::vector<Dataset> partition(const Dataset& samples, int m, int n,
                               std::optional<std::uint64_t> seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("partition counts must be positive");
  const std::size_t need = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
  if (samples.size() < need) {
    throw std::invalid_argument("partition needs " + std::to_string(need) + " samples, have " +
                                std::to_string(samples.size()));
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (seed) {
    // Fisher-Yates with our own stream so the result does not depend on the
    // standard library's distribution implementation.
    StreamRng rng = derive_stream(*seed, 0, StreamId::Generator);
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
      std::swap(order[i - 1], order[std::min(j, i - 1)]);
    }
  }
  std::vector<Dataset> shards(m);
  for (std::size_t k = 0; k < need; ++k) shards[k % m].push_back(samples[order[k]]);
  return shards;
}

void normalize_rows(Dataset& samples) {
  for (auto& s : samples) {
    const double norm = s.feature.norm();
    if (norm > 0.0) s.feature /= norm;
  }
}

std::vector<Dataset> synthetic_logistic(int m, int n, int p, std::uint64_t seed, double label_noise,
                                        double conditioning) {
  if (m < 1 || n < 1 || p < 1) throw std::invalid_argument("counts must be positive");
  if (!(label_noise >= 0.0 && label_noise < 0.5)) {
    throw std::invalid_argument("label_noise must be in [0, 0.5)");
  }
  if (!(conditioning >= 1.0)) throw std::invalid_argument("conditioning must be >= 1");
  Vector scale(p);
  for (int k = 0; k < p; ++k) {
    const double frac = p > 1 ? static_cast<double>(k) / (p - 1) : 0.0;
    scale(k) = std::pow(conditioning, -0.5 * frac);
  }
  StreamRng rng = derive_stream(seed, 0, StreamId::Generator);
  Vector planted(p);
  for (int k = 0; k < p; ++k) planted(k) = rng.normal();
  planted *= std::sqrt(static_cast<double>(p)) / planted.norm();

  std::vector<Dataset> shards(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      Vector a(p);
      for (int k = 0; k < p; ++k) a(k) = scale(k) * rng.normal();
      a /= a.norm();
      double y = a.dot(planted) >= 0.0 ? 1.0 : -1.0;
      if (rng.uniform() < label_noise) y = -y;
      Sample s;
      s.feature = a.sparseView();
      s.label = y;
      shards[i].push_back(std::move(s));
    }
  }
  return shards;
}

}  // namespace vrdec
