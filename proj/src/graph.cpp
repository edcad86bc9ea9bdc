#include "vrdec/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "vrdec/rng.hpp"

namespace vrdec {

namespace {

std::vector<std::vector<int>> build_adjacency(int m, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(m);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

template <class T>
T parse_number(const std::string& token, const std::string& context) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("cannot parse '" + token + "' in " + context);
  }
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

bool is_connected(int m, const std::vector<Edge>& edges) {
  if (m <= 0) return false;
  const auto adj = build_adjacency(m, edges);
  std::vector<char> seen(m, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == m;
}

Graph::Graph(int m, std::vector<Edge> edges) : m_(m) {
  if (m < 2) throw std::invalid_argument("graph needs at least 2 nodes");
  std::set<Edge> unique;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= m || b >= m) {
      throw std::invalid_argument("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                  ") out of range for m=" + std::to_string(m));
    }
    if (a == b) throw std::invalid_argument("self-loop at node " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (!unique.insert({a, b}).second) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(a) + "," +
                                  std::to_string(b) + ")");
    }
  }
  edges_.assign(unique.begin(), unique.end());
  if (!is_connected(m_, edges_)) throw std::invalid_argument("graph not connected");
  adjacency_ = build_adjacency(m_, edges_);
}

bool Graph::has_edge(int i, int j) const {
  const auto& row = adjacency_[i];
  return std::binary_search(row.begin(), row.end(), j);
}

GraphSpec parse_graph_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("graph spec '" + text + "' must look like kind:args");
  }
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  const auto parts = split(rest, ':');
  auto want = [&](std::size_t count) {
    if (parts.size() != count) {
      throw std::invalid_argument("graph spec '" + text + "' has wrong number of fields");
    }
  };
  if (kind == "ring" || kind == "path" || kind == "complete") {
    want(1);
    const int m = parse_number<int>(parts[0], text);
    if (kind == "ring") return GraphSpec::ring(m);
    if (kind == "path") return GraphSpec::line(m);
    return GraphSpec::complete(m);
  }
  if (kind == "grid") {
    if (parts.empty() || parts.size() > 2) {
      throw std::invalid_argument("graph spec '" + text + "' has wrong number of fields");
    }
    const auto dims = split(parts.back(), 'x');
    if (dims.size() != 2) throw std::invalid_argument("grid spec needs RxC: '" + text + "'");
    GraphSpec spec = GraphSpec::grid(parse_number<int>(dims[0], text),
                                     parse_number<int>(dims[1], text));
    if (parts.size() == 2) spec.m = parse_number<int>(parts[0], text);
    return spec;
  }
  if (kind == "er") {
    want(3);
    return GraphSpec::erdos_renyi(parse_number<int>(parts[0], text),
                                  parse_number<double>(parts[1], text),
                                  parse_number<std::uint64_t>(parts[2], text));
  }
  if (kind == "edges") return GraphSpec::edge_list(rest);
  throw std::invalid_argument("unknown graph kind '" + kind + "'");
}

std::string to_string(const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphSpec::Kind::Ring: return "ring:" + std::to_string(spec.m);
    case GraphSpec::Kind::Path: return "path:" + std::to_string(spec.m);
    case GraphSpec::Kind::Complete: return "complete:" + std::to_string(spec.m);
    case GraphSpec::Kind::Grid:
      return "grid:" + std::to_string(spec.rows) + "x" + std::to_string(spec.cols);
    case GraphSpec::Kind::ErdosRenyi: {
      std::ostringstream out;
      out << "er:" << spec.m << ':' << spec.prob << ':' << spec.seed;
      return out.str();
    }
    case GraphSpec::Kind::EdgeList: return "edges:" + spec.path.string();
  }
  return "?";
}

Graph build_graph(const GraphSpec& spec) {
  using Kind = GraphSpec::Kind;
  if (spec.kind != Kind::EdgeList && spec.m < 2) {
    throw std::invalid_argument("graph needs m >= 2, got " + std::to_string(spec.m));
  }
  std::vector<Edge> edges;
  switch (spec.kind) {
    case Kind::Ring:
      for (int i = 0; i + 1 < spec.m; ++i) edges.emplace_back(i, i + 1);
      if (spec.m > 2) edges.emplace_back(0, spec.m - 1);
      return Graph(spec.m, std::move(edges));
    case Kind::Path:
      for (int i = 0; i + 1 < spec.m; ++i) edges.emplace_back(i, i + 1);
      return Graph(spec.m, std::move(edges));
    case Kind::Complete:
      for (int i = 0; i < spec.m; ++i)
        for (int j = i + 1; j < spec.m; ++j) edges.emplace_back(i, j);
      return Graph(spec.m, std::move(edges));
    case Kind::Grid: {
      if (spec.rows < 1 || spec.cols < 1 || spec.rows * spec.cols != spec.m) {
        throw std::invalid_argument("grid " + std::to_string(spec.rows) + "x" +
                                    std::to_string(spec.cols) + " does not have m=" +
                                    std::to_string(spec.m) + " nodes");
      }
      auto id = [&](int r, int c) { return r * spec.cols + c; };
      for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
          if (c + 1 < spec.cols) edges.emplace_back(id(r, c), id(r, c + 1));
          if (r + 1 < spec.rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
      }
      return Graph(spec.m, std::move(edges));
    }
    case Kind::ErdosRenyi: {
      if (!(spec.prob > 0.0 && spec.prob <= 1.0)) {
        throw std::invalid_argument("edge probability must lie in (0, 1]");
      }
      StreamRng rng(splitmix64_mix(spec.seed ^ 0x45524752415048ULL));
      constexpr int kMaxAttempts = 1000;
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        edges.clear();
        for (int i = 0; i < spec.m; ++i)
          for (int j = i + 1; j < spec.m; ++j)
            if (rng.uniform() < spec.prob) edges.emplace_back(i, j);
        if (is_connected(spec.m, edges)) return Graph(spec.m, std::move(edges));
      }
      throw std::runtime_error("no connected Erdos-Renyi sample after 1000 attempts");
    }
    case Kind::EdgeList:
      return load_edge_list(spec.path);
  }
  throw std::logic_error("unhandled graph kind");
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list " + path.string());
  std::vector<Edge> edges;
  int max_node = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string a, b, extra;
    if (!(tokens >> a)) continue;
    if (!(tokens >> b) || (tokens >> extra)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 'i j'");
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const int i = parse_number<int>(a, where);
    const int j = parse_number<int>(b, where);
    max_node = std::max({max_node, i, j});
    edges.emplace_back(i, j);
  }
  if (max_node < 1) throw std::runtime_error("edge list " + path.string() + " has no edges");
  return Graph(max_node + 1, std::move(edges));
}

}  // namespace vrdec
