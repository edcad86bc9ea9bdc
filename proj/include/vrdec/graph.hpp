#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace vrdec {

using Edge = std::pair<int, int>;

// Connected, undirected, simple graph on nodes 0..m-1. Edges are normalized
// to (lo, hi) and kept sorted.
class Graph {
 public:
  Graph(int m, std::vector<Edge> edges);

  int size() const { return m_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return adjacency_[i]; }
  int degree(int i) const { return static_cast<int>(adjacency_[i].size()); }
  bool has_edge(int i, int j) const;

 private:
  int m_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

bool is_connected(int m, const std::vector<Edge>& edges);

struct GraphSpec {
  enum class Kind { Ring, Path, Complete, Grid, ErdosRenyi, EdgeList };

  Kind kind = Kind::Ring;
  int m = 0;
  int rows = 0;
  int cols = 0;
  double prob = 0.0;
  std::uint64_t seed = 0;
  std::filesystem::path path;

  static GraphSpec ring(int m) { return of(Kind::Ring, m); }
  static GraphSpec line(int m) { return of(Kind::Path, m); }
  static GraphSpec complete(int m) { return of(Kind::Complete, m); }
  static GraphSpec grid(int rows, int cols) {
    GraphSpec s = of(Kind::Grid, rows * cols);
    s.rows = rows;
    s.cols = cols;
    return s;
  }
  static GraphSpec erdos_renyi(int m, double prob, std::uint64_t seed) {
    GraphSpec s = of(Kind::ErdosRenyi, m);
    s.prob = prob;
    s.seed = seed;
    return s;
  }
  static GraphSpec edge_list(std::filesystem::path path) {
    GraphSpec s;
    s.kind = Kind::EdgeList;
    s.path = std::move(path);
    return s;
  }

 private:
  static GraphSpec of(Kind kind, int m) {
    GraphSpec s;
    s.kind = kind;
    s.m = m;
    return s;
  }
};

// Textual forms: "ring:16", "path:5", "complete:8", "grid:7x7",
// "grid:49:7x7" (node count checked), "er:49:0.2:7" (m, prob, seed),
// "edges:<file>".
GraphSpec parse_graph_spec(const std::string& text);
std::string to_string(const GraphSpec& spec);

// Erdos-Renyi draws are resampled until connected (at most 1000 attempts).
Graph build_graph(const GraphSpec& spec);

// One "i j" pair per line, 0-indexed; '#' starts a comment.
Graph load_edge_list(const std::filesystem::path& path);

}  // namespace vrdec
