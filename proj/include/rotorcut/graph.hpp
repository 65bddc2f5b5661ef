#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rotorcut {

struct Edge {
  int i = 0;
  int j = 0;
  double w = 0.0;
};

/// Weighted simple undirected graph with 0-based vertices.
///
/// Immutable after construction. Construction rejects self-loops, repeated
/// unordered pairs and out-of-range endpoints.
class Graph {
 public:
  Graph(int n, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// w(i, j) = w(j, i); zero for non-edges.
  double weight(int i, int j) const;
  double total_weight() const;
  /// Edge count divided by n(n-1)/2.
  double density() const;

  /// Incident (neighbour, weight) pairs of vertex v.
  const std::vector<std::pair<int, double>>& neighbours(int v) const { return adjacency_[v]; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

/// One of +1/-1 per vertex.
using CutAssignment = std::vector<int>;

enum class ParseErrorKind {
  malformed_line,
  self_loop,
  duplicate_edge,
  index_out_of_range,
  too_few_vertices,
  edge_count_mismatch,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, const std::string& what)
      : std::runtime_error(what), kind_(kind), line_(line) {}
  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  ParseErrorKind kind_;
  int line_;
};

/// Gset-style edge list: "n m" then m lines "i j w", 1-indexed.
Graph parse_edge_list(std::string_view text);
Graph read_edge_list(const std::string& path);
/// Emits the same format with weights at round-trip precision.
std::string serialize_edge_list(const Graph& g);
void write_edge_list(const Graph& g, const std::string& path);

struct WeightMode {
  bool random = false;
  double lo = 0.0;
  double hi = 1.0;

  static WeightMode uniform_one() { return {}; }
  static WeightMode random_range(double lo, double hi) { return {true, lo, hi}; }
};

/// Simple graph with exactly num_edges edges drawn uniformly without
/// replacement. Random weights lie in the open interval (lo, hi) and are drawn
/// after the edge set, in sorted edge order.
Graph generate_graph(int n, std::int64_t num_edges, WeightMode mode, std::uint64_t seed);

/// 1/2 * sum_{ij} w_ij (1 - x_i x_j).
double cut_value(const Graph& g, const CutAssignment& x);

struct MaxCutResult {
  double value = 0.0;
  CutAssignment x;
};

inline constexpr int kBruteForceMaxVertices = 24;

/// Exhaustive search over the 2^(n-1) assignments with x[0] = +1.
MaxCutResult brute_force_max_cut(const Graph& g);

}  // namespace rotorcut
