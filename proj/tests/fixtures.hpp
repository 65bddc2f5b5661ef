#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <string>
#include <vector>

#include "rotorcut/graph.hpp"
#include "rotorcut/rng.hpp"
#include "rotorcut/rotor.hpp"

namespace rotorcut::testing {

inline constexpr double kPi = std::numbers::pi;

inline Graph complete_graph(int n, double w = 1.0) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j, w});
  return Graph(n, edges);
}

inline Graph cycle_graph(int n, double w = 1.0) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w});
  return Graph(n, edges);
}

inline Graph complete_bipartite(int p, int q) {
  std::vector<Edge> edges;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) edges.push_back({i, p + j, 1.0});
  return Graph(p + q, edges);
}

inline Graph cube_graph() {
  std::vector<Edge> edges;
  for (int v = 0; v < 8; ++v)
    for (int bit = 0; bit < 3; ++bit) {
      const int u = v ^ (1 << bit);
      if (v < u) edges.push_back({v, u, 1.0});
    }
  return Graph(8, edges);
}

inline Graph petersen_graph() {
  std::vector<Edge> edges;
  for (int i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5, 1.0});      // outer cycle
    edges.push_back({i, i + 5, 1.0});            // spokes
    edges.push_back({5 + i, 5 + (i + 2) % 5, 1.0});  // inner pentagram
  }
  return Graph(10, edges);
}

struct NamedGraph {
  std::string name;
  Graph graph;
};

/// Unit-weight small-graph suite used for optimality checks.
inline std::vector<NamedGraph> small_graph_suite() {
  return {{"K3", complete_graph(3)},          {"K4", complete_graph(4)},
          {"C4", cycle_graph(4)},             {"C5", cycle_graph(5)},
          {"C6", cycle_graph(6)},             {"K3,3", complete_bipartite(3, 3)},
          {"Q3", cube_graph()},               {"Petersen", petersen_graph()}};
}

/// Erdos-Renyi style graph with random weights in (-1, 2) for property tests.
inline Graph random_graph(int n, double p, Rng& rng, bool signed_weights = true) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p)
        edges.push_back({i, j, signed_weights ? rng.uniform(-1.0, 2.0) : rng.uniform(0.1, 2.0)});
  if (edges.empty()) edges.push_back({0, 1, 1.0});
  return Graph(n, edges);
}

inline RotorConfig angles(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  int k = 0;
  for (double x : values) v[k++] = x;
  return RotorConfig(v);
}

}  // namespace rotorcut::testing
