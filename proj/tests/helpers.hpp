#pragma once

#include <random>
#include <vector>

#include "graphlike/core.hpp"

namespace testutil {

using graphlike::Edge;
using graphlike::EdgeId;
using graphlike::MetricGraph;
using graphlike::VertexId;

inline MetricGraph path_graph(const std::vector<double>& lengths) {
  std::vector<VertexId> vs;
  std::vector<Edge> es;
  for (std::size_t i = 0; i <= lengths.size(); ++i) vs.push_back(static_cast<VertexId>(i));
  for (std::size_t i = 0; i < lengths.size(); ++i)
    es.push_back(Edge{static_cast<EdgeId>(i), static_cast<VertexId>(i),
                      static_cast<VertexId>(i + 1), lengths[i]});
  return MetricGraph(vs, es);
}

// Two vertices 0,1 joined by parallel edges of the given lengths.
inline MetricGraph banana_graph(const std::vector<double>& lengths) {
  std::vector<Edge> es;
  for (std::size_t i = 0; i < lengths.size(); ++i)
    es.push_back(Edge{static_cast<EdgeId>(i), 0, 1, lengths[i]});
  return MetricGraph({0, 1}, es);
}

inline MetricGraph theta_graph() { return banana_graph({1.0, 1.0, 1.0}); }

inline MetricGraph triangle_graph(double a = 1.0, double b = 1.0, double c = 1.0) {
  return MetricGraph({0, 1, 2}, {Edge{0, 0, 1, a}, Edge{1, 1, 2, b}, Edge{2, 0, 2, c}});
}

// v0-v1-v2-v3 unit path plus a parallel v1-v2 edge.
inline MetricGraph dumbbell_graph() {
  return MetricGraph({0, 1, 2, 3}, {Edge{0, 0, 1, 1.0}, Edge{1, 1, 2, 1.0},
                                    Edge{2, 1, 2, 1.0}, Edge{3, 2, 3, 1.0}});
}

// Random connected multigraph on n vertices with m >= n-1 edges; lengths
// uniform in [lo, hi]. Spanning tree first, then random extra pairs.
inline MetricGraph random_connected_multigraph(std::mt19937_64& rng, int n, int m,
                                               double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> len(lo, hi);
  std::vector<VertexId> vs;
  for (int i = 0; i < n; ++i) vs.push_back(i);
  std::vector<Edge> es;
  EdgeId next = 0;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    es.push_back(Edge{next++, pick(rng), i, len(rng)});
  }
  while (static_cast<int>(es.size()) < m) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    es.push_back(Edge{next++, a, b, len(rng)});
  }
  return MetricGraph(vs, es);
}

// All-pairs shortest-path matrix by edge relaxation (Bellman-Ford style);
// independent of the library's Dijkstra.
inline std::vector<std::vector<double>> brute_force_all_pairs(const MetricGraph& g) {
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t n = g.vertex_count();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (const Edge& e : g.edges()) {
      std::size_t ui = g.vertex_index(e.u), vi = g.vertex_index(e.v);
      for (std::size_t s = 0; s < n; ++s) {
        if (d[s][ui] + e.length < d[s][vi]) {
          d[s][vi] = d[s][ui] + e.length;
          changed = true;
        }
        if (d[s][vi] + e.length < d[s][ui]) {
          d[s][ui] = d[s][vi] + e.length;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return d;
}

}  // namespace testutil
