#pragma once

// Incremental component/diameter bookkeeping used by the edge-cut greedy and
// the decomposition driver. Internal to the library.

#include <algorithm>
#include <limits>
#include <memory>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graphlike/core.hpp"

namespace graphlike::internal {

struct CutComponent {
  std::vector<VertexId> vertices;  // sorted
  std::vector<EdgeId> edges;       // surviving edges, sorted
  double edge_length = 0.0;        // upper bound for the diameter
  mutable double diameter = -1.0;  // exact vertex-pair diameter, lazy
  mutable VertexId witness_x = 0, witness_y = 0;
  mutable double sweep_lower = -1.0;  //双-sweep lower bound, lazy
};

class CutEngine {
 public:
  /// The engine owns a snapshot of the graph restricted to `edges` (plus the
  /// given isolated vertices); pass the full edge set for a whole graph.
  CutEngine(const MetricGraph& g, std::vector<VertexId> vertices,
            std::vector<EdgeId> edges)
      : g_(&g) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    for (VertexId v : vertices) {
      vindex_.emplace(v, ids_.size());
      ids_.push_back(v);
    }
    adjacency_.assign(ids_.size(), {});
    for (EdgeId eid : edges) {
      const Edge& e = g.edge(eid);
      auto iu = vindex_.find(e.u);
      auto iv = vindex_.find(e.v);
      if (iu == vindex_.end() || iv == vindex_.end())
        throw Error(ErrorCode::invalid_argument, "engine edge outside vertex scope");
      std::size_t idx = edges_.size();
      edges_.push_back(&g.edges()[g.edge_index(eid)]);
      alive_.push_back(1);
      eslot_.emplace(eid, idx);
      adjacency_[iu->second].push_back(idx);
      adjacency_[iv->second].push_back(idx);
    }
    rebuild_all();
  }

  static CutEngine whole_graph(const MetricGraph& g) {
    std::vector<EdgeId> edges;
    edges.reserve(g.edge_count());
    for (const Edge& e : g.edges()) edges.push_back(e.id);
    return CutEngine(g, g.vertex_ids(), std::move(edges));
  }

  bool has_edge_alive(EdgeId e) const {
    auto it = eslot_.find(e);
    return it != eslot_.end() && alive_[it->second];
  }

  double cut_length() const { return cut_length_; }
  const std::vector<EdgeId>& cut() const { return cut_; }

  /// Remove a batch of edges, splitting the affected components.
  void remove(const std::vector<EdgeId>& batch) {
    std::unordered_set<std::size_t> affected;
    for (EdgeId eid : batch) {
      auto it = eslot_.find(eid);
      if (it == eslot_.end())
        throw Error(ErrorCode::unknown_edge, "edge " + std::to_string(eid));
      if (!alive_[it->second]) continue;
      alive_[it->second] = 0;
      cut_.push_back(eid);
      cut_length_ += edges_[it->second]->length;
      affected.insert(comp_of_.at(vindex_.at(edges_[it->second]->u)));
    }
    for (std::size_t ci : affected) split_component(ci);
  }

  /// True when every component's diameter is < delta. Uses cheap bounds
  /// before exact evaluation.
  bool all_diameters_below(double delta) const {
    for (const auto& comp : comps_) {
      if (!comp) continue;
      if (comp->edge_length < delta) continue;
      if (sweep_lower(*comp) >= delta) return false;
      if (exact_diameter(*comp) >= delta) return false;
    }
    return true;
  }

  double sum_exact_diameters() const {
    double s = 0.0;
    for (const auto& comp : comps_)
      if (comp) s += exact_diameter(*comp);
    return s;
  }

  /// Live components, ordered by smallest contained vertex id.
  std::vector<const CutComponent*> components() const {
    std::vector<const CutComponent*> out;
    for (const auto& comp : comps_)
      if (comp) out.push_back(comp.get());
    std::sort(out.begin(), out.end(), [](const CutComponent* a, const CutComponent* b) {
      return a->vertices.front() < b->vertices.front();
    });
    return out;
  }

  double exact_diameter(const CutComponent& comp) const {
    if (comp.diameter >= 0.0) return comp.diameter;
    // All-pairs over the component's surviving edges.
    std::unordered_map<VertexId, std::size_t> local;
    for (VertexId v : comp.vertices) local.emplace(v, local.size());
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(comp.vertices.size());
    for (EdgeId eid : comp.edges) {
      const Edge& e = g_->edge(eid);
      std::size_t a = local.at(e.u), b = local.at(e.v);
      adj[a].emplace_back(b, e.length);
      adj[b].emplace_back(a, e.length);
    }
    double best = 0.0;
    VertexId bx = comp.vertices.front(), by = comp.vertices.front();
    std::vector<double> dist;
    for (std::size_t s = 0; s < comp.vertices.size(); ++s) {
      local_dijkstra(adj, s, dist);
      for (std::size_t t = s; t < comp.vertices.size(); ++t) {
        if (dist[t] > best) {
          best = dist[t];
          bx = comp.vertices[s];
          by = comp.vertices[t];
        }
      }
    }
    comp.diameter = best;
    comp.witness_x = bx;
    comp.witness_y = by;
    return best;
  }

  std::pair<VertexId, VertexId> witness(const CutComponent& comp) const {
    exact_diameter(comp);
    return {comp.witness_x, comp.witness_y};
  }

 private:
  double sweep_lower(const CutComponent& comp) const {
    if (comp.sweep_lower >= 0.0) return comp.sweep_lower;
    std::unordered_map<VertexId, std::size_t> local;
    for (VertexId v : comp.vertices) local.emplace(v, local.size());
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(comp.vertices.size());
    for (EdgeId eid : comp.edges) {
      const Edge& e = g_->edge(eid);
      std::size_t a = local.at(e.u), b = local.at(e.v);
      adj[a].emplace_back(b, e.length);
      adj[b].emplace_back(a, e.length);
    }
    std::vector<double> dist;
    local_dijkstra(adj, 0, dist);
    std::size_t far = 0;
    for (std::size_t i = 0; i < dist.size(); ++i)
      if (dist[i] > dist[far]) far = i;
    local_dijkstra(adj, far, dist);
    double lb = 0.0;
    for (double d : dist) lb = std::max(lb, d);
    comp.sweep_lower = lb;
    return lb;
  }

  static void local_dijkstra(const std::vector<std::vector<std::pair<std::size_t, double>>>& adj,
                             std::size_t source, std::vector<double>& dist) {
    dist.assign(adj.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      for (auto [w, len] : adj[v]) {
        if (d + len < dist[w]) {
          dist[w] = d + len;
          heap.emplace(dist[w], w);
        }
      }
    }
  }

  void rebuild_all() {
    comps_.clear();
    comp_of_.assign(ids_.size(), SIZE_MAX);
    std::vector<char> seen(ids_.size(), 0);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (seen[i]) continue;
      build_component_from(i, seen);
    }
  }

  void build_component_from(std::size_t root, std::vector<char>& seen) {
    auto comp = std::make_unique<CutComponent>();
    std::vector<std::size_t> queue{root};
    seen[root] = 1;
    std::vector<std::size_t> edge_idx;
    while (!queue.empty()) {
      std::size_t vi = queue.back();
      queue.pop_back();
      comp->vertices.push_back(ids_[vi]);
      for (std::size_t ei : adjacency_[vi]) {
        if (!alive_[ei]) continue;
        edge_idx.push_back(ei);
        const Edge* e = edges_[ei];
        std::size_t other = vindex_.at(e->u) == vi ? vindex_.at(e->v) : vindex_.at(e->u);
        if (!seen[other]) {
          seen[other] = 1;
          queue.push_back(other);
        }
      }
    }
    std::sort(edge_idx.begin(), edge_idx.end());
    edge_idx.erase(std::unique(edge_idx.begin(), edge_idx.end()), edge_idx.end());
    for (std::size_t ei : edge_idx) {
      comp->edges.push_back(edges_[ei]->id);
      comp->edge_length += edges_[ei]->length;
    }
    std::sort(comp->vertices.begin(), comp->vertices.end());
    std::sort(comp->edges.begin(), comp->edges.end());
    std::size_t slot = comps_.size();
    for (VertexId v : comp->vertices) comp_of_[vindex_.at(v)] = slot;
    comps_.push_back(std::move(comp));
  }

  void split_component(std::size_t ci) {
    if (ci >= comps_.size() || !comps_[ci]) return;
    std::vector<VertexId> vertices = comps_[ci]->vertices;
    comps_[ci].reset();
    std::vector<char> seen(ids_.size(), 1);
    for (VertexId v : vertices) seen[vindex_.at(v)] = 0;
    for (VertexId v : vertices) {
      std::size_t vi = vindex_.at(v);
      if (!seen[vi]) build_component_from(vi, seen);
    }
  }

  const MetricGraph* g_;
  std::vector<VertexId> ids_;
  std::unordered_map<VertexId, std::size_t> vindex_;
  std::vector<const Edge*> edges_;
  std::unordered_map<EdgeId, std::size_t> eslot_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<char> alive_;
  std::vector<EdgeId> cut_;
  double cut_length_ = 0.0;
  std::vector<std::unique_ptr<CutComponent>> comps_;
  std::vector<std::size_t> comp_of_;
};

}  // namespace graphlike::internal
