#include "graphlike/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <unordered_set>

#include "cut_engine.hpp"

namespace graphlike::decomp {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<double> path_positions(const MetricGraph& g, const PathResult& path) {
  std::vector<double> pos{0.0};
  pos.reserve(path.vertices.size());
  for (EdgeId e : path.edges) pos.push_back(pos.back() + g.edge(e).length);
  return pos;
}

}  // namespace

PointRef Decomposition::map_point(const PointRef& p) const {
  if (is_vertex(p)) return p;
  EdgePoint cur = std::get<EdgePoint>(p);
  bool moved = true;
  while (moved) {
    moved = false;
    for (const SubdivisionRecord& rec : trims) {
      if (rec.parent != cur.edge) continue;
      if (cur.fraction == rec.fraction) return vertex_ref(rec.mid);
      if (cur.fraction < rec.fraction) {
        cur = EdgePoint{rec.left, cur.fraction / rec.fraction};
      } else {
        cur = EdgePoint{rec.right, (cur.fraction - rec.fraction) / (1.0 - rec.fraction)};
      }
      moved = true;
      break;
    }
  }
  return PointRef{std::in_place_index<1>, cur};
}

std::vector<PathInterval> bridged_subarcs(const MetricGraph& k, const PathResult& path,
                                          const std::vector<VertexId>& attach_points) {
  if (path.vertices.empty())
    throw Error(ErrorCode::invalid_argument, "empty reference path");
  std::unordered_map<VertexId, int> on_path;
  for (int i = 0; i < static_cast<int>(path.vertices.size()); ++i) {
    k.vertex_index(path.vertices[i]);
    on_path.emplace(path.vertices[i], i);
  }
  for (EdgeId e : path.edges)
    if (!k.has_edge(e))
      throw Error(ErrorCode::path_not_in_component, "path edge " + std::to_string(e));
  std::vector<double> pos = path_positions(k, path);
  std::unordered_set<EdgeId> path_edges(path.edges.begin(), path.edges.end());

  std::vector<PathInterval> out;
  auto emit = [&](int a, int b, bool seeded) {
    if (a > b) std::swap(a, b);
    out.push_back(PathInterval{a, b, pos[static_cast<std::size_t>(a)],
                               pos[static_cast<std::size_t>(b)], seeded});
  };

  // Seeded singletons for attach points (assumed on the path).
  for (VertexId q : attach_points) {
    auto it = on_path.find(q);
    if (it == on_path.end())
      throw Error(ErrorCode::path_not_in_component,
                  "attach point " + std::to_string(q) + " is not on the path");
    emit(it->second, it->second, true);
  }

  // Components of K minus the path vertices: minimal spanning subpath of the
  // attachment vertices. Chords span their endpoints.
  std::unordered_map<VertexId, std::size_t> comp_of;
  struct Span {
    int lo = std::numeric_limits<int>::max();
    int hi = -1;
  };
  std::vector<Span> spans;
  for (VertexId v : k.vertex_ids()) {
    if (on_path.count(v) || comp_of.count(v)) continue;
    std::size_t ci = spans.size();
    spans.emplace_back();
    std::vector<VertexId> queue{v};
    comp_of[v] = ci;
    while (!queue.empty()) {
      VertexId w = queue.back();
      queue.pop_back();
      for (std::uint32_t ei : k.incident(w)) {
        VertexId o = k.edges()[ei].other(w);
        if (on_path.count(o)) continue;
        if (!comp_of.count(o)) {
          comp_of[o] = ci;
          queue.push_back(o);
        }
      }
    }
  }
  for (const Edge& e : k.edges()) {
    if (path_edges.count(e.id)) continue;
    auto iu = on_path.find(e.u);
    auto iv = on_path.find(e.v);
    if (iu != on_path.end() && iv != on_path.end()) {
      emit(iu->second, iv->second, false);  // chord
    } else {
      std::size_t ci = comp_of.at(iu == on_path.end() ? e.u : e.v);
      for (auto it : {iu, iv}) {
        if (it == on_path.end()) continue;
        spans[ci].lo = std::min(spans[ci].lo, it->second);
        spans[ci].hi = std::max(spans[ci].hi, it->second);
      }
    }
  }
  for (const Span& s : spans) {
    if (s.hi < 0) continue;  // component not attached to the path
    emit(s.lo, s.hi, false);
  }
  return out;
}

SuperBridged maximal_super_bridged(const std::vector<PathInterval>& bridged) {
  if (bridged.empty())
    throw Error(ErrorCode::invalid_argument,
                "bridged list must contain the endpoint singletons");
  std::vector<PathInterval> sorted = bridged;
  std::sort(sorted.begin(), sorted.end(), [](const PathInterval& a, const PathInterval& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
  });
  SuperBridged out;
  PathInterval cur = sorted.front();
  auto flush = [&out](const PathInterval& iv) {
    (iv.seeded ? out.seeded : out.unseeded).push_back(iv);
  };
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const PathInterval& next = sorted[i];
    if (next.begin <= cur.end) {  // overlapping or abutting: merge
      if (next.end > cur.end) {
        cur.end = next.end;
        cur.end_pos = next.end_pos;
      }
      cur.seeded = cur.seeded || next.seeded;
    } else {
      flush(cur);
      cur = next;
    }
  }
  flush(cur);
  return out;
}

ComponentExtraction pseudo_edges_of_component(const MetricGraph& host, const MetricGraph& k,
                                              const PathResult& path,
                                              const std::vector<VertexId>& pi,
                                              const std::vector<PathInterval>& seeded) {
  std::unordered_set<VertexId> pi_set(pi.begin(), pi.end());
  std::unordered_map<VertexId, int> on_path;
  for (int i = 0; i < static_cast<int>(path.vertices.size()); ++i)
    on_path.emplace(path.vertices[i], i);

  // Which path edges are covered by a seeded arc?
  std::vector<char> covered(path.edges.size(), 0);
  for (const PathInterval& iv : seeded)
    for (int i = iv.begin; i < iv.end; ++i) covered[static_cast<std::size_t>(i)] = 1;
  std::unordered_map<EdgeId, std::size_t> path_edge_pos;
  for (std::size_t i = 0; i < path.edges.size(); ++i) path_edge_pos.emplace(path.edges[i], i);

  // Group K's edges: two edges connected when they share a non-Pi vertex.
  const auto& edges = k.edges();
  UnionFind uf(edges.size());
  {
    std::unordered_map<VertexId, std::size_t> first_edge_at;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (VertexId v : {edges[i].u, edges[i].v}) {
        if (pi_set.count(v)) continue;
        auto [it, fresh] = first_edge_at.emplace(v, i);
        if (!fresh) uf.unite(it->second, i);
      }
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < edges.size(); ++i) groups[uf.find(i)].push_back(i);

  ComponentExtraction out;
  for (auto& [root, members] : groups) {
    (void)root;
    std::vector<EdgeId> subset;
    double h1 = 0.0;
    bool meets = false;
    std::map<VertexId, int> degree_in;  // touched vertices -> edges into subset
    for (std::size_t ei : members) {
      const Edge& e = edges[ei];
      subset.push_back(e.id);
      h1 += e.length;
      ++degree_in[e.u];
      ++degree_in[e.v];
      auto pp = path_edge_pos.find(e.id);
      if (pp != path_edge_pos.end() && !covered[pp->second]) meets = true;
    }
    std::sort(subset.begin(), subset.end());
    std::vector<VertexId> frontier, interior, touched;
    for (const auto& [v, deg] : degree_in) {
      touched.push_back(v);
      if (pi_set.count(v) || host.degree(v) > static_cast<std::size_t>(deg))
        frontier.push_back(v);
      else
        interior.push_back(v);
    }
    if (!meets) {
      out.leftovers.push_back(LeftoverComponent{touched, subset, h1});
      continue;
    }
    bool ok = frontier.size() == 2;
    if (ok)
      for (VertexId f : frontier)
        if (degree_in[f] != 1) ok = false;
    if (!ok) {
      out.rejects.push_back(LeftoverComponent{touched, subset, h1});
      continue;
    }
    PseudoEdge pe;
    pe.edges = std::move(subset);
    pe.f0 = frontier[0];
    pe.f1 = frontier[1];
    pe.interior = std::move(interior);
    pe.h1 = h1;
    pe.d_endpoints = distance(host, vertex_ref(pe.f0), vertex_ref(pe.f1));
    pe.discrepancy = std::max(0.0, pe.h1 - pe.d_endpoints);
    pe.is_cut_edge = false;
    out.accepted.push_back(std::move(pe));
  }
  return out;
}

namespace {

struct WorkItem {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  double h1 = 0.0;
  int depth = 0;
};

struct DriverState {
  const RefinementSequence* seq = nullptr;  // null for standalone graphs
  int level = -1;
  MetricGraph host;
  DecomposeOptions opts;
  double sigma = 0.0;  // per-round slack factor
  std::vector<PseudoEdge> pseudo_edges;
  std::vector<WorkItem> final_leftovers;
  int max_depth_used = 0;
  int hdiam_violations = 0;
};

// Ordered cut candidates inside a scope: declared enumeration entries whose
// fragments are all in scope first, then remaining scope edges by id.
std::vector<std::vector<EdgeId>> cut_candidates(const DriverState& st,
                                                const std::vector<EdgeId>& scope_edges) {
  std::unordered_set<EdgeId> in_scope(scope_edges.begin(), scope_edges.end());
  std::vector<std::vector<EdgeId>> groups;
  std::unordered_set<EdgeId> grouped;
  if (st.seq) {
    for (int idx = 0;; ++idx) {
      std::optional<EnumeratedEdge> e = st.seq->entry(idx);
      if (!e || e->available_level > st.level) break;
      std::vector<EdgeId> frags = st.seq->entry_fragments(idx, st.level);
      bool all_in = true;
      for (EdgeId f : frags)
        if (!in_scope.count(f)) all_in = false;
      if (!all_in) continue;
      for (EdgeId f : frags) grouped.insert(f);
      groups.push_back(std::move(frags));
    }
  }
  std::vector<EdgeId> rest;
  for (EdgeId e : scope_edges)
    if (!grouped.count(e)) rest.push_back(e);
  std::sort(rest.begin(), rest.end());
  for (EdgeId e : rest) groups.push_back({e});
  return groups;
}

MetricGraph materialize(const MetricGraph& host, const std::vector<VertexId>& vertices,
                        const std::vector<EdgeId>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (EdgeId e : edges) es.push_back(host.edge(e));
  return MetricGraph(vertices, std::move(es), host.next_vertex_id(), host.next_edge_id());
}

void make_cut_pseudo_edge(DriverState& st, EdgeId eid) {
  const Edge& e = st.host.edge(eid);
  PseudoEdge pe;
  pe.edges = {eid};
  pe.f0 = std::min(e.u, e.v);
  pe.f1 = std::max(e.u, e.v);
  pe.h1 = e.length;
  pe.d_endpoints = distance(st.host, vertex_ref(pe.f0), vertex_ref(pe.f1));
  pe.discrepancy = 0.0;  // finite edges are realized exactly
  pe.is_cut_edge = true;
  st.pseudo_edges.push_back(std::move(pe));
}

// One decomposition round on a connected scope: choose a cut achieving the
// sumdiam slack, then run the path machinery per component.
std::vector<WorkItem> run_round(DriverState& st, const WorkItem& item) {
  st.max_depth_used = std::max(st.max_depth_used, item.depth);
  internal::CutEngine engine(st.host, item.vertices, item.edges);
  auto groups = cut_candidates(st, item.edges);
  std::size_t next_group = 0;

  if (item.depth == 0 && !st.opts.required_edges.empty())
    engine.remove(st.opts.required_edges);

  double slack = st.sigma * item.h1;
  auto current_h = [&engine] {
    return engine.cut_length() + engine.sum_exact_diameters();
  };
  auto extend_below = [&](double threshold) {
    while (!engine.all_diameters_below(threshold)) {
      if (next_group >= groups.size()) return false;
      engine.remove(groups[next_group++]);
    }
    return true;
  };
  double delta = 0.0;
  for (const internal::CutComponent* comp : engine.components())
    delta = std::max(delta, engine.exact_diameter(*comp));
  if (delta > 0.0) {
    for (int rounds = 0; rounds < 200; ++rounds) {
      bool achievable = extend_below(delta);
      if (!achievable) break;  // full local cut: h equals item.h1 exactly
      if (current_h() >= item.h1 - slack) {
        extend_below(delta / 2.0);  // one finer round: edges of diameter-scale
                                    // components come out individually
        break;
      }
      delta /= 2.0;
    }
  }

  for (EdgeId eid : engine.cut()) make_cut_pseudo_edge(st, eid);

  std::vector<WorkItem> children;
  for (const internal::CutComponent* comp : engine.components()) {
    if (comp->edges.empty()) continue;  // bare vertices become final leftovers later
    MetricGraph k = materialize(st.host, comp->vertices, comp->edges);
    double diam = engine.exact_diameter(*comp);
    auto [wx, wy] = engine.witness(*comp);
    PathResult path = shortest_path(k, wx, wy);

    // Boundary of K in the host: vertices with host edges outside K.
    std::vector<VertexId> boundary;
    for (VertexId v : comp->vertices)
      if (st.host.degree(v) > k.degree(v)) boundary.push_back(v);

    // Attachment landings: nearest path vertex inside K (deterministic).
    std::unordered_set<VertexId> on_path(path.vertices.begin(), path.vertices.end());
    std::vector<VertexId> attach;
    for (VertexId q : boundary) {
      if (on_path.count(q)) {
        attach.push_back(q);
        continue;
      }
      std::vector<double> dist = sssp(k, q);
      double best = std::numeric_limits<double>::infinity();
      VertexId landing = path.vertices.front();
      for (VertexId pv : path.vertices) {
        double d = dist[k.vertex_index(pv)];
        if (d < best || (d == best && pv < landing)) {
          best = d;
          landing = pv;
        }
      }
      attach.push_back(landing);
    }
    attach.push_back(path.vertices.front());
    attach.push_back(path.vertices.back());

    auto bridged = bridged_subarcs(k, path, attach);
    SuperBridged sb = maximal_super_bridged(bridged);
    std::vector<VertexId> pi;
    double sum_pq_d = 0.0;
    for (const PathInterval& iv : sb.seeded) {
      VertexId a = path.vertices[static_cast<std::size_t>(iv.begin)];
      VertexId b = path.vertices[static_cast<std::size_t>(iv.end)];
      pi.push_back(a);
      if (b != a) pi.push_back(b);
      sum_pq_d += distance(st.host, vertex_ref(a), vertex_ref(b));
    }
    if (sum_pq_d > comp->edge_length - diam + 1e-9) ++st.hdiam_violations;

    ComponentExtraction ext = pseudo_edges_of_component(st.host, k, path, pi, sb.seeded);
    for (PseudoEdge& pe : ext.accepted) st.pseudo_edges.push_back(std::move(pe));
    for (auto* bucket : {&ext.rejects, &ext.leftovers})
      for (LeftoverComponent& lc : *bucket)
        children.push_back(
            WorkItem{std::move(lc.vertices), std::move(lc.edges), lc.h1, item.depth + 1});
  }
  return children;
}

void trim_stub(DriverState& st, Decomposition& dec, PseudoEdge& pe, VertexId at,
               double stub_budget) {
  // Split the unique subset edge incident to `at` just inside the subset.
  EdgeId incident = -1;
  for (EdgeId eid : pe.edges) {
    const Edge& e = dec.host.edge(eid);
    if (e.u == at || e.v == at) {
      incident = eid;
      break;
    }
  }
  if (incident < 0) return;
  const Edge e = dec.host.edge(incident);  // copy: the host is replaced below
  double stub_len = std::min(stub_budget, e.length / 4.0);
  double t = (e.u == at) ? stub_len / e.length : 1.0 - stub_len / e.length;
  SubdivideResult sub = subdivide(dec.host, incident, t);
  dec.trims.push_back(
      SubdivisionRecord{incident, sub.left_edge, sub.right_edge, sub.mid_vertex, t, -1});
  dec.host = std::move(sub.graph);
  EdgeId stub_edge = (e.u == at) ? sub.left_edge : sub.right_edge;
  EdgeId keep_edge = (e.u == at) ? sub.right_edge : sub.left_edge;
  // The stub leaves the pseudo-edge; the remainder keeps its place.
  pe.edges.erase(std::find(pe.edges.begin(), pe.edges.end(), incident));
  pe.edges.push_back(keep_edge);
  std::sort(pe.edges.begin(), pe.edges.end());
  pe.h1 -= dec.host.edge(stub_edge).length;
  if (pe.f0 == at)
    pe.f0 = sub.mid_vertex;
  else
    pe.f1 = sub.mid_vertex;
  if (pe.f0 > pe.f1) std::swap(pe.f0, pe.f1);
  pe.is_cut_edge = false;
  (void)st;
}

// Any pseudo-edge whose closure meets a forbidden point is shaved: a stub
// next to the offending endpoint moves into the leftovers. Interior hits
// split the pseudo-edge.
void apply_exclusions(DriverState& st, Decomposition& dec, double trim_budget) {
  if (st.opts.forbidden.empty()) return;
  // Forbidden edge points become vertices first.
  std::vector<VertexId> forbidden_vertices;
  for (const PointRef& p : st.opts.forbidden) {
    PointRef mapped = dec.map_point(p);
    if (is_vertex(mapped)) {
      forbidden_vertices.push_back(std::get<VertexId>(mapped));
      continue;
    }
    EdgePoint ep = std::get<EdgePoint>(mapped);
    SubdivideResult sub = subdivide(dec.host, ep.edge, ep.fraction);
    dec.trims.push_back(SubdivisionRecord{ep.edge, sub.left_edge, sub.right_edge,
                                          sub.mid_vertex, ep.fraction, -1});
    dec.host = std::move(sub.graph);
    for (PseudoEdge& pe : dec.pseudo_edges) {
      auto it = std::find(pe.edges.begin(), pe.edges.end(), ep.edge);
      if (it == pe.edges.end()) continue;
      pe.edges.erase(it);
      pe.edges.push_back(sub.left_edge);
      pe.edges.push_back(sub.right_edge);
      std::sort(pe.edges.begin(), pe.edges.end());
      pe.interior.push_back(sub.mid_vertex);
    }
    forbidden_vertices.push_back(sub.mid_vertex);
  }

  for (int pass = 0; pass < 8; ++pass) {
    bool any = false;
    // Budget the stub mass across every offending incidence first.
    std::size_t incidences = 0;
    for (const PseudoEdge& pe : dec.pseudo_edges)
      for (VertexId f : forbidden_vertices) {
        if (pe.f0 == f) ++incidences;
        if (pe.f1 == f) ++incidences;
        if (std::find(pe.interior.begin(), pe.interior.end(), f) != pe.interior.end())
          incidences += 4;  // interior splits shave several stubs
      }
    double share = trim_budget / (2.0 * static_cast<double>(std::max<std::size_t>(
                                            incidences, 1)));
    std::vector<PseudoEdge> next;
    next.reserve(dec.pseudo_edges.size());
    for (PseudoEdge& pe : dec.pseudo_edges) {
      bool endpoint_hit = false;
      std::vector<VertexId> interior_hits;
      for (VertexId f : forbidden_vertices) {
        if (pe.f0 == f || pe.f1 == f) endpoint_hit = true;
        if (std::find(pe.interior.begin(), pe.interior.end(), f) != pe.interior.end())
          interior_hits.push_back(f);
      }
      if (!endpoint_hit && interior_hits.empty()) {
        next.push_back(std::move(pe));
        continue;
      }
      any = true;
      if (!interior_hits.empty()) {
        // Split: remove the hit vertex's incident subset edges into stubs,
        // then re-group what remains.
        for (VertexId hit : interior_hits) {
          std::vector<EdgeId> incident;
          for (EdgeId eid : pe.edges) {
            const Edge& e = dec.host.edge(eid);
            if (e.u == hit || e.v == hit) incident.push_back(eid);
          }
          for (EdgeId eid : incident) {
            const Edge e = dec.host.edge(eid);  // copy: the host is replaced below
            double stub_len = std::min(4.0 * share / incident.size(), e.length / 4.0);
            double t = (e.u == hit) ? stub_len / e.length : 1.0 - stub_len / e.length;
            SubdivideResult sub = subdivide(dec.host, eid, t);
            dec.trims.push_back(SubdivisionRecord{eid, sub.left_edge, sub.right_edge,
                                                  sub.mid_vertex, t, -1});
            dec.host = std::move(sub.graph);
            EdgeId keep = (e.u == hit) ? sub.right_edge : sub.left_edge;
            pe.edges.erase(std::find(pe.edges.begin(), pe.edges.end(), eid));
            pe.edges.push_back(keep);
            pe.interior.push_back(sub.mid_vertex);
          }
          pe.interior.erase(std::find(pe.interior.begin(), pe.interior.end(), hit));
        }
        // Re-group the surviving edges into connected pieces.
        std::unordered_set<VertexId> cutset{pe.f0, pe.f1};
        MetricGraph piece_graph = [&] {
          std::vector<VertexId> vs{pe.f0, pe.f1};
          for (VertexId v : pe.interior) vs.push_back(v);
          return materialize(dec.host, vs, pe.edges);
        }();
        for (auto& comp_vertices : components(piece_graph)) {
          std::vector<EdgeId> comp_edges;
          double h1 = 0.0;
          std::unordered_set<VertexId> in_comp(comp_vertices.begin(), comp_vertices.end());
          for (EdgeId eid : pe.edges) {
            const Edge& e = dec.host.edge(eid);
            if (in_comp.count(e.u) && in_comp.count(e.v)) {
              comp_edges.push_back(eid);
              h1 += e.length;
            }
          }
          if (comp_edges.empty()) continue;
          // Validate as a pseudo-edge of the host.
          std::map<VertexId, int> deg;
          for (EdgeId eid : comp_edges) {
            ++deg[dec.host.edge(eid).u];
            ++deg[dec.host.edge(eid).v];
          }
          std::vector<VertexId> frontier, interior;
          for (auto& [v, d] : deg) {
            if (dec.host.degree(v) > static_cast<std::size_t>(d))
              frontier.push_back(v);
            else
              interior.push_back(v);
          }
          if (frontier.size() == 2 && deg[frontier[0]] == 1 && deg[frontier[1]] == 1) {
            PseudoEdge piece;
            piece.edges = comp_edges;
            std::sort(piece.edges.begin(), piece.edges.end());
            piece.f0 = std::min(frontier[0], frontier[1]);
            piece.f1 = std::max(frontier[0], frontier[1]);
            piece.interior = interior;
            piece.h1 = h1;
            next.push_back(std::move(piece));
          }
          // else: the piece stays out of the pseudo-edge list and lands in
          // the leftovers at assembly.
        }
      } else {
        for (VertexId f : forbidden_vertices) {
          if (pe.f0 == f) trim_stub(st, dec, pe, pe.f0, share);
          if (pe.f1 == f) trim_stub(st, dec, pe, pe.f1, share);
        }
        next.push_back(std::move(pe));
      }
    }
    dec.pseudo_edges = std::move(next);
    if (!any) break;
  }

  // Refresh distances and discrepancies on the final host.
  for (PseudoEdge& pe : dec.pseudo_edges) {
    pe.d_endpoints = distance(dec.host, vertex_ref(pe.f0), vertex_ref(pe.f1));
    pe.discrepancy =
        pe.is_cut_edge ? 0.0 : std::max(0.0, pe.h1 - pe.d_endpoints);
  }
}

Decomposition assemble(DriverState& st) {
  Decomposition dec;
  dec.host = st.host;
  dec.level = st.level;
  dec.eps = st.opts.eps;
  dec.m_param = st.opts.m;
  dec.max_depth_used = st.max_depth_used;
  dec.hdiam_violations = st.hdiam_violations;
  dec.pseudo_edges = std::move(st.pseudo_edges);

  double leftover_budget = st.opts.eps * st.host.total_length() / st.opts.m;
  apply_exclusions(st, dec, leftover_budget * 0.5);

  // Leftovers: components of the host minus all pseudo-edge subsets, with
  // pseudo-edge interior vertices dropped (they are not leftover points).
  std::vector<EdgeId> removed;
  std::unordered_set<VertexId> interior;
  for (const PseudoEdge& pe : dec.pseudo_edges) {
    removed.insert(removed.end(), pe.edges.begin(), pe.edges.end());
    for (VertexId v : pe.interior) interior.insert(v);
  }
  MetricGraph complement = remove_edges(dec.host, removed);
  for (auto& comp : components(complement)) {
    if (comp.size() == 1 && interior.count(comp.front())) continue;
    LeftoverComponent lc;
    lc.vertices = comp;
    std::unordered_set<VertexId> in_comp(comp.begin(), comp.end());
    for (const Edge& e : complement.edges())
      if (in_comp.count(e.u) && in_comp.count(e.v)) {
        lc.edges.push_back(e.id);
        lc.h1 += e.length;
      }
    dec.leftovers.push_back(std::move(lc));
  }

  dec.sum_h1 = 0.0;
  dec.sum_discrepancy = 0.0;
  for (const PseudoEdge& pe : dec.pseudo_edges) {
    dec.sum_h1 += pe.h1;
    dec.sum_discrepancy += pe.discrepancy;
  }
  dec.leftover_h1 = 0.0;
  for (const LeftoverComponent& lc : dec.leftovers) dec.leftover_h1 += lc.h1;

  double total = dec.sum_h1 + dec.leftover_h1;
  if (std::abs(total - dec.host.total_length()) >
      1e-9 * std::max(1.0, dec.host.total_length()))
    throw Error(ErrorCode::invalid_argument,
                "internal: decomposition does not partition the edge mass");
  if (dec.leftover_h1 > leftover_budget + 1e-12 || dec.sum_discrepancy >= st.opts.eps)
    dec.budget_exhausted = true;
  return dec;
}

Decomposition decompose_impl(DriverState st) {
  if (!(st.opts.eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be positive");
  if (!(st.opts.m > 2.0)) throw Error(ErrorCode::invalid_argument, "m must exceed 2");
  if (!st.host.is_connected())
    throw Error(ErrorCode::disconnected, "decompose expects a connected graph");
  for (EdgeId e : st.opts.required_edges) st.host.edge_index(e);
  for (const PointRef& p : st.opts.forbidden) st.host.validate_point(p);

  double ell = st.host.total_length();
  st.sigma = std::min(st.opts.eps / (4.0 * ell), 0.1);
  double leftover_budget = st.opts.eps * ell / st.opts.m;
  if (!st.opts.forbidden.empty()) leftover_budget *= 0.5;

  auto heavier = [](const WorkItem& a, const WorkItem& b) { return a.h1 < b.h1; };
  std::priority_queue<WorkItem, std::vector<WorkItem>, decltype(heavier)> queue(heavier);
  double queue_mass = 0.0;
  double final_mass = 0.0;
  {
    WorkItem whole;
    whole.vertices = st.host.vertex_ids();
    for (const Edge& e : st.host.edges()) whole.edges.push_back(e.id);
    whole.h1 = ell;
    whole.depth = 0;
    queue_mass += whole.h1;
    queue.push(std::move(whole));
  }
  while (!queue.empty() && queue_mass + final_mass > leftover_budget) {
    WorkItem item = queue.top();
    queue.pop();
    queue_mass -= item.h1;
    if (item.depth >= st.opts.depth_cap || item.edges.empty()) {
      final_mass += item.h1;
      st.final_leftovers.push_back(std::move(item));
      continue;
    }
    for (WorkItem& child : run_round(st, item)) {
      queue_mass += child.h1;
      queue.push(std::move(child));
    }
  }
  while (!queue.empty()) {
    st.final_leftovers.push_back(queue.top());
    queue.pop();
  }
  return assemble(st);
}

}  // namespace

Decomposition decompose(const MetricGraph& g, const DecomposeOptions& options) {
  DriverState st{nullptr, -1, g, options, 0.0, {}, {}, 0, 0};
  return decompose_impl(std::move(st));
}

Decomposition decompose(const RefinementSequence& seq, int level,
                        const DecomposeOptions& options) {
  DriverState st{&seq, level, seq.level(level), options, 0.0, {}, {}, 0, 0};
  return decompose_impl(std::move(st));
}

Decomposition exclude_points(const MetricGraph& g, const DecomposeOptions& base,
                             const std::vector<PointRef>& forbidden) {
  DecomposeOptions opts = base;
  opts.forbidden = forbidden;
  return decompose(g, opts);
}

Decomposition exclude_points(const RefinementSequence& seq, int level,
                             const DecomposeOptions& base,
                             const std::vector<PointRef>& forbidden) {
  DecomposeOptions opts = base;
  opts.forbidden = forbidden;
  return decompose(seq, level, opts);
}

}  // namespace graphlike::decomp
