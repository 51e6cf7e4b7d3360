#include "graphlike/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>

namespace graphlike {

namespace {

std::uint64_t fresh_uid() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::non_positive_length: return "NonPositiveLength";
    case ErrorCode::dangling_endpoint: return "DanglingEndpoint";
    case ErrorCode::self_loop: return "SelfLoop";
    case ErrorCode::unknown_vertex: return "UnknownVertex";
    case ErrorCode::unknown_edge: return "UnknownEdge";
    case ErrorCode::unknown_point: return "UnknownPoint";
    case ErrorCode::fraction_out_of_range: return "FractionOutOfRange";
    case ErrorCode::disconnected: return "Disconnected";
    case ErrorCode::disconnected_part: return "DisconnectedPart";
    case ErrorCode::same_point: return "SamePoint";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::boundary_not_two: return "BoundaryNotTwo";
    case ErrorCode::endpoint_degree_not_one: return "EndpointDegreeNotOne";
    case ErrorCode::not_shortest_path: return "NotShortestPath";
    case ErrorCode::non_summable: return "NonSummable";
    case ErrorCode::cut_not_achievable: return "CutNotAchievable";
    case ErrorCode::stale_cut: return "StaleCut";
    case ErrorCode::path_not_in_component: return "PathNotInComponent";
    case ErrorCode::host_mismatch: return "HostMismatch";
    case ErrorCode::invalid_flow: return "InvalidFlow";
    case ErrorCode::budget_exhausted: return "BudgetExhausted";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

Error::Error(ErrorCode c, const std::string& what)
    : std::runtime_error(std::string(to_string(c)) + ": " + what), code(c) {}

MetricGraph::MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  VertexId nv = 0;
  for (VertexId v : vertices_) nv = std::max(nv, v + 1);
  EdgeId ne = 0;
  for (const Edge& e : edges_) ne = std::max(ne, e.id + 1);
  next_vertex_id_ = nv;
  next_edge_id_ = ne;
  init();
}

MetricGraph::MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges,
                         VertexId next_vertex_id, EdgeId next_edge_id)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      next_vertex_id_(next_vertex_id),
      next_edge_id_(next_edge_id) {
  init();
}

void MetricGraph::init() {
  uid_ = fresh_uid();
  std::sort(vertices_.begin(), vertices_.end());
  vindex_.reserve(vertices_.size() * 2);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i > 0 && vertices_[i] == vertices_[i - 1])
      throw Error(ErrorCode::invalid_argument,
                  "duplicate vertex id " + std::to_string(vertices_[i]));
    vindex_.emplace(vertices_[i], i);
  }
  eindex_.reserve(edges_.size() * 2);
  adjacency_.assign(vertices_.size(), {});
  total_length_ = 0.0;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw Error(ErrorCode::non_positive_length,
                  "edge " + std::to_string(e.id) + " has length " + std::to_string(e.length));
    if (e.u == e.v)
      throw Error(ErrorCode::self_loop, "edge " + std::to_string(e.id) + " at vertex " +
                                            std::to_string(e.u));
    auto iu = vindex_.find(e.u);
    auto iv = vindex_.find(e.v);
    if (iu == vindex_.end() || iv == vindex_.end())
      throw Error(ErrorCode::dangling_endpoint, "edge " + std::to_string(e.id) +
                                                    " references an undeclared vertex");
    if (!eindex_.emplace(e.id, i).second)
      throw Error(ErrorCode::invalid_argument, "duplicate edge id " + std::to_string(e.id));
    if (next_vertex_id_ <= std::max(e.u, e.v) || next_edge_id_ <= e.id)
      throw Error(ErrorCode::invalid_argument, "id counters behind contents");
    adjacency_[iu->second].push_back(static_cast<std::uint32_t>(i));
    adjacency_[iv->second].push_back(static_cast<std::uint32_t>(i));
    total_length_ += e.length;
  }
}

const Edge& MetricGraph::edge(EdgeId e) const {
  auto it = eindex_.find(e);
  if (it == eindex_.end())
    throw Error(ErrorCode::unknown_edge, "edge " + std::to_string(e));
  return edges_[it->second];
}

std::size_t MetricGraph::vertex_index(VertexId v) const {
  auto it = vindex_.find(v);
  if (it == vindex_.end())
    throw Error(ErrorCode::unknown_vertex, "vertex " + std::to_string(v));
  return it->second;
}

std::size_t MetricGraph::edge_index(EdgeId e) const {
  auto it = eindex_.find(e);
  if (it == eindex_.end())
    throw Error(ErrorCode::unknown_edge, "edge " + std::to_string(e));
  return it->second;
}

const std::vector<std::uint32_t>& MetricGraph::incident(VertexId v) const {
  return adjacency_[vertex_index(v)];
}

bool MetricGraph::is_connected() const {
  return components(*this).size() <= 1;
}

void MetricGraph::validate_point(const PointRef& p) const {
  if (is_vertex(p)) {
    if (!has_vertex(std::get<VertexId>(p)))
      throw Error(ErrorCode::unknown_point,
                  "vertex " + std::to_string(std::get<VertexId>(p)));
    return;
  }
  const EdgePoint& ep = std::get<EdgePoint>(p);
  if (!has_edge(ep.edge))
    throw Error(ErrorCode::unknown_point, "edge " + std::to_string(ep.edge));
  if (!(ep.fraction > 0.0 && ep.fraction < 1.0))
    throw Error(ErrorCode::fraction_out_of_range,
                "fraction " + std::to_string(ep.fraction));
}

MetricGraph build_graph(std::vector<VertexId> vertices, std::vector<Edge> edges) {
  return MetricGraph(std::move(vertices), std::move(edges));
}

SubdivideResult subdivide(const MetricGraph& g, EdgeId e, double t) {
  if (!(t > 0.0 && t < 1.0))
    throw Error(ErrorCode::fraction_out_of_range, "t = " + std::to_string(t));
  const Edge& old = g.edge(e);
  VertexId mid = g.next_vertex_id();
  EdgeId left = g.next_edge_id();
  EdgeId right = left + 1;
  double left_len = t * old.length;
  double right_len = old.length - left_len;
  if (!(left_len > 0.0) || !(right_len > 0.0))
    throw Error(ErrorCode::fraction_out_of_range, "t produces a zero-length piece");

  std::vector<VertexId> vertices = g.vertex_ids();
  vertices.push_back(mid);
  std::vector<Edge> edges;
  edges.reserve(g.edge_count() + 1);
  for (const Edge& f : g.edges()) {
    if (f.id == e) continue;
    edges.push_back(f);
  }
  edges.push_back(Edge{left, old.u, mid, left_len});
  edges.push_back(Edge{right, mid, old.v, right_len});
  MetricGraph out(std::move(vertices), std::move(edges), mid + 1, right + 1);
  return SubdivideResult{std::move(out), mid, left, right};
}

namespace {

// Union-find over vertex indices.
struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // root at smaller index keeps component order deterministic
    return true;
  }
};

Contraction contract_impl(const MetricGraph& g, const std::vector<VertexId>& part_vertices,
                          const std::vector<EdgeId>& part_edges, bool edges_given) {
  if (part_vertices.empty())
    throw Error(ErrorCode::invalid_argument, "empty part");
  std::unordered_map<VertexId, bool> in_part;
  for (VertexId v : part_vertices) {
    g.vertex_index(v);
    in_part[v] = true;
  }
  // Connectivity of the part through its own edges.
  {
    std::unordered_map<VertexId, std::uint32_t> local;
    local.reserve(part_vertices.size());
    for (VertexId v : part_vertices)
      local.emplace(v, static_cast<std::uint32_t>(local.size()));
    UnionFind uf(local.size());
    if (edges_given) {
      for (EdgeId eid : part_edges) {
        const Edge& e = g.edge(eid);
        uf.unite(local.at(e.u), local.at(e.v));
      }
    } else {
      for (const Edge& e : g.edges())
        if (in_part.count(e.u) && in_part.count(e.v)) uf.unite(local.at(e.u), local.at(e.v));
    }
    std::uint32_t root = uf.find(0);
    for (std::uint32_t i = 1; i < local.size(); ++i)
      if (uf.find(i) != root)
        throw Error(ErrorCode::disconnected_part, "part does not induce a connected subgraph");
  }

  std::unordered_map<EdgeId, bool> contracted_edge;
  if (edges_given)
    for (EdgeId eid : part_edges) contracted_edge[eid] = true;

  VertexId merged = g.next_vertex_id();
  std::unordered_map<VertexId, VertexId> projection;
  projection.reserve(g.vertex_count());
  for (VertexId v : g.vertex_ids()) projection[v] = in_part.count(v) ? merged : v;

  std::vector<VertexId> vertices;
  vertices.reserve(g.vertex_count() - part_vertices.size() + 1);
  for (VertexId v : g.vertex_ids())
    if (!in_part.count(v)) vertices.push_back(v);
  vertices.push_back(merged);

  double removed = 0.0;
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    VertexId nu = projection[e.u];
    VertexId nv = projection[e.v];
    bool is_part_edge = edges_given ? contracted_edge.count(e.id) != 0
                                    : (in_part.count(e.u) && in_part.count(e.v));
    if (is_part_edge || nu == nv) {
      removed += e.length;  // contracted edges and the self-loops they create
      continue;
    }
    edges.push_back(Edge{e.id, nu, nv, e.length});
  }
  MetricGraph out(std::move(vertices), std::move(edges), merged + 1, g.next_edge_id());
  return Contraction{std::move(out), std::move(projection), merged, removed};
}

}  // namespace

Contraction contract_vertices(const MetricGraph& g, const std::vector<VertexId>& part) {
  return contract_impl(g, part, {}, false);
}

Contraction contract_edges(const MetricGraph& g, const std::vector<EdgeId>& part) {
  if (part.empty())
    throw Error(ErrorCode::invalid_argument, "empty part");
  std::vector<VertexId> vertices;
  std::unordered_map<VertexId, bool> seen;
  for (EdgeId eid : part) {
    const Edge& e = g.edge(eid);
    if (seen.emplace(e.u, true).second) vertices.push_back(e.u);
    if (seen.emplace(e.v, true).second) vertices.push_back(e.v);
  }
  return contract_impl(g, vertices, part, true);
}

MetricGraph remove_edges(const MetricGraph& g, const std::vector<EdgeId>& removed) {
  std::unordered_map<EdgeId, bool> gone;
  for (EdgeId e : removed) {
    g.edge_index(e);
    gone[e] = true;
  }
  std::vector<Edge> edges;
  edges.reserve(g.edge_count() - gone.size());
  for (const Edge& e : g.edges())
    if (!gone.count(e.id)) edges.push_back(e);
  return MetricGraph(g.vertex_ids(), std::move(edges), g.next_vertex_id(), g.next_edge_id());
}

std::vector<std::vector<VertexId>> components(const MetricGraph& g,
                                              const std::vector<EdgeId>& removed) {
  std::unordered_map<EdgeId, bool> gone;
  for (EdgeId e : removed) {
    g.edge_index(e);
    gone[e] = true;
  }
  UnionFind uf(g.vertex_count());
  for (const Edge& e : g.edges()) {
    if (gone.count(e.id)) continue;
    uf.unite(static_cast<std::uint32_t>(g.vertex_index(e.u)),
             static_cast<std::uint32_t>(g.vertex_index(e.v)));
  }
  // Vertices are sorted ascending, so root indices enumerate components in
  // order of smallest contained vertex id.
  std::unordered_map<std::uint32_t, std::size_t> slot;
  std::vector<std::vector<VertexId>> out;
  const auto& ids = g.vertex_ids();
  for (std::uint32_t i = 0; i < ids.size(); ++i) {
    std::uint32_t r = uf.find(i);
    auto it = slot.find(r);
    if (it == slot.end()) {
      it = slot.emplace(r, out.size()).first;
      out.emplace_back();
    }
    out[it->second].push_back(ids[i]);
  }
  return out;
}

MetricGraph induced_subgraph(const MetricGraph& g, const std::vector<VertexId>& part) {
  std::unordered_map<VertexId, bool> in_part;
  for (VertexId v : part) {
    g.vertex_index(v);
    in_part[v] = true;
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (in_part.count(e.u) && in_part.count(e.v)) edges.push_back(e);
  std::vector<VertexId> vertices(part.begin(), part.end());
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return MetricGraph(std::move(vertices), std::move(edges), g.next_vertex_id(),
                     g.next_edge_id());
}

MetricGraph edge_subgraph(const MetricGraph& g, const std::vector<EdgeId>& part) {
  std::vector<Edge> edges;
  std::vector<VertexId> vertices;
  std::unordered_map<VertexId, bool> seen;
  for (EdgeId eid : part) {
    const Edge& e = g.edge(eid);
    edges.push_back(e);
    if (seen.emplace(e.u, true).second) vertices.push_back(e.u);
    if (seen.emplace(e.v, true).second) vertices.push_back(e.v);
  }
  return MetricGraph(std::move(vertices), std::move(edges), g.next_vertex_id(),
                     g.next_edge_id());
}

namespace {

struct DijkstraState {
  std::vector<double> dist;
  std::vector<std::int64_t> pred_edge;  // edge index + 1, 0 = none
};

DijkstraState dijkstra(const MetricGraph& g, std::size_t source,
                       std::size_t target = static_cast<std::size_t>(-1)) {
  const auto& edges = g.edges();
  DijkstraState st;
  st.dist.assign(g.vertex_count(), kInf);
  st.pred_edge.assign(g.vertex_count(), 0);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  st.dist[source] = 0.0;
  heap.emplace(0.0, static_cast<std::uint32_t>(source));
  while (!heap.empty()) {
    auto [d, vi] = heap.top();
    heap.pop();
    if (d > st.dist[vi]) continue;
    if (vi == target) break;
    VertexId v = g.vertex_ids()[vi];
    for (std::uint32_t ei : g.incident(v)) {
      const Edge& e = edges[ei];
      std::size_t wi = g.vertex_index(e.other(v));
      double nd = d + e.length;
      if (nd < st.dist[wi] ||
          (nd == st.dist[wi] && st.pred_edge[wi] != 0 &&
           e.id < edges[st.pred_edge[wi] - 1].id)) {
        st.dist[wi] = nd;
        st.pred_edge[wi] = static_cast<std::int64_t>(ei) + 1;
        heap.emplace(nd, static_cast<std::uint32_t>(wi));
      }
    }
  }
  return st;
}

}  // namespace

std::vector<double> sssp(const MetricGraph& g, VertexId source) {
  return dijkstra(g, g.vertex_index(source)).dist;
}

PathResult shortest_path(const MetricGraph& g, VertexId x, VertexId y) {
  std::size_t xi = g.vertex_index(x);
  std::size_t yi = g.vertex_index(y);
  DijkstraState st = dijkstra(g, xi, yi);
  if (st.dist[yi] == kInf)
    throw Error(ErrorCode::disconnected, std::to_string(x) + " and " + std::to_string(y) +
                                             " are in different components");
  PathResult out;
  out.length = st.dist[yi];
  std::size_t cur = yi;
  out.vertices.push_back(y);
  while (cur != xi) {
    std::size_t ei = static_cast<std::size_t>(st.pred_edge[cur] - 1);
    const Edge& e = g.edges()[ei];
    out.edges.push_back(e.id);
    VertexId vcur = g.vertex_ids()[cur];
    VertexId prev = e.other(vcur);
    out.vertices.push_back(prev);
    cur = g.vertex_index(prev);
  }
  std::reverse(out.vertices.begin(), out.vertices.end());
  std::reverse(out.edges.begin(), out.edges.end());
  return out;
}

ResolvedPoints resolve_points(const MetricGraph& g, const PointRef& p, const PointRef& q) {
  g.validate_point(p);
  g.validate_point(q);
  if (is_vertex(p) && is_vertex(q))
    return ResolvedPoints{g, std::get<VertexId>(p), std::get<VertexId>(q)};

  // Up to two temporary subdivisions; a shared host edge is split twice with
  // the second fraction re-expressed in the surviving piece.
  MetricGraph work = g;
  auto realize = [&work](const PointRef& r, std::optional<EdgePoint> other)
      -> std::pair<VertexId, std::optional<EdgePoint>> {
    if (is_vertex(r)) return {std::get<VertexId>(r), other};
    EdgePoint ep = std::get<EdgePoint>(r);
    SubdivideResult sub = subdivide(work, ep.edge, ep.fraction);
    std::optional<EdgePoint> mapped = other;
    if (other && other->edge == ep.edge) {
      if (other->fraction == ep.fraction) {
        mapped = std::nullopt;  // same point; caller sees the same vertex
      } else if (other->fraction < ep.fraction) {
        mapped = EdgePoint{sub.left_edge, other->fraction / ep.fraction};
      } else {
        mapped =
            EdgePoint{sub.right_edge, (other->fraction - ep.fraction) / (1.0 - ep.fraction)};
      }
    }
    work = std::move(sub.graph);
    return {sub.mid_vertex, mapped};
  };

  std::optional<EdgePoint> q_pending =
      is_vertex(q) ? std::nullopt : std::optional<EdgePoint>(std::get<EdgePoint>(q));
  auto [pv, q_rest] = realize(p, q_pending);
  VertexId qv;
  if (is_vertex(q)) {
    qv = std::get<VertexId>(q);
  } else if (!q_rest) {
    qv = pv;  // p and q named the same edge point
  } else {
    auto [qv2, ignore] = realize(PointRef{std::in_place_index<1>, *q_rest}, std::nullopt);
    (void)ignore;
    qv = qv2;
  }
  return ResolvedPoints{std::move(work), pv, qv};
}

double distance(const MetricGraph& g, const PointRef& p, const PointRef& q) {
  ResolvedPoints rp = resolve_points(g, p, q);
  if (rp.p == rp.q) return 0.0;
  std::size_t qi = rp.graph.vertex_index(rp.q);
  double d = dijkstra(rp.graph, rp.graph.vertex_index(rp.p), qi).dist[qi];
  if (d == kInf)
    throw Error(ErrorCode::disconnected, "points lie in different components");
  return d;
}

DiameterResult diameter(const MetricGraph& g, const std::vector<VertexId>& part) {
  if (part.empty()) throw Error(ErrorCode::invalid_argument, "empty part");
  MetricGraph sub = induced_subgraph(g, part);
  if (!sub.is_connected())
    throw Error(ErrorCode::disconnected_part, "part not connected in the induced subgraph");
  DiameterResult best{0.0, sub.vertex_ids()[0], sub.vertex_ids()[0]};
  const auto& ids = sub.vertex_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::vector<double> dist = dijkstra(sub, i).dist;
    for (std::size_t j = i; j < ids.size(); ++j) {
      if (dist[j] > best.value) best = DiameterResult{dist[j], ids[i], ids[j]};
      // ids ascend, so the first maximizing pair found is lexicographically
      // smallest; strict '>' keeps it.
    }
  }
  return best;
}

}  // namespace graphlike
