#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace graphlike {

using VertexId = std::int64_t;
using EdgeId = std::int64_t;

enum class ErrorCode {
  non_positive_length,
  dangling_endpoint,
  self_loop,
  unknown_vertex,
  unknown_edge,
  unknown_point,
  fraction_out_of_range,
  disconnected,
  disconnected_part,
  same_point,
  too_large,
  boundary_not_two,
  endpoint_degree_not_one,
  not_shortest_path,
  non_summable,
  cut_not_achievable,
  stale_cut,
  path_not_in_component,
  host_mismatch,
  invalid_flow,
  budget_exhausted,
  invalid_argument,
};

const char* to_string(ErrorCode code) noexcept;

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& what);
};

/// A point strictly inside an edge, at `fraction` of arclength from endpoint u.
struct EdgePoint {
  EdgeId edge;
  double fraction;
  friend bool operator==(const EdgePoint& a, const EdgePoint& b) {
    return a.edge == b.edge && a.fraction == b.fraction;
  }
};

/// Either a vertex or an interior edge point.
using PointRef = std::variant<VertexId, EdgePoint>;

inline PointRef vertex_ref(VertexId v) { return PointRef{std::in_place_index<0>, v}; }
inline PointRef edge_point(EdgeId e, double fraction) {
  return PointRef{std::in_place_index<1>, EdgePoint{e, fraction}};
}
inline bool is_vertex(const PointRef& p) { return p.index() == 0; }

struct Edge {
  EdgeId id;
  VertexId u, v;
  double length;

  VertexId other(VertexId w) const { return w == u ? v : u; }
};

/// Finite metric multigraph with strictly positive edge lengths. Immutable
/// after construction; parallel edges allowed, self-loops rejected.
class MetricGraph {
 public:
  MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges);
  MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges,
              VertexId next_vertex_id, EdgeId next_edge_id);

  std::uint64_t uid() const { return uid_; }

  const std::vector<VertexId>& vertex_ids() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_vertex(VertexId v) const { return vindex_.count(v) != 0; }
  bool has_edge(EdgeId e) const { return eindex_.count(e) != 0; }
  const Edge& edge(EdgeId e) const;
  std::size_t vertex_index(VertexId v) const;
  std::size_t edge_index(EdgeId e) const;

  /// Incident edge indices (positions into edges()) of a vertex.
  const std::vector<std::uint32_t>& incident(VertexId v) const;
  std::size_t degree(VertexId v) const { return incident(v).size(); }

  double total_length() const { return total_length_; }
  bool is_connected() const;

  VertexId next_vertex_id() const { return next_vertex_id_; }
  EdgeId next_edge_id() const { return next_edge_id_; }

  void validate_point(const PointRef& p) const;

 private:
  void init();

  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<VertexId, std::size_t> vindex_;
  std::unordered_map<EdgeId, std::size_t> eindex_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  double total_length_ = 0.0;
  VertexId next_vertex_id_ = 0;
  EdgeId next_edge_id_ = 0;
  std::uint64_t uid_ = 0;
};

/// Validating constructor mirroring the obvious one; kept as the named entry
/// point used by the CLI and bindings.
MetricGraph build_graph(std::vector<VertexId> vertices, std::vector<Edge> edges);

struct SubdivideResult {
  MetricGraph graph;
  VertexId mid_vertex;
  EdgeId left_edge;   // u-side piece, length t*len
  EdgeId right_edge;  // v-side piece, length (1-t)*len
};

/// Replace edge e by two edges meeting at a fresh vertex; total length is
/// conserved exactly (the two pieces are computed as t*len and len - t*len).
SubdivideResult subdivide(const MetricGraph& g, EdgeId e, double t);

struct Contraction {
  MetricGraph graph;
  std::unordered_map<VertexId, VertexId> projection;  // identity outside the part
  VertexId merged_vertex;
  double removed_length;  // contracted edges plus deleted self-loops
};

/// Collapse the connected subgraph induced by `part` to a single fresh vertex.
Contraction contract_vertices(const MetricGraph& g, const std::vector<VertexId>& part);

/// Collapse a connected edge-subset; parallel survivors stay parallel edges,
/// edges turned into self-loops are deleted (they carry no current).
Contraction contract_edges(const MetricGraph& g, const std::vector<EdgeId>& part);

/// Delete the open edges in `removed`, keeping every vertex.
MetricGraph remove_edges(const MetricGraph& g, const std::vector<EdgeId>& removed);

/// Connected components of g with `removed` open edges deleted. Deterministic
/// order: by smallest contained vertex id; each component sorted ascending.
std::vector<std::vector<VertexId>> components(const MetricGraph& g,
                                              const std::vector<EdgeId>& removed = {});

/// Subgraph induced by a vertex set (edges with both endpoints inside).
MetricGraph induced_subgraph(const MetricGraph& g, const std::vector<VertexId>& part);

/// Subgraph consisting of the given edges and their endpoints.
MetricGraph edge_subgraph(const MetricGraph& g, const std::vector<EdgeId>& part);

struct PathResult {
  double length = 0.0;
  std::vector<VertexId> vertices;  // v0..vk
  std::vector<EdgeId> edges;       // k edges
};

/// Shortest x-y path. Deterministic tie-break: prefer the predecessor edge
/// with smaller id at equal distance.
PathResult shortest_path(const MetricGraph& g, VertexId x, VertexId y);

/// Shortest-path metric d_ell with edge-interior points handled by splitting
/// the host edge.
double distance(const MetricGraph& g, const PointRef& p, const PointRef& q);

struct DiameterResult {
  double value = 0.0;
  VertexId x = 0, y = 0;  // lexicographically smallest maximizing pair
};

/// Max vertex-pair distance within the subgraph induced by `part`.
DiameterResult diameter(const MetricGraph& g, const std::vector<VertexId>& part);

/// Single-source shortest-path distances (index-aligned with g.vertex_ids()).
std::vector<double> sssp(const MetricGraph& g, VertexId source);

struct ResolvedPoints {
  MetricGraph graph;  // host with temporary subdivisions if needed
  VertexId p, q;
};

/// Realize two point refs as vertices, subdividing host edges temporarily.
ResolvedPoints resolve_points(const MetricGraph& g, const PointRef& p, const PointRef& q);

}  // namespace graphlike
