#pragma once

#include "graphlike/core.hpp"
#include "graphlike/refine.hpp"

namespace graphlike::decomp {

/// An open connected edge-subset with two frontier points of inward degree 1.
struct PseudoEdge {
  std::vector<EdgeId> edges;       // sorted
  VertexId f0 = 0, f1 = 0;         // frontier, f0 < f1
  std::vector<VertexId> interior;  // vertices with no edges outside the subset
  double h1 = 0.0;                 // total edge length of the subset
  double d_endpoints = 0.0;        // ambient distance between f0 and f1
  double discrepancy = 0.0;        // h1 - d_endpoints; 0 by convention for cut edges
  bool is_cut_edge = false;
};

struct LeftoverComponent {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  double h1 = 0.0;
};

struct Decomposition {
  // the decomposed graph (level graph plus exclusion trims)
  MetricGraph host{std::vector<VertexId>{}, std::vector<Edge>{}};
  int level = -1;    // -1 for standalone graphs
  std::vector<PseudoEdge> pseudo_edges;
  std::vector<LeftoverComponent> leftovers;
  double sum_h1 = 0.0;
  double sum_discrepancy = 0.0;
  double leftover_h1 = 0.0;
  double eps = 0.0;
  double m_param = 0.0;
  int max_depth_used = 0;
  bool budget_exhausted = false;
  int hdiam_violations = 0;  // per-component inequality failures (expected 0)
  std::vector<SubdivisionRecord> trims;  // subdivisions applied for exclusions

  /// Map a point of the pre-trim graph into the host.
  PointRef map_point(const PointRef& p) const;
};

/// Closed subpath of the reference path, as vertex-index range plus the
/// arclength positions of its ends.
struct PathInterval {
  int begin = 0, end = 0;  // indices into the path's vertex chain, begin <= end
  double start_pos = 0.0, end_pos = 0.0;
  bool seeded = false;  // contains an attach point or a path endpoint
};

/// Bridged subarcs of the path: for every off-path component the minimal
/// subpath spanning its attachment vertices, for every chord its spanned
/// subpath, and a seeded singleton for every attach point.
std::vector<PathInterval> bridged_subarcs(const MetricGraph& k, const PathResult& path,
                                          const std::vector<VertexId>& attach_points);

struct SuperBridged {
  std::vector<PathInterval> seeded;    // the arcs P_q delimiting the cut set
  std::vector<PathInterval> unseeded;  // merged arcs containing no seed
};

/// Merge overlapping or abutting bridged intervals into maximal ones.
SuperBridged maximal_super_bridged(const std::vector<PathInterval>& bridged);

struct ComponentExtraction {
  std::vector<PseudoEdge> accepted;
  std::vector<LeftoverComponent> rejects;    // candidates failing the invariants
  std::vector<LeftoverComponent> leftovers;  // regions not meeting P outside the P_q
};

/// Components of K minus the cut vertices Pi, classified: those meeting the
/// path outside the seeded arcs become pseudo-edges when they pass the
/// frontier-size-2 and endpoint-degree-1 checks, fail into rejects otherwise;
/// everything else is leftover. Frontier and distances are taken in `host`.
ComponentExtraction pseudo_edges_of_component(const MetricGraph& host, const MetricGraph& k,
                                              const PathResult& path,
                                              const std::vector<VertexId>& pi,
                                              const std::vector<PathInterval>& seeded);

struct DecomposeOptions {
  double eps = 0.1;
  double m = 8.0;  // leftover budget eps*ell/m; must be > 2
  int depth_cap = 12;
  std::vector<EdgeId> required_edges;   // forced into the cut, hence pseudo-edges
  std::vector<PointRef> forbidden;      // pseudo-edge closures must avoid these
  int level_for_distances = -1;         // internal
};

Decomposition decompose(const MetricGraph& g, const DecomposeOptions& options);
Decomposition decompose(const RefinementSequence& seq, int level,
                        const DecomposeOptions& options);

/// decompose with a forbidden point set (re-decomposes offending pseudo-edges
/// by trimming stubs until closures avoid the set).
Decomposition exclude_points(const MetricGraph& g, const DecomposeOptions& base,
                             const std::vector<PointRef>& forbidden);
Decomposition exclude_points(const RefinementSequence& seq, int level,
                             const DecomposeOptions& base,
                             const std::vector<PointRef>& forbidden);

}  // namespace graphlike::decomp
