#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphlike/core.hpp"

namespace graphlike {

struct SubdivideMove {
  EdgeId edge;
  double fraction;
};

/// Endpoints may name vertices that do not exist yet; they are created. New
/// ids must be allocated in ascending order starting at next_vertex_id().
struct AddEdgeMove {
  VertexId u, v;
  double length;
};

using RefinementMove = std::variant<SubdivideMove, AddEdgeMove>;

struct RefinementStep {
  std::vector<RefinementMove> moves;
};

struct SubdivisionRecord {
  EdgeId parent;
  EdgeId left, right;
  VertexId mid;
  double fraction;
  int level;  // level at which the subdivision happened (parent gone from here on)
};

struct StepApplication {
  MetricGraph graph;
  std::vector<SubdivisionRecord> subdivisions;
  std::vector<EdgeId> added_edges;
  double added_length = 0.0;
};

/// Apply a refinement step; total length of pre-existing edges is conserved.
StepApplication apply_step(const MetricGraph& g, const RefinementStep& step, int level);

/// One entry of the declared disconnecting edge enumeration. edge is -1 while
/// the entry's level has not been generated yet (metadata-only view).
struct EnumeratedEdge {
  int available_level;  // smallest n with the edge materialized in G_n
  EdgeId edge;          // id it carries at that level, or -1 if unresolved
  double length;
  bool pending = false;  // at least one side of the edge is a dead end in the limit
};

/// Lazily generated chain G_0 <= G_1 <= ... with point tracking. The
/// computational stand-in for a graph-like continuum.
class RefinementSequence {
 public:
  struct Config {
    MetricGraph initial{std::vector<VertexId>{}, std::vector<Edge>{}};
    /// Builds the step taking G_{n-1} to G_n (n >= 1). Empty steps are fine.
    std::function<RefinementStep(int n, const MetricGraph& prev)> step;
    /// Declared disconnecting edge enumeration, ordered by non-decreasing
    /// available_level; nullopt once exhausted.
    std::function<std::optional<EnumeratedEdge>(int index)> enumeration;
    /// Declared limit of ell(G_n) (the space's H^1) when known in closed form.
    std::optional<double> total_length_limit;
    /// Upper bound on total mass still to be added after level n. Required
    /// for certified limits.
    std::function<double(int level)> tail_bound;
    /// True when refinement never shortens distances between tracked points
    /// (holds for every built-in family). Required for certified limits.
    bool distances_stable = false;
    /// Host edge of a not-yet-materialized enumeration entry, for d^f weights.
    std::function<std::optional<EdgeId>(int entry, int level)> entry_host;
    /// Reference constants for tests; never consumed by library code.
    std::unordered_map<std::string, double> reference;
    std::string name;
  };

  explicit RefinementSequence(Config config);

  const MetricGraph& level(int n) const;
  double level_length(int n) const { return level(n).total_length(); }

  /// Map a point of G_from to the identical point of G_to (to >= from).
  PointRef track(const PointRef& p, int from_level, int to_level) const;

  /// Enumeration access. entry(i) forces generation up to the entry's level.
  std::optional<EnumeratedEdge> entry(int index) const;
  /// Indices of entries with available_level <= n.
  std::vector<int> entries_available(int n) const;
  /// Current fragments of an enumeration entry's edge at level n.
  std::vector<EdgeId> entry_fragments(int index, int n) const;
  /// Current fragments at level n of an edge that existed at some level.
  std::vector<EdgeId> fragments_of(EdgeId e, int n) const;

  std::optional<double> total_length_limit() const { return config_.total_length_limit; }
  bool has_tail_bound() const { return static_cast<bool>(config_.tail_bound); }
  double tail_bound(int n) const;
  bool distances_stable() const { return config_.distances_stable; }
  std::optional<EdgeId> entry_host(int entry, int n) const;
  const std::unordered_map<std::string, double>& reference() const { return config_.reference; }
  const std::string& name() const { return config_.name; }

 private:
  void ensure_level(int n) const;

  Config config_;
  mutable std::mutex mutex_;
  mutable std::deque<MetricGraph> levels_;  // deque: stable references across growth
  mutable std::unordered_map<EdgeId, SubdivisionRecord> lineage_;
  mutable std::unordered_map<EdgeId, int> created_level_;
  mutable std::vector<std::optional<EnumeratedEdge>> enum_cache_;
  mutable bool enum_exhausted_ = false;
};

}  // namespace graphlike
