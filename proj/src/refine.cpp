#include "graphlike/refine.hpp"

#include <algorithm>
#include <cmath>

namespace graphlike {

StepApplication apply_step(const MetricGraph& g, const RefinementStep& step, int level) {
  double before = g.total_length();
  std::vector<VertexId> vertices = g.vertex_ids();
  std::vector<Edge> edges = g.edges();
  std::unordered_map<EdgeId, std::size_t> eindex;
  eindex.reserve(edges.size() * 2);
  for (std::size_t i = 0; i < edges.size(); ++i) eindex.emplace(edges[i].id, i);
  std::unordered_map<VertexId, bool> vseen;
  vseen.reserve(vertices.size() * 2);
  for (VertexId v : vertices) vseen.emplace(v, true);

  VertexId next_v = g.next_vertex_id();
  EdgeId next_e = g.next_edge_id();

  std::vector<SubdivisionRecord> subdivisions;
  std::vector<EdgeId> added_edges;
  double added_length = 0.0;

  for (const RefinementMove& move : step.moves) {
    if (std::holds_alternative<SubdivideMove>(move)) {
      const auto& m = std::get<SubdivideMove>(move);
      auto it = eindex.find(m.edge);
      if (it == eindex.end())
        throw Error(ErrorCode::unknown_edge, "subdivide " + std::to_string(m.edge));
      if (!(m.fraction > 0.0 && m.fraction < 1.0))
        throw Error(ErrorCode::fraction_out_of_range, std::to_string(m.fraction));
      Edge old = edges[it->second];
      VertexId mid = next_v++;
      EdgeId left = next_e++;
      EdgeId right = next_e++;
      double left_len = m.fraction * old.length;
      double right_len = old.length - left_len;
      if (!(left_len > 0.0) || !(right_len > 0.0))
        throw Error(ErrorCode::fraction_out_of_range, "zero-length piece");
      // Replace in place, append the sibling.
      edges[it->second] = Edge{left, old.u, mid, left_len};
      eindex.erase(old.id);
      eindex.emplace(left, it->second);
      eindex.emplace(right, edges.size());
      edges.push_back(Edge{right, mid, old.v, right_len});
      vertices.push_back(mid);
      vseen.emplace(mid, true);
      subdivisions.push_back(SubdivisionRecord{old.id, left, right, mid, m.fraction, level});
    } else {
      const auto& m = std::get<AddEdgeMove>(move);
      if (!(m.length > 0.0) || !std::isfinite(m.length))
        throw Error(ErrorCode::non_positive_length, std::to_string(m.length));
      if (m.u == m.v) throw Error(ErrorCode::self_loop, "add-edge at " + std::to_string(m.u));
      for (VertexId w : {m.u, m.v}) {
        if (vseen.count(w)) continue;
        if (w != next_v)
          throw Error(ErrorCode::invalid_argument,
                      "new vertex ids must be allocated in order; expected " +
                          std::to_string(next_v) + ", got " + std::to_string(w));
        ++next_v;
        vertices.push_back(w);
        vseen.emplace(w, true);
      }
      EdgeId id = next_e++;
      edges.push_back(Edge{id, m.u, m.v, m.length});
      eindex.emplace(id, edges.size() - 1);
      added_edges.push_back(id);
      added_length += m.length;
    }
  }

  MetricGraph graph(std::move(vertices), std::move(edges), next_v, next_e);
  double after = graph.total_length();
  double scale = std::max({1.0, before, after});
  if (std::abs(after - before - added_length) > 1e-9 * scale)
    throw Error(ErrorCode::invalid_argument, "step does not conserve pre-existing length");
  return StepApplication{std::move(graph), std::move(subdivisions), std::move(added_edges),
                         added_length};
}

RefinementSequence::RefinementSequence(Config config) : config_(std::move(config)) {
  levels_.push_back(config_.initial);
  for (const Edge& e : config_.initial.edges()) created_level_.emplace(e.id, 0);
}

void RefinementSequence::ensure_level(int n) const {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "negative level");
  while (static_cast<int>(levels_.size()) <= n) {
    int next = static_cast<int>(levels_.size());
    RefinementStep step =
        config_.step ? config_.step(next, levels_.back()) : RefinementStep{};
    StepApplication app = apply_step(levels_.back(), step, next);
    for (const SubdivisionRecord& rec : app.subdivisions) {
      lineage_.emplace(rec.parent, rec);
      created_level_.emplace(rec.left, next);
      created_level_.emplace(rec.right, next);
    }
    for (EdgeId e : app.added_edges) created_level_.emplace(e, next);
    levels_.push_back(std::move(app.graph));
  }
}

const MetricGraph& RefinementSequence::level(int n) const {
  std::lock_guard<std::mutex> lock(mutex_);
  ensure_level(n);
  return levels_[static_cast<std::size_t>(n)];
}

PointRef RefinementSequence::track(const PointRef& p, int from_level, int to_level) const {
  if (to_level < from_level)
    throw Error(ErrorCode::invalid_argument, "track goes forward only");
  level(to_level);  // force generation; lineage is complete below
  std::lock_guard<std::mutex> lock(mutex_);
  levels_[static_cast<std::size_t>(from_level)].validate_point(p);
  if (is_vertex(p)) return p;  // vertices persist
  EdgePoint cur = std::get<EdgePoint>(p);
  for (;;) {
    auto it = lineage_.find(cur.edge);
    if (it == lineage_.end() || it->second.level > to_level) break;
    const SubdivisionRecord& rec = it->second;
    if (cur.fraction == rec.fraction) return vertex_ref(rec.mid);
    if (cur.fraction < rec.fraction) {
      cur = EdgePoint{rec.left, cur.fraction / rec.fraction};
    } else {
      cur = EdgePoint{rec.right, (cur.fraction - rec.fraction) / (1.0 - rec.fraction)};
    }
  }
  return PointRef{std::in_place_index<1>, cur};
}

std::optional<EnumeratedEdge> RefinementSequence::entry(int index) const {
  if (index < 0) throw Error(ErrorCode::invalid_argument, "negative entry index");
  std::lock_guard<std::mutex> lock(mutex_);
  while (static_cast<int>(enum_cache_.size()) <= index && !enum_exhausted_) {
    std::optional<EnumeratedEdge> e =
        config_.enumeration ? config_.enumeration(static_cast<int>(enum_cache_.size()))
                            : std::nullopt;
    if (!e) {
      enum_exhausted_ = true;
      break;
    }
    if (e->edge < 0) break;  // metadata only until the level is generated; don't cache
    enum_cache_.push_back(e);
  }
  if (index < static_cast<int>(enum_cache_.size())) return enum_cache_[index];
  if (enum_exhausted_) return std::nullopt;
  return config_.enumeration ? config_.enumeration(index) : std::nullopt;
}

std::vector<int> RefinementSequence::entries_available(int n) const {
  std::vector<int> out;
  for (int i = 0;; ++i) {
    std::optional<EnumeratedEdge> e = entry(i);
    if (!e || e->available_level > n) break;  // ordered by availability
    out.push_back(i);
  }
  return out;
}

std::vector<EdgeId> RefinementSequence::fragments_of(EdgeId e, int n) const {
  level(n);
  std::lock_guard<std::mutex> lock(mutex_);
  auto created = created_level_.find(e);
  if (created == created_level_.end() || created->second > n)
    throw Error(ErrorCode::unknown_edge, "edge " + std::to_string(e) + " at level " +
                                             std::to_string(n));
  std::vector<EdgeId> out;
  std::vector<EdgeId> stack{e};
  while (!stack.empty()) {
    EdgeId cur = stack.back();
    stack.pop_back();
    auto it = lineage_.find(cur);
    if (it == lineage_.end() || it->second.level > n) {
      out.push_back(cur);
      continue;
    }
    stack.push_back(it->second.right);
    stack.push_back(it->second.left);
  }
  return out;
}

std::vector<EdgeId> RefinementSequence::entry_fragments(int index, int n) const {
  std::optional<EnumeratedEdge> e = entry(index);
  if (!e) throw Error(ErrorCode::invalid_argument, "enumeration exhausted");
  if (e->available_level > n)
    throw Error(ErrorCode::unknown_edge, "entry not yet materialized at this level");
  if (e->edge < 0) {
    level(n);  // generating through n resolves the entry
    e = entry(index);
    if (!e || e->edge < 0)
      throw Error(ErrorCode::invalid_argument, "enumeration failed to materialize");
  }
  return fragments_of(e->edge, n);
}

double RefinementSequence::tail_bound(int n) const {
  if (!config_.tail_bound)
    throw Error(ErrorCode::non_summable, "sequence declares no tail bound");
  double t = config_.tail_bound(n);
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::non_summable, "tail bound must be finite and nonnegative");
  return t;
}

std::optional<EdgeId> RefinementSequence::entry_host(int entry_index, int n) const {
  if (!config_.entry_host) return std::nullopt;
  return config_.entry_host(entry_index, n);
}

}  // namespace graphlike
