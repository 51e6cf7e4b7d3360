#include "graphlike/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

namespace graphlike::spaces {

LengthSequence LengthSequence::geometric(double first, double ratio) {
  if (!(first > 0.0))
    throw Error(ErrorCode::non_positive_length, "first term must be positive");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw Error(ErrorCode::non_summable, "geometric ratio must lie in (0,1)");
  LengthSequence s;
  s.geometric_ = true;
  s.first_ = first;
  s.ratio_ = ratio;
  return s;
}

LengthSequence LengthSequence::explicit_list(std::vector<double> values, double tail_bound) {
  for (double v : values)
    if (!(v > 0.0)) throw Error(ErrorCode::non_positive_length, "sequence values");
  if (!(tail_bound >= 0.0) || !std::isfinite(tail_bound))
    throw Error(ErrorCode::non_summable, "explicit sequences need a finite tail bound");
  LengthSequence s;
  s.values_ = std::move(values);
  s.tail_ = tail_bound;
  return s;
}

double LengthSequence::value(int i) const {
  if (i < 1) throw Error(ErrorCode::invalid_argument, "1-based index");
  if (geometric_) return first_ * std::pow(ratio_, i - 1);
  if (i > static_cast<int>(values_.size()))
    throw Error(ErrorCode::invalid_argument, "index beyond the explicit prefix");
  return values_[static_cast<std::size_t>(i - 1)];
}

double LengthSequence::tail_after(int i) const {
  if (geometric_) return first_ * std::pow(ratio_, i) / (1.0 - ratio_);
  double t = tail_;
  for (int j = static_cast<int>(values_.size()); j > i; --j)
    t += values_[static_cast<std::size_t>(j - 1)];
  return t;
}

double LengthSequence::total() const { return value(1) + tail_after(1); }

RefinementSequence hawaiian(const LengthSequence& loop_lengths) {
  auto lengths = std::make_shared<LengthSequence>(loop_lengths);
  RefinementSequence::Config cfg;
  cfg.name = "hawaiian";
  cfg.initial = MetricGraph({0}, {});
  // Step n attaches loop n: vertex n, edge ids 2(n-1) and 2(n-1)+1.
  cfg.step = [lengths](int n, const MetricGraph& prev) {
    double half = lengths->value(n) / 2.0;
    RefinementStep step;
    VertexId tip = prev.next_vertex_id();
    step.moves.push_back(AddEdgeMove{0, tip, half});
    step.moves.push_back(AddEdgeMove{0, tip, half});
    return step;
  };
  cfg.enumeration = [lengths](int index) -> std::optional<EnumeratedEdge> {
    int loop = index / 2 + 1;
    return EnumeratedEdge{loop, static_cast<EdgeId>(index), lengths->value(loop) / 2.0,
                          false};
  };
  cfg.total_length_limit = lengths->total();
  cfg.tail_bound = [lengths](int n) { return lengths->tail_after(n); };
  cfg.distances_stable = true;
  // Unmaterialized loops are disjoint from every level; no host edge.
  cfg.entry_host = [](int, int) { return std::nullopt; };
  cfg.reference = {{"h1", lengths->total()},
                   {"r_o_a1", lengths->value(1) / 4.0},
                   {"l1", lengths->value(1)}};
  return RefinementSequence(std::move(cfg));
}

namespace {

struct FatCantorState {
  struct Segment {
    EdgeId edge;
    double lo, hi;
  };
  struct Interval {
    int generation;
    double lo, hi;
    EdgeId base, copy;
  };
  std::mutex mutex;
  std::vector<std::vector<Segment>> segments_by_level;  // leaves of the base path
  std::vector<Interval> intervals;                      // creation order
};

}  // namespace

RefinementSequence fat_cantor() {
  auto st = std::make_shared<FatCantorState>();
  st->segments_by_level.push_back({FatCantorState::Segment{0, 0.0, 1.0}});

  RefinementSequence::Config cfg;
  cfg.name = "fat_cantor";
  cfg.initial = MetricGraph({0, 1}, {Edge{0, 0, 1, 1.0}});
  cfg.step = [st](int n, const MetricGraph& prev) {
    std::lock_guard<std::mutex> lock(st->mutex);
    // Steps are generated sequentially; simulate the id allocation so the
    // layout bookkeeping matches apply_step exactly.
    VertexId nv = prev.next_vertex_id();
    EdgeId ne = prev.next_edge_id();
    RefinementStep step;
    std::vector<FatCantorState::Segment> next_level;
    double w = std::pow(4.0, -n);
    for (const auto& seg : st->segments_by_level.back()) {
      double c = (seg.lo + seg.hi) / 2.0;
      double il = c - w / 2.0, ir = c + w / 2.0;
      double len = seg.hi - seg.lo;
      step.moves.push_back(SubdivideMove{seg.edge, (il - seg.lo) / len});
      VertexId v1 = nv++;
      EdgeId left = ne++;
      EdgeId rest = ne++;
      step.moves.push_back(SubdivideMove{rest, w / (seg.hi - il)});
      VertexId v2 = nv++;
      EdgeId base = ne++;
      EdgeId right = ne++;
      step.moves.push_back(AddEdgeMove{v1, v2, w});
      EdgeId copy = ne++;
      next_level.push_back(FatCantorState::Segment{left, seg.lo, il});
      next_level.push_back(FatCantorState::Segment{right, ir, seg.hi});
      st->intervals.push_back(FatCantorState::Interval{n, il, ir, base, copy});
    }
    st->segments_by_level.push_back(std::move(next_level));
    return step;
  };
  cfg.enumeration = [st](int index) -> std::optional<EnumeratedEdge> {
    int interval = index / 2;
    // Interval m lives in generation g with first index 2^(g-1)-1.
    int g = 1;
    std::int64_t count = 1, first = 0;
    while (interval >= first + count) {
      first += count;
      count *= 2;
      ++g;
    }
    double w = std::pow(4.0, -g);
    {
      std::lock_guard<std::mutex> lock(st->mutex);
      if (interval < static_cast<int>(st->intervals.size())) {
        const auto& rec = st->intervals[static_cast<std::size_t>(interval)];
        return EnumeratedEdge{rec.generation, index % 2 == 0 ? rec.base : rec.copy, w,
                              false};
      }
    }
    // Edge ids are deterministic: generation g starts after all shallower
    // work; per segment the ids run (left, rest, base, right, copy) but only
    // base/copy are enumerated. Rather than re-deriving the arithmetic, the
    // caller must have refined to level g; report availability so it can.
    return EnumeratedEdge{g, -1, w, false};
  };
  cfg.total_length_limit = 1.5;
  cfg.tail_bound = [](int n) { return 0.5 * std::pow(2.0, -n); };
  cfg.distances_stable = true;
  cfg.entry_host = [st](int index, int level) -> std::optional<EdgeId> {
    std::lock_guard<std::mutex> lock(st->mutex);
    int interval = index / 2;
    if (interval < static_cast<int>(st->intervals.size())) {
      const auto& rec = st->intervals[static_cast<std::size_t>(interval)];
      if (rec.generation <= level) return std::nullopt;  // materialized
      if (level < static_cast<int>(st->segments_by_level.size())) {
        for (const auto& seg : st->segments_by_level[static_cast<std::size_t>(level)])
          if (seg.lo <= rec.lo && rec.hi <= seg.hi) return seg.edge;
      }
    }
    return std::nullopt;
  };
  cfg.reference = {{"h1", 1.5}, {"edge_sum", 1.0}, {"r_0_1_limit", 0.75}};
  return RefinementSequence(std::move(cfg));
}

namespace {

struct GasketState {
  struct Triangle {
    VertexId corner[3];
    EdgeId side[3];  // side[i] joins corner[i] and corner[(i+1)%3]
  };
  struct Articulation {
    int level;
    EdgeId edge;
    EdgeId parent_side;  // side it was carved from
    double length;
  };
  std::mutex mutex;
  std::vector<Triangle> triangles;  // current level
  std::vector<Articulation> articulations;
  std::unordered_map<EdgeId, std::pair<EdgeId, int>> parent_of;  // piece -> (side, level)
};

}  // namespace

RefinementSequence gasket_edges(double side, double ratio) {
  if (!(side > 0.0)) throw Error(ErrorCode::non_positive_length, "side");
  if (!(ratio > 0.0 && ratio < 1.0 / 3.0))
    throw Error(ErrorCode::non_summable,
                "3^k articulation edges per level force ratio < 1/3 for finite length");

  auto st = std::make_shared<GasketState>();
  st->triangles.push_back(GasketState::Triangle{{0, 1, 2}, {0, 1, 2}});

  RefinementSequence::Config cfg;
  cfg.name = "gasket_edges";
  cfg.initial = MetricGraph(
      {0, 1, 2}, {Edge{0, 0, 1, side}, Edge{1, 1, 2, side}, Edge{2, 2, 0, side}});
  cfg.step = [st, side, ratio](int n, const MetricGraph& prev) {
    std::lock_guard<std::mutex> lock(st->mutex);
    double parent_len = side * std::pow(ratio, n - 1);
    double child_len = side * std::pow(ratio, n);
    double eps = parent_len - 2.0 * child_len;
    VertexId nv = prev.next_vertex_id();
    EdgeId ne = prev.next_edge_id();
    RefinementStep step;
    std::vector<GasketState::Triangle> next;
    next.reserve(st->triangles.size() * 3);
    for (const auto& tri : st->triangles) {
      VertexId near_cut[3];   // cut vertex on side i next to corner[i]
      VertexId far_cut[3];    // cut vertex on side i next to corner[(i+1)%3]
      EdgeId near_piece[3];   // piece of side i incident to corner[i]
      EdgeId far_piece[3];    // piece of side i incident to corner[(i+1)%3]
      for (int i = 0; i < 3; ++i) {
        const Edge& e = prev.edge(tri.side[i]);
        bool forward = (e.u == tri.corner[i]);
        // First cut at child_len from the side's u endpoint, second cut
        // carves the eps middle out of the remaining piece.
        step.moves.push_back(SubdivideMove{tri.side[i], child_len / parent_len});
        VertexId v1 = nv++;
        EdgeId u_piece = ne++;
        EdgeId rest = ne++;
        step.moves.push_back(SubdivideMove{rest, eps / (parent_len - child_len)});
        VertexId v2 = nv++;
        EdgeId mid = ne++;
        EdgeId v_piece = ne++;
        st->articulations.push_back(GasketState::Articulation{n, mid, tri.side[i], eps});
        st->parent_of[u_piece] = {tri.side[i], n};
        st->parent_of[v_piece] = {tri.side[i], n};
        if (forward) {
          near_cut[i] = v1;
          far_cut[i] = v2;
          near_piece[i] = u_piece;
          far_piece[i] = v_piece;
        } else {
          near_cut[i] = v2;
          far_cut[i] = v1;
          near_piece[i] = v_piece;
          far_piece[i] = u_piece;
        }
      }
      // Corner triangle at corner[i] uses the near piece of side i, the far
      // piece of side i-1, and a fresh inner side joining the two cuts.
      for (int i = 0; i < 3; ++i) {
        int prev_side = (i + 2) % 3;
        step.moves.push_back(AddEdgeMove{near_cut[i], far_cut[prev_side], child_len});
        EdgeId inner = ne++;
        GasketState::Triangle child;
        child.corner[0] = tri.corner[i];
        child.corner[1] = near_cut[i];
        child.corner[2] = far_cut[prev_side];
        child.side[0] = near_piece[i];
        child.side[1] = inner;
        child.side[2] = far_piece[prev_side];
        next.push_back(child);
      }
    }
    st->triangles = std::move(next);
    return step;
  };
  cfg.enumeration = [st, side, ratio](int index) -> std::optional<EnumeratedEdge> {
    std::lock_guard<std::mutex> lock(st->mutex);
    if (index < static_cast<int>(st->articulations.size())) {
      const auto& a = st->articulations[static_cast<std::size_t>(index)];
      return EnumeratedEdge{a.level, a.edge, a.length, false};
    }
    // 3^1 + ... + 3^k articulation edges exist after level k.
    std::int64_t total = 0, per_level = 3;
    int level = 1;
    while (total + per_level <= index) {
      total += per_level;
      per_level *= 3;
      ++level;
    }
    double eps = side * (1.0 - 2.0 * ratio) * std::pow(ratio, level - 1);
    return EnumeratedEdge{level, -1, eps, false};
  };
  double limit = 3.0 * side * (1.0 - 2.0 * ratio) / (1.0 - 3.0 * ratio);
  cfg.total_length_limit = limit;
  cfg.tail_bound = [side, ratio](int n) {
    // Remaining mass is exactly the current side mass: 3^{n+1} * L_{n+1} + ...
    return side * std::pow(3.0 * ratio, n + 1) / (1.0 - 3.0 * ratio);
  };
  cfg.distances_stable = true;
  cfg.entry_host = [st](int index, int level) -> std::optional<EdgeId> {
    std::lock_guard<std::mutex> lock(st->mutex);
    if (index >= static_cast<int>(st->articulations.size())) return std::nullopt;
    const auto& a = st->articulations[static_cast<std::size_t>(index)];
    if (a.level <= level) return std::nullopt;  // materialized
    EdgeId cur = a.parent_side;                 // side at a.level - 1
    int cur_level = a.level - 1;
    while (cur_level > level) {
      auto it = st->parent_of.find(cur);
      if (it == st->parent_of.end()) return std::nullopt;  // inner side: new material
      cur = it->second.first;
      cur_level = it->second.second - 1;
    }
    return cur;
  };
  cfg.reference = {{"h1", limit}, {"side", side}, {"ratio", ratio}};
  return RefinementSequence(std::move(cfg));
}

RefinementSequence dumbbell() {
  MetricGraph g({0, 1, 2, 3}, {Edge{0, 0, 1, 1.0}, Edge{1, 1, 2, 1.0}, Edge{2, 1, 2, 1.0},
                               Edge{3, 2, 3, 1.0}});
  return constant_sequence(std::move(g), "dumbbell");
}

RefinementSequence constant_sequence(MetricGraph g, std::string name) {
  auto edges = std::make_shared<std::vector<std::pair<EdgeId, double>>>();
  for (const Edge& e : g.edges()) edges->emplace_back(e.id, e.length);
  std::sort(edges->begin(), edges->end());
  double total = g.total_length();
  RefinementSequence::Config cfg;
  cfg.name = std::move(name);
  cfg.initial = std::move(g);
  cfg.step = [](int, const MetricGraph&) { return RefinementStep{}; };
  cfg.enumeration = [edges](int index) -> std::optional<EnumeratedEdge> {
    if (index >= static_cast<int>(edges->size())) return std::nullopt;
    const auto& [id, len] = (*edges)[static_cast<std::size_t>(index)];
    return EnumeratedEdge{0, id, len, false};
  };
  cfg.total_length_limit = total;
  cfg.tail_bound = [](int) { return 0.0; };
  cfg.distances_stable = true;
  if (cfg.name == "dumbbell")
    cfg.reference = {{"h1", 4.0}, {"r_v0_v3", 2.5}, {"diam", 3.0}};
  return RefinementSequence(std::move(cfg));
}

SpaceSpec SpaceSpec::parse(const std::string& family,
                           const std::map<std::string, double>& params) {
  SpaceSpec spec;
  spec.family = family;
  spec.params = params;
  if (family != "hawaiian" && family != "fat_cantor" && family != "gasket_edges" &&
      family != "dumbbell" && family != "custom")
    throw Error(ErrorCode::invalid_argument, "unknown family " + family);
  return spec;
}

RefinementSequence from_spec(const SpaceSpec& spec) {
  auto param = [&spec](const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
  };
  for (const auto& [key, value] : spec.params) {
    (void)value;
    if (key != "first" && key != "ratio" && key != "side")
      throw Error(ErrorCode::invalid_argument, "unknown parameter " + key);
  }
  if (spec.family == "hawaiian")
    return hawaiian(
        LengthSequence::geometric(param("first", 0.5), param("ratio", 0.5)));
  if (spec.family == "fat_cantor") return fat_cantor();
  if (spec.family == "gasket_edges")
    return gasket_edges(param("side", 1.0), param("ratio", 0.25));
  if (spec.family == "dumbbell") return dumbbell();
  throw Error(ErrorCode::invalid_argument,
              "custom specs are built from a graph via constant_sequence");
}

}  // namespace graphlike::spaces
