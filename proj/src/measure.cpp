#include "graphlike/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "cut_engine.hpp"
#include "graphlike/decomp.hpp"

namespace graphlike::measure {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Greedy prefix of the declared enumeration until every component diameter
// drops below delta. Shared by edge_cut_for_delta and the estimate driver.
struct GreedyState {
  internal::CutEngine engine;
  std::vector<int> entries;
  int next_entry = 0;
};

// Extends the greedy cut; returns false when the enumeration is exhausted at
// this level before reaching the target.
bool extend_until_below(GreedyState& st, const RefinementSequence& seq, int n,
                        double delta) {
  while (!st.engine.all_diameters_below(delta)) {
    std::optional<EnumeratedEdge> e = seq.entry(st.next_entry);
    if (!e || e->available_level > n) return false;
    st.engine.remove(seq.entry_fragments(st.next_entry, n));
    st.entries.push_back(st.next_entry);
    ++st.next_entry;
  }
  return true;
}

EdgeCut assemble_cut(const GreedyState& st, const RefinementSequence& seq, int n,
                     double delta) {
  EdgeCut cut;
  cut.delta = delta;
  cut.level = n;
  cut.host_uid = seq.level(n).uid();
  cut.edges = st.engine.cut();
  cut.entries = st.entries;
  cut.cut_length = st.engine.cut_length();
  for (const internal::CutComponent* comp : st.engine.components())
    cut.components.push_back(
        EdgeCut::Component{comp->vertices, st.engine.exact_diameter(*comp)});
  return cut;
}

}  // namespace

EdgeCut edge_cut_for_delta(const RefinementSequence& seq, int n, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::invalid_argument, "delta must be positive");
  const MetricGraph& g = seq.level(n);
  if (!g.is_connected())
    throw Error(ErrorCode::disconnected, "G_n must be connected");
  GreedyState st{internal::CutEngine::whole_graph(g), {}, 0};
  if (!extend_until_below(st, seq, n, delta))
    throw Error(ErrorCode::cut_not_achievable,
                "enumeration exhausted at level " + std::to_string(n) +
                    "; refine further");
  return assemble_cut(st, seq, n, delta);
}

EdgeCut finest_edge_cut(const RefinementSequence& seq, int n) {
  const MetricGraph& g = seq.level(n);
  if (!g.is_connected())
    throw Error(ErrorCode::disconnected, "G_n must be connected");
  GreedyState st{internal::CutEngine::whole_graph(g), {}, 0};
  for (;; ++st.next_entry) {
    std::optional<EnumeratedEdge> e = seq.entry(st.next_entry);
    if (!e || e->available_level > n) break;
    st.engine.remove(seq.entry_fragments(st.next_entry, n));
    st.entries.push_back(st.next_entry);
  }
  double max_diam = 0.0;
  for (const internal::CutComponent* comp : st.engine.components())
    max_diam = std::max(max_diam, st.engine.exact_diameter(*comp));
  double delta = std::max(max_diam * (1.0 + 1e-12), 1e-300);
  return assemble_cut(st, seq, n, delta);
}

double h_g_delta(const RefinementSequence& seq, int n, const EdgeCut& cut) {
  const MetricGraph& g = seq.level(n);
  if (cut.host_uid != g.uid() || cut.level != n)
    throw Error(ErrorCode::stale_cut, "cut was produced for a different level graph");
  double cut_length = 0.0;
  for (EdgeId e : cut.edges) cut_length += g.edge(e).length;  // throws on stale ids
  double diam_sum = 0.0;
  for (const auto& comp : cut.components) diam_sum += comp.diameter;
  return cut_length + diam_sum;
}

MeasureEstimate hausdorff_estimate(const RefinementSequence& seq, double target_gap,
                                   const HausdorffOptions& options) {
  if (!(target_gap > 0.0))
    throw Error(ErrorCode::invalid_argument, "target gap must be positive");
  if (!seq.has_tail_bound())
    throw Error(ErrorCode::non_summable,
                "certified upper bounds need a declared tail bound");
  MeasureEstimate best;
  best.converged = false;
  double best_gap = kInf;
  for (int n = 0; n <= options.n_max; ++n) {
    const MetricGraph& g = seq.level(n);
    double ell = g.total_length();
    double tail = seq.tail_bound(n);
    if (!g.is_connected()) continue;
    if (tail > target_gap && tail < best_gap) {
      // cannot converge at this level; remember the tail-only bound cheaply
      best_gap = tail;
      best = MeasureEstimate{ell, ell + tail, ell, n, 0.0, false};
      continue;
    }
    if (tail > target_gap) continue;

    EdgeCut cut = finest_edge_cut(seq, n);
    double h = h_g_delta(seq, n, cut);
    double gap = (ell + tail) - h;
    if (gap < best_gap) {
      best_gap = gap;
      best = MeasureEstimate{ell, ell + tail, h, n, cut.delta, false};
    }
    if (gap <= target_gap) {
      best.converged = true;
      return best;
    }
    if (g.edge_count() > options.edge_cap) break;
  }
  return best;  // budget exhausted: best sandwich achieved
}

DistanceSequence d_ell(const RefinementSequence& seq, const PointRef& p, const PointRef& q,
                       int base_level, int n_max) {
  if (n_max < base_level) throw Error(ErrorCode::invalid_argument, "empty level range");
  DistanceSequence out;
  for (int n = base_level; n <= n_max; ++n) {
    PointRef pn = seq.track(p, base_level, n);
    PointRef qn = seq.track(q, base_level, n);
    out.values.emplace_back(n, distance(seq.level(n), pn, qn));
  }
  out.limit_estimate = out.values.back().second;
  out.tail_uncertainty = seq.distances_stable() ? 0.0 : kInf;
  return out;
}

namespace {

// Edge weights for d^f at a level: materialized enumeration entries carry
// their own weight; unmaterialized ones weight their host edge. Entries must
// not have been subdivided.
std::unordered_map<EdgeId, double> df_weight_table(const RefinementSequence& seq,
                                                   const FWeights& weights, int n) {
  // Host lookups need the entries' levels generated, even beyond n.
  int deepest = n;
  for (int i = 0; i < static_cast<int>(weights.prefix.size()); ++i) {
    std::optional<EnumeratedEdge> e = seq.entry(i);
    if (!e) break;
    deepest = std::max(deepest, e->available_level);
  }
  seq.level(deepest);
  std::unordered_map<EdgeId, double> wt;
  for (int i = 0; i < static_cast<int>(weights.prefix.size()); ++i) {
    if (!(weights.prefix[static_cast<std::size_t>(i)] >= 0.0))
      throw Error(ErrorCode::non_summable, "weights must be nonnegative");
    std::optional<EnumeratedEdge> e = seq.entry(i);
    if (!e) throw Error(ErrorCode::invalid_argument, "weight prefix exceeds enumeration");
    double w = weights.prefix[static_cast<std::size_t>(i)];
    if (e->available_level <= n) {
      std::vector<EdgeId> frags = seq.entry_fragments(i, n);
      if (frags.size() != 1)
        throw Error(ErrorCode::invalid_argument,
                    "declared enumeration edge was subdivided; d^f weights undefined");
      wt[frags.front()] += w;
    } else if (std::optional<EdgeId> host = seq.entry_host(i, n)) {
      wt[*host] += w;
    }
    // entries disjoint from G_n contribute nothing at this level
  }
  return wt;
}

double weighted_vertex_distance(const MetricGraph& g,
                                const std::unordered_map<EdgeId, double>& wt, VertexId a,
                                VertexId b) {
  std::vector<double> dist(g.vertex_count(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  std::size_t ai = g.vertex_index(a), bi = g.vertex_index(b);
  dist[ai] = 0.0;
  heap.emplace(0.0, ai);
  while (!heap.empty()) {
    auto [d, vi] = heap.top();
    heap.pop();
    if (d > dist[vi]) continue;
    if (vi == bi) return d;
    VertexId v = g.vertex_ids()[vi];
    for (std::uint32_t ei : g.incident(v)) {
      const Edge& e = g.edges()[ei];
      auto it = wt.find(e.id);
      double w = it == wt.end() ? 0.0 : it->second;
      std::size_t other = g.vertex_index(e.other(v));
      if (d + w < dist[other]) {
        dist[other] = d + w;
        heap.emplace(dist[other], other);
      }
    }
  }
  if (dist[bi] == kInf)
    throw Error(ErrorCode::disconnected, "points lie in different components");
  return dist[bi];
}

// Realize points as vertices under a weight table; a split edge's weight is
// distributed by the arclength fraction of the split.
struct WeightedResolved {
  MetricGraph graph;
  std::unordered_map<EdgeId, double> weights;
  VertexId p, q;
};

WeightedResolved resolve_weighted(const MetricGraph& g,
                                  std::unordered_map<EdgeId, double> wt, const PointRef& p,
                                  const PointRef& q) {
  g.validate_point(p);
  g.validate_point(q);
  MetricGraph work = g;
  auto realize = [&work, &wt](const PointRef& r, std::optional<EdgePoint> other)
      -> std::pair<VertexId, std::optional<EdgePoint>> {
    if (is_vertex(r)) return {std::get<VertexId>(r), other};
    EdgePoint ep = std::get<EdgePoint>(r);
    SubdivideResult sub = subdivide(work, ep.edge, ep.fraction);
    auto it = wt.find(ep.edge);
    if (it != wt.end()) {
      double w = it->second;
      wt.erase(it);
      wt[sub.left_edge] += w * ep.fraction;
      wt[sub.right_edge] += w * (1.0 - ep.fraction);
    }
    std::optional<EdgePoint> mapped = other;
    if (other && other->edge == ep.edge) {
      if (other->fraction == ep.fraction) {
        mapped = std::nullopt;  // same point as r
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
    qv = pv;
  } else {
    qv = realize(PointRef{std::in_place_index<1>, *q_rest}, std::nullopt).first;
  }
  return WeightedResolved{std::move(work), std::move(wt), pv, qv};
}

}  // namespace

DistanceSequence d_f(const RefinementSequence& seq, const FWeights& weights,
                     const PointRef& p, const PointRef& q, int base_level, int n_max) {
  if (n_max < base_level) throw Error(ErrorCode::invalid_argument, "empty level range");
  if (!(weights.tail >= 0.0) || !std::isfinite(weights.tail))
    throw Error(ErrorCode::non_summable, "weight tail bound must be finite");
  DistanceSequence out;
  for (int n = base_level; n <= n_max; ++n) {
    const MetricGraph& g = seq.level(n);
    auto wt = df_weight_table(seq, weights, n);
    PointRef pn = seq.track(p, base_level, n);
    PointRef qn = seq.track(q, base_level, n);
    WeightedResolved res = resolve_weighted(g, std::move(wt), pn, qn);
    double d = res.p == res.q
                   ? 0.0
                   : weighted_vertex_distance(res.graph, res.weights, res.p, res.q);
    out.values.emplace_back(n, d);
  }
  out.limit_estimate = out.values.back().second;
  out.tail_uncertainty = weights.tail;
  return out;
}

CertifiedValue intrinsic_distance(const RefinementSequence& seq, const PointRef& p,
                                  const PointRef& q, double tol, int level_budget,
                                  int base_level) {
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tol must be positive");
  CertifiedValue best;
  best.certified = false;
  best.halfwidth = kInf;
  if (!seq.has_tail_bound() || !seq.distances_stable()) {
    best.note = "sequence lacks tail bound or distance stability; cannot certify";
    return best;
  }
  for (int n = base_level; n <= level_budget; ++n) {
    double tail = seq.tail_bound(n);
    if (tail > tol / 2.0) continue;
    const MetricGraph& g = seq.level(n);
    if (!g.is_connected()) continue;
    PointRef pn = seq.track(p, base_level, n);
    PointRef qn = seq.track(q, base_level, n);

    decomp::DecomposeOptions opts;
    opts.eps = std::max(tol / 2.0, 1e-15);
    opts.forbidden = {pn, qn};
    decomp::Decomposition dec = decomp::decompose(seq, n, opts);

    double gap = dec.sum_discrepancy + 2.0 * dec.leftover_h1 + 2.0 * tail;
    double dn = distance(dec.host, dec.map_point(pn), dec.map_point(qn));
    CertifiedValue value;
    value.estimate = dn - gap / 2.0;
    value.halfwidth = gap / 2.0;
    value.n_certified = n;
    value.certified = gap <= 2.0 * tol && !dec.budget_exhausted;
    value.summary = DecompositionSummary{opts.eps, dec.sum_discrepancy, dec.leftover_h1,
                                         static_cast<int>(dec.pseudo_edges.size()), n};
    if (value.halfwidth < best.halfwidth) best = value;
    if (value.certified) return value;
  }
  best.note = "level budget exhausted before reaching the requested tolerance";
  return best;
}

}  // namespace graphlike::measure
