#include "graphlike/converge.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "graphlike/electrical.hpp"

namespace graphlike::converge {

std::vector<std::pair<int, double>> resistance_sequence(const RefinementSequence& seq,
                                                        const PointRef& p, const PointRef& q,
                                                        int base_level, int n_from,
                                                        int n_to) {
  if (n_from < base_level || n_to < n_from)
    throw Error(ErrorCode::invalid_argument, "level range must start at base_level");
  std::vector<std::pair<int, double>> out;
  for (int n = n_from; n <= n_to; ++n) {
    PointRef pn = seq.track(p, base_level, n);
    PointRef qn = seq.track(q, base_level, n);
    out.emplace_back(n, electrical::effective_resistance(seq.level(n), pn, qn));
  }
  return out;
}

namespace {

// True when the point avoids every pseudo-edge closure (it then lies in a
// leftover component, as the proof requires).
bool in_leftover(const decomp::Decomposition& dec, const PointRef& p) {
  PointRef mapped = dec.map_point(p);
  if (is_vertex(mapped)) {
    VertexId v = std::get<VertexId>(mapped);
    for (const auto& pe : dec.pseudo_edges) {
      if (pe.f0 == v || pe.f1 == v) return false;
      if (std::find(pe.interior.begin(), pe.interior.end(), v) != pe.interior.end())
        return false;
    }
    return true;
  }
  EdgeId e = std::get<EdgePoint>(mapped).edge;
  for (const auto& pe : dec.pseudo_edges)
    if (std::binary_search(pe.edges.begin(), pe.edges.end(), e)) return false;
  return true;
}

}  // namespace

CertifiedValue certified_resistance(const RefinementSequence& seq, const PointRef& p,
                                    const PointRef& q, double eps, int level_budget,
                                    int base_level) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be positive");
  CertifiedValue best;
  best.certified = false;
  best.halfwidth = std::numeric_limits<double>::infinity();
  if (!seq.has_tail_bound() || !seq.distances_stable()) {
    best.note = "sequence lacks tail bound or distance stability; cannot certify";
    return best;
  }
  double budget = eps / 4.0;
  for (int n = base_level; n <= level_budget; ++n) {
    double tail = seq.tail_bound(n);
    if (tail >= budget) continue;  // both certified budgets carry the tail
    const MetricGraph& g = seq.level(n);
    if (!g.is_connected()) continue;
    PointRef pn = seq.track(p, base_level, n);
    PointRef qn = seq.track(q, base_level, n);

    decomp::DecomposeOptions opts;
    opts.eps = budget - tail;
    opts.m = 8.0;
    opts.forbidden = {pn, qn};  // p, q must sit in leftover components
    decomp::Decomposition dec = decomp::decompose(seq, n, opts);

    double delta_budget = dec.sum_discrepancy + tail;
    double leftover_budget = dec.leftover_h1 + tail;
    bool budgets_ok = !dec.budget_exhausted && delta_budget < budget &&
                      leftover_budget < budget && in_leftover(dec, pn) &&
                      in_leftover(dec, qn);

    double rn = electrical::effective_resistance(dec.host, dec.map_point(pn),
                                                 dec.map_point(qn));
    CertifiedValue value;
    value.estimate = rn;
    value.halfwidth = eps / 2.0;
    value.n_certified = n;
    value.certified = budgets_ok;
    value.summary = DecompositionSummary{opts.eps, dec.sum_discrepancy, dec.leftover_h1,
                                         static_cast<int>(dec.pseudo_edges.size()), n};
    if (budgets_ok) return value;
    value.note = "budgets not met at this level";
    if (delta_budget + leftover_budget < best.halfwidth) {
      best = value;
      best.certified = false;
      best.halfwidth = delta_budget + leftover_budget;
    }
  }
  best.note = "level budget exhausted; best achieved budgets reported in halfwidth";
  return best;
}

InvarianceReport invariance_suite(const MetricGraph& g, const PointRef& p, const PointRef& q,
                                  int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::invalid_argument, "trials >= 1");
  double reference = electrical::effective_resistance(g, p, q);
  std::mt19937_64 rng(seed);
  InvarianceReport report;
  report.trials = trials;

  MetricGraph current = g;
  PointRef cp = p, cq = q;
  for (int t = 0; t < trials; ++t) {
    if (t % 2 == 0) {
      // Random subdivision. Tracked edge points are re-expressed like track().
      std::uniform_int_distribution<std::size_t> pick(0, current.edge_count() - 1);
      std::uniform_real_distribution<double> frac(0.1, 0.9);
      EdgeId target = current.edges()[pick(rng)].id;
      double s = frac(rng);
      SubdivideResult sub = subdivide(current, target, s);
      auto remap = [&](PointRef r) -> PointRef {
        if (is_vertex(r)) return r;
        EdgePoint ep = std::get<EdgePoint>(r);
        if (ep.edge != target) return r;
        if (ep.fraction == s) return vertex_ref(sub.mid_vertex);
        if (ep.fraction < s) return edge_point(sub.left_edge, ep.fraction / s);
        return edge_point(sub.right_edge, (ep.fraction - s) / (1.0 - s));
      };
      cp = remap(cp);
      cq = remap(cq);
      current = std::move(sub.graph);
    } else {
      // Random relabeling of vertex and edge ids.
      std::vector<VertexId> vperm = current.vertex_ids();
      std::shuffle(vperm.begin(), vperm.end(), rng);
      std::unordered_map<VertexId, VertexId> vmap;
      VertexId base = current.next_vertex_id();
      for (std::size_t i = 0; i < vperm.size(); ++i)
        vmap[current.vertex_ids()[i]] = base + vperm[i];
      std::vector<VertexId> vertices;
      for (auto& [old_id, new_id] : vmap) {
        (void)old_id;
        vertices.push_back(new_id);
      }
      std::vector<Edge> edges;
      EdgeId ebase = current.next_edge_id();
      std::vector<EdgeId> eperm(current.edge_count());
      for (std::size_t i = 0; i < eperm.size(); ++i) eperm[i] = static_cast<EdgeId>(i);
      std::shuffle(eperm.begin(), eperm.end(), rng);
      std::unordered_map<EdgeId, EdgeId> emap;
      for (std::size_t i = 0; i < current.edge_count(); ++i) {
        const Edge& e = current.edges()[i];
        EdgeId nid = ebase + eperm[i];
        emap[e.id] = nid;
        edges.push_back(Edge{nid, vmap.at(e.u), vmap.at(e.v), e.length});
      }
      auto remap = [&](PointRef r) -> PointRef {
        if (is_vertex(r)) return vertex_ref(vmap.at(std::get<VertexId>(r)));
        EdgePoint ep = std::get<EdgePoint>(r);
        return edge_point(emap.at(ep.edge), ep.fraction);
      };
      cp = remap(cp);
      cq = remap(cq);
      current = MetricGraph(std::move(vertices), std::move(edges));
    }
    double r = electrical::effective_resistance(current, cp, cq);
    double dev = std::abs(r - reference) / std::max(1e-300, std::abs(reference));
    report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
  }
  report.pass = report.max_relative_deviation < 1e-9;
  return report;
}

}  // namespace graphlike::converge
