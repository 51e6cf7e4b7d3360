#include "graphlike/electrical.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_set>

namespace graphlike::electrical {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Vertex indices of the component containing p (breadth-first).
std::vector<std::uint32_t> component_indices(const MetricGraph& g, std::size_t p_index) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(p_index)};
  seen[p_index] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId v = g.vertex_ids()[queue[head]];
    for (std::uint32_t ei : g.incident(v)) {
      const Edge& e = g.edges()[ei];
      std::size_t wi = g.vertex_index(e.other(v));
      if (!seen[wi]) {
        seen[wi] = 1;
        queue.push_back(static_cast<std::uint32_t>(wi));
      }
    }
  }
  return queue;
}

// Grounded Laplacian solve on a reduced network: vertices and edges are
// local arrays, not a MetricGraph.
struct LocalNetwork {
  struct LocalEdge {
    std::int64_t u, v;  // local vertex slots
    double length;
    bool alive = true;
  };
  std::vector<LocalEdge> edges;
  std::vector<std::vector<std::int64_t>> incident;  // lazily compacted
  std::vector<char> vertex_alive;

  std::size_t degree(std::int64_t v) {
    compact(v);
    return incident[static_cast<std::size_t>(v)].size();
  }
  void compact(std::int64_t v) {
    auto& list = incident[static_cast<std::size_t>(v)];
    list.erase(std::remove_if(list.begin(), list.end(),
                              [this](std::int64_t e) {
                                return !edges[static_cast<std::size_t>(e)].alive;
                              }),
               list.end());
  }
};

// Reconstruction records for eliminated vertices, replayed in reverse.
struct CopyPotential {
  std::int64_t v, from;
};
struct SeriesPotential {
  std::int64_t v, x, y;
  double lx, ly;  // chain lengths v-x and v-y
};
using ReduceRecord = std::variant<CopyPotential, SeriesPotential>;

std::vector<double> solve_core(const LocalNetwork& net,
                               const std::vector<std::int64_t>& core_slot,
                               const std::vector<std::int64_t>& core_vertices,
                               std::int64_t lp, std::int64_t lq);

// Solve the grounded Laplacian system for the p-component, phi(q) = 0.
// Degree-1/degree-2 vertices and parallel edges are eliminated first (the
// huge conductance ranges of refined fixtures would otherwise defeat the
// factorization); the remaining core goes to a direct solver with
// extended-precision iterative refinement.
std::vector<double> solve_potentials(const MetricGraph& g, VertexId p, VertexId q) {
  std::size_t pi = g.vertex_index(p);
  std::size_t qi = g.vertex_index(q);
  std::vector<std::uint32_t> comp = component_indices(g, pi);
  std::vector<std::int64_t> slot(g.vertex_count(), -1);
  bool q_found = false;
  for (std::size_t k = 0; k < comp.size(); ++k) {
    slot[comp[k]] = static_cast<std::int64_t>(k);
    if (comp[k] == qi) q_found = true;
  }
  if (!q_found)
    throw Error(ErrorCode::disconnected, "source and sink lie in different components");
  if (p == q) throw Error(ErrorCode::same_point, "source equals sink");

  // Build the local network over the component.
  LocalNetwork net;
  net.incident.resize(comp.size());
  net.vertex_alive.assign(comp.size(), 1);
  for (const Edge& e : g.edges()) {
    std::int64_t su = slot[g.vertex_index(e.u)];
    if (su < 0) continue;
    std::int64_t sv = slot[g.vertex_index(e.v)];
    std::int64_t idx = static_cast<std::int64_t>(net.edges.size());
    net.edges.push_back(LocalNetwork::LocalEdge{su, sv, e.length, true});
    net.incident[static_cast<std::size_t>(su)].push_back(idx);
    net.incident[static_cast<std::size_t>(sv)].push_back(idx);
  }
  std::int64_t lp = slot[pi], lq = slot[qi];

  std::vector<ReduceRecord> records;
  std::vector<std::int64_t> queue;
  for (std::size_t v = 0; v < comp.size(); ++v) queue.push_back(static_cast<std::int64_t>(v));
  auto push_edge = [&net](std::int64_t u, std::int64_t v, double len) {
    std::int64_t idx = static_cast<std::int64_t>(net.edges.size());
    net.edges.push_back(LocalNetwork::LocalEdge{u, v, len, true});
    net.incident[static_cast<std::size_t>(u)].push_back(idx);
    net.incident[static_cast<std::size_t>(v)].push_back(idx);
  };
  while (!queue.empty()) {
    std::int64_t v = queue.back();
    queue.pop_back();
    if (!net.vertex_alive[static_cast<std::size_t>(v)] || v == lp || v == lq) continue;
    net.compact(v);
    auto& inc = net.incident[static_cast<std::size_t>(v)];
    if (inc.size() > 2) {
      // merge parallel incident edges to the same neighbour, then re-check
      std::unordered_map<std::int64_t, std::int64_t> first;
      bool merged = false;
      for (std::int64_t ei : inc) {
        auto& e = net.edges[static_cast<std::size_t>(ei)];
        std::int64_t w = e.u == v ? e.v : e.u;
        auto [it, fresh] = first.emplace(w, ei);
        if (!fresh) {
          auto& keep = net.edges[static_cast<std::size_t>(it->second)];
          keep.length = 1.0 / (1.0 / keep.length + 1.0 / e.length);
          e.alive = false;
          merged = true;
        }
      }
      if (merged) {
        queue.push_back(v);
        continue;
      }
      continue;  // genuine branch vertex: stays in the core
    }
    if (inc.empty()) {
      net.vertex_alive[static_cast<std::size_t>(v)] = 0;  // isolated by eliminations
      records.push_back(CopyPotential{v, lq});
      continue;
    }
    if (inc.size() == 1) {
      auto& e = net.edges[static_cast<std::size_t>(inc[0])];
      std::int64_t w = e.u == v ? e.v : e.u;
      e.alive = false;
      net.vertex_alive[static_cast<std::size_t>(v)] = 0;
      records.push_back(CopyPotential{v, w});
      queue.push_back(w);
      continue;
    }
    auto& a = net.edges[static_cast<std::size_t>(inc[0])];
    auto& b = net.edges[static_cast<std::size_t>(inc[1])];
    std::int64_t x = a.u == v ? a.v : a.u;
    std::int64_t y = b.u == v ? b.v : b.u;
    if (x == y) {
      // a dead cycle hanging at x: no net current, flat potential
      a.alive = false;
      b.alive = false;
      net.vertex_alive[static_cast<std::size_t>(v)] = 0;
      records.push_back(CopyPotential{v, x});
      queue.push_back(x);
      continue;
    }
    double la = a.length, lb = b.length;
    a.alive = false;
    b.alive = false;
    net.vertex_alive[static_cast<std::size_t>(v)] = 0;
    records.push_back(SeriesPotential{v, x, y, la, lb});
    push_edge(x, y, la + lb);
    queue.push_back(x);
    queue.push_back(y);
  }

  // Merge any remaining parallel edges between core vertices.
  {
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> first;
    for (std::size_t ei = 0; ei < net.edges.size(); ++ei) {
      auto& e = net.edges[ei];
      if (!e.alive) continue;
      auto key = std::minmax(e.u, e.v);
      auto [it, fresh] = first.emplace(std::pair{key.first, key.second},
                                       static_cast<std::int64_t>(ei));
      if (!fresh) {
        auto& keep = net.edges[static_cast<std::size_t>(it->second)];
        keep.length = 1.0 / (1.0 / keep.length + 1.0 / e.length);
        e.alive = false;
      }
    }
  }

  // Core system over the surviving vertices.
  std::vector<std::int64_t> core_slot(comp.size(), -1);
  std::vector<std::int64_t> core_vertices;
  for (std::size_t v = 0; v < comp.size(); ++v) {
    if (!net.vertex_alive[v]) continue;
    core_slot[v] = static_cast<std::int64_t>(core_vertices.size());
    core_vertices.push_back(static_cast<std::int64_t>(v));
  }
  std::vector<double> core_phi = solve_core(net, core_slot, core_vertices, lp, lq);

  // Replay eliminations to recover all potentials.
  std::vector<double> local_phi(comp.size(), 0.0);
  for (std::size_t v = 0; v < comp.size(); ++v)
    if (core_slot[v] >= 0) local_phi[v] = core_phi[static_cast<std::size_t>(core_slot[v])];
  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    if (std::holds_alternative<CopyPotential>(*it)) {
      const auto& r = std::get<CopyPotential>(*it);
      local_phi[static_cast<std::size_t>(r.v)] = local_phi[static_cast<std::size_t>(r.from)];
    } else {
      const auto& r = std::get<SeriesPotential>(*it);
      double px = local_phi[static_cast<std::size_t>(r.x)];
      double py = local_phi[static_cast<std::size_t>(r.y)];
      local_phi[static_cast<std::size_t>(r.v)] = px - (px - py) * r.lx / (r.lx + r.ly);
    }
  }

  std::vector<double> phi(g.vertex_count(), kNaN);
  for (std::size_t k = 0; k < comp.size(); ++k) phi[comp[k]] = local_phi[k];
  return phi;
}

// Direct solve of the (already reduced) core network: returns potentials per
// core slot with phi(q) = 0 and unit current from p to q.
std::vector<double> solve_core(const LocalNetwork& net,
                               const std::vector<std::int64_t>& core_slot,
                               const std::vector<std::int64_t>& core_vertices,
                               std::int64_t lp, std::int64_t lq) {
  std::size_t n = core_vertices.size();
  std::size_t q_slot = static_cast<std::size_t>(core_slot[static_cast<std::size_t>(lq)]);
  std::size_t p_slot = static_cast<std::size_t>(core_slot[static_cast<std::size_t>(lp)]);

  // Reduced system: drop q's row/column.
  auto reduced = [&](std::size_t s) -> std::int64_t {
    if (s == q_slot) return -1;
    return static_cast<std::int64_t>(s < q_slot ? s : s - 1);
  };
  std::size_t m = n - 1;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(net.edges.size() * 4);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (const auto& e : net.edges) {
    if (!e.alive) continue;
    double c = 1.0 / e.length;
    std::int64_t ru = reduced(static_cast<std::size_t>(core_slot[static_cast<std::size_t>(e.u)]));
    std::int64_t rv = reduced(static_cast<std::size_t>(core_slot[static_cast<std::size_t>(e.v)]));
    if (ru >= 0) diag[ru] += c;
    if (rv >= 0) diag[rv] += c;
    if (ru >= 0 && rv >= 0) {
      triplets.emplace_back(static_cast<int>(ru), static_cast<int>(rv), -c);
      triplets.emplace_back(static_cast<int>(rv), static_cast<int>(ru), -c);
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i),
                          diag[static_cast<Eigen::Index>(i)]);

  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  std::int64_t rp = reduced(p_slot);
  if (rp < 0) throw Error(ErrorCode::same_point, "source equals sink");
  b[rp] = 1.0;

  Eigen::VectorXd x;
  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  const double target = 1e-12 * scale;

  // Residuals accumulated in extended precision so iterative refinement can
  // push the solution error well below the plain factorization accuracy on
  // ill-conditioned path-like Laplacians.
  auto residual = [&](const Eigen::VectorXd& xx) {
    std::vector<long double> acc(m, 0.0L);
    for (const auto& t : triplets)
      acc[static_cast<std::size_t>(t.row())] +=
          static_cast<long double>(t.value()) * static_cast<long double>(xx[t.col()]);
    Eigen::VectorXd r(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
      r[static_cast<Eigen::Index>(i)] = static_cast<double>(
          static_cast<long double>(b[static_cast<Eigen::Index>(i)]) - acc[i]);
    return r;
  };
  auto refine = [&](auto&& solver) {
    x = solver.solve(b);
    for (int round = 0; round < 8; ++round) {
      Eigen::VectorXd r = residual(x);
      if (r.cwiseAbs().maxCoeff() <= target && round > 0) break;
      Eigen::VectorXd dx = solver.solve(r);
      x += dx;
      if (dx.cwiseAbs().maxCoeff() <= 1e-16 * std::max(1.0, x.cwiseAbs().maxCoeff()))
        break;
    }
  };

  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  a.setFromTriplets(triplets.begin(), triplets.end());

  if (m <= 512) {
    Eigen::MatrixXd dense(a);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(dense);
    refine(ldlt);
  } else {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
    if (ldlt.info() == Eigen::Success) {
      refine(ldlt);
    } else {
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
          cg(a);
      cg.setTolerance(1e-14);
      cg.setMaxIterations(static_cast<int>(std::min<std::size_t>(20 * m, 2000000)));
      refine(cg);
    }
  }

  std::vector<double> phi(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::int64_t r = reduced(k);
    phi[k] = (r < 0) ? 0.0 : x[r];
  }
  return phi;
}

}  // namespace

void validate_flow(const MetricGraph& g, const Flow& flow, double tol) {
  if (flow.host_uid != g.uid())
    throw Error(ErrorCode::host_mismatch, "flow bound to a different graph");
  if (flow.edge_values.size() != g.edge_count())
    throw Error(ErrorCode::invalid_flow, "edge value count mismatch");
  g.vertex_index(flow.source);
  g.vertex_index(flow.sink);
  std::vector<double> net(g.vertex_count(), 0.0);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    net[g.vertex_index(e.u)] += flow.edge_values[i];
    net[g.vertex_index(e.v)] -= flow.edge_values[i];
  }
  double scale = std::max(1.0, std::abs(flow.strength));
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    VertexId v = g.vertex_ids()[i];
    double expect = 0.0;
    if (v == flow.source) expect += flow.strength;
    if (v == flow.sink) expect -= flow.strength;
    if (std::abs(net[i] - expect) > tol * scale)
      throw Error(ErrorCode::invalid_flow,
                  "node law violated at vertex " + std::to_string(v));
  }
}

double energy(const MetricGraph& g, const Flow& flow, bool trusted) {
  if (!trusted) validate_flow(g, flow);
  if (flow.host_uid != g.uid())
    throw Error(ErrorCode::host_mismatch, "flow bound to a different graph");
  double sum = 0.0;
  for (std::size_t i = 0; i < g.edge_count(); ++i)
    sum += flow.edge_values[i] * flow.edge_values[i] * g.edges()[i].length;
  return sum;
}

std::vector<double> potentials(const MetricGraph& g, VertexId p, VertexId q) {
  if (p == q) throw Error(ErrorCode::same_point, "p == q");
  return solve_potentials(g, p, q);
}

Flow unit_current(const MetricGraph& g, VertexId p, VertexId q) {
  std::vector<double> phi = potentials(g, p, q);
  Flow flow;
  flow.host_uid = g.uid();
  flow.source = p;
  flow.sink = q;
  flow.strength = 1.0;
  flow.edge_values.resize(g.edge_count(), 0.0);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    double pu = phi[g.vertex_index(e.u)];
    double pv = phi[g.vertex_index(e.v)];
    if (std::isnan(pu) || std::isnan(pv)) continue;
    flow.edge_values[i] = (pu - pv) / e.length;
  }
  return flow;
}

double effective_resistance(const MetricGraph& g, const PointRef& p, const PointRef& q) {
  ResolvedPoints rp = resolve_points(g, p, q);
  if (rp.p == rp.q) return 0.0;
  std::vector<double> phi = solve_potentials(rp.graph, rp.p, rp.q);
  return phi[rp.graph.vertex_index(rp.p)];
}

double resistance_oracle(const MetricGraph& g, VertexId p, VertexId q) {
  std::size_t pi = g.vertex_index(p);
  std::size_t qi = g.vertex_index(q);
  if (p == q) return 0.0;
  std::vector<std::uint32_t> comp = component_indices(g, pi);
  std::unordered_set<std::uint32_t> in_comp(comp.begin(), comp.end());
  if (!in_comp.count(static_cast<std::uint32_t>(qi)))
    throw Error(ErrorCode::disconnected, "p and q lie in different components");

  std::vector<std::size_t> comp_edges;
  for (std::size_t i = 0; i < g.edge_count(); ++i)
    if (in_comp.count(static_cast<std::uint32_t>(g.vertex_index(g.edges()[i].u))))
      comp_edges.push_back(i);
  if (comp_edges.size() > 16)
    throw Error(ErrorCode::too_large, "oracle enumeration is limited to 16 edges");

  std::size_t nv = comp.size();
  std::vector<std::uint32_t> local(g.vertex_count(), 0);
  for (std::size_t k = 0; k < comp.size(); ++k) local[comp[k]] = static_cast<std::uint32_t>(k);

  struct LocalEdge {
    std::uint32_t a, b;
    double conductance;
  };
  std::vector<LocalEdge> ledges;
  ledges.reserve(comp_edges.size());
  for (std::size_t i : comp_edges) {
    const Edge& e = g.edges()[i];
    ledges.push_back(LocalEdge{local[g.vertex_index(e.u)], local[g.vertex_index(e.v)],
                               1.0 / e.length});
  }
  std::uint32_t lp = local[pi], lq = local[qi];

  double tree_sum = 0.0;    // spanning trees, weight = product of conductances
  double forest_sum = 0.0;  // 2-forests separating p from q
  std::vector<std::uint32_t> parent(nv);
  const std::size_t ne = ledges.size();
  for (std::uint32_t mask = 0; mask < (1u << ne); ++mask) {
    std::size_t bits = static_cast<std::size_t>(__builtin_popcount(mask));
    bool tree_candidate = (bits == nv - 1);
    bool forest_candidate = (nv >= 2 && bits == nv - 2);
    if (!tree_candidate && !forest_candidate) continue;
    for (std::size_t i = 0; i < nv; ++i) parent[i] = static_cast<std::uint32_t>(i);
    auto find = [&](std::uint32_t a) {
      while (parent[a] != a) {
        parent[a] = parent[parent[a]];
        a = parent[a];
      }
      return a;
    };
    bool acyclic = true;
    double weight = 1.0;
    for (std::size_t i = 0; i < ne && acyclic; ++i) {
      if (!(mask & (1u << i))) continue;
      std::uint32_t ra = find(ledges[i].a), rb = find(ledges[i].b);
      if (ra == rb) {
        acyclic = false;
        break;
      }
      parent[rb] = ra;
      weight *= ledges[i].conductance;
    }
    if (!acyclic) continue;
    if (tree_candidate) {
      tree_sum += weight;  // acyclic with nv-1 edges == spanning tree
    } else if (find(lp) != find(lq)) {
      forest_sum += weight;  // exactly two components, p and q separated
    }
  }
  if (tree_sum == 0.0)
    throw Error(ErrorCode::disconnected, "no spanning tree found");
  return forest_sum / tree_sum;
}

MetricGraph replace_subnetwork(const MetricGraph& g, const std::vector<EdgeId>& part,
                               VertexId p, VertexId q) {
  if (part.empty()) throw Error(ErrorCode::invalid_argument, "empty subnetwork");
  MetricGraph h = edge_subgraph(g, part);
  if (!h.is_connected())
    throw Error(ErrorCode::disconnected_part, "subnetwork is not connected");
  if (!h.has_vertex(p) || !h.has_vertex(q))
    throw Error(ErrorCode::boundary_not_two, "p, q must belong to the subnetwork");

  std::unordered_set<EdgeId> in_part(part.begin(), part.end());
  std::vector<VertexId> boundary;
  for (VertexId v : h.vertex_ids()) {
    bool outside = false;
    for (std::uint32_t ei : g.incident(v))
      if (!in_part.count(g.edges()[ei].id)) outside = true;
    if (outside) boundary.push_back(v);
  }
  std::vector<VertexId> expect{std::min(p, q), std::max(p, q)};
  if (boundary != expect)
    throw Error(ErrorCode::boundary_not_two,
                "subnetwork boundary is not exactly {p, q} (size " +
                    std::to_string(boundary.size()) + ")");

  double r = effective_resistance(h, vertex_ref(p), vertex_ref(q));

  std::vector<VertexId> vertices;
  for (VertexId v : g.vertex_ids())
    if (!h.has_vertex(v) || v == p || v == q) vertices.push_back(v);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (!in_part.count(e.id)) edges.push_back(e);
  edges.push_back(Edge{g.next_edge_id(), p, q, r});
  return MetricGraph(std::move(vertices), std::move(edges), g.next_vertex_id(),
                     g.next_edge_id() + 1);
}

ContractionBoundsResult contraction_bounds(const MetricGraph& g,
                                           const std::vector<VertexId>& part, VertexId p,
                                           VertexId q, double tol) {
  double before = effective_resistance(g, vertex_ref(p), vertex_ref(q));
  Contraction c = contract_vertices(g, part);
  VertexId pp = c.projection.at(p);
  VertexId pq = c.projection.at(q);
  double after =
      pp == pq ? 0.0 : effective_resistance(c.graph, vertex_ref(pp), vertex_ref(pq));
  bool within = after <= before + tol && after >= before - c.removed_length - tol;
  return ContractionBoundsResult{before, after, c.removed_length, within, std::move(c)};
}

PseudoEdgeBoundsResult pseudo_edge_resistance_bounds(const MetricGraph& h, VertexId f0,
                                                     VertexId f1, double h1_f,
                                                     double d_endpoints, double tol) {
  if (!h.is_connected())
    throw Error(ErrorCode::disconnected, "carrier graph must be connected");
  for (VertexId f : {f0, f1})
    if (h.degree(f) != 1)
      throw Error(ErrorCode::endpoint_degree_not_one,
                  "vertex " + std::to_string(f) + " has degree " +
                      std::to_string(h.degree(f)));
  ResistanceBounds bounds;
  bounds.lower = std::max(0.0, 2.0 * d_endpoints - h1_f);
  bounds.upper = h1_f;
  bounds.provenance = "pseudo-edge two-sided bound (h1 = " + std::to_string(h1_f) +
                      ", d = " + std::to_string(d_endpoints) + ")";
  double r = effective_resistance(h, vertex_ref(f0), vertex_ref(f1));
  bool within = r >= bounds.lower - tol && r <= bounds.upper + tol;
  return PseudoEdgeBoundsResult{std::move(bounds), r, within};
}

PathContractionResult path_contraction_transform(const MetricGraph& h, const PathResult& p,
                                                 double tol) {
  for (VertexId v : p.vertices) h.vertex_index(v);
  for (EdgeId e : p.edges) h.edge_index(e);

  PathContractionResult out;
  out.path_length = p.length;
  out.host_length = h.total_length();

  MetricGraph cur = h;
  std::vector<VertexId> path_vertices = p.vertices;
  std::vector<EdgeId> path_edges = p.edges;

  auto path_position = [&](VertexId v) -> std::int64_t {
    for (std::size_t i = 0; i < path_vertices.size(); ++i)
      if (path_vertices[i] == v) return static_cast<std::int64_t>(i);
    return -1;
  };

  for (;;) {
    // Off-path components: vertex blobs of cur minus path vertices, plus each
    // chord edge (both endpoints on the path, not a path edge) alone.
    std::unordered_set<VertexId> on_path(path_vertices.begin(), path_vertices.end());
    std::unordered_set<EdgeId> on_path_edges(path_edges.begin(), path_edges.end());

    struct OffComponent {
      std::vector<VertexId> vertices;  // off-path vertices (empty for a chord)
      double length = 0.0;             // total length of its edges
      std::int64_t lo = std::numeric_limits<std::int64_t>::max();
      std::int64_t hi = -1;  // span of attachment positions on the path
    };
    std::vector<OffComponent> comps;

    {
      std::unordered_map<VertexId, std::size_t> comp_of;
      for (VertexId v : cur.vertex_ids()) {
        if (on_path.count(v) || comp_of.count(v)) continue;
        // BFS over off-path vertices.
        OffComponent oc;
        std::vector<VertexId> queue{v};
        comp_of[v] = comps.size();
        while (!queue.empty()) {
          VertexId w = queue.back();
          queue.pop_back();
          oc.vertices.push_back(w);
          for (std::uint32_t ei : cur.incident(w)) {
            const Edge& e = cur.edges()[ei];
            VertexId o = e.other(w);
            if (on_path.count(o)) continue;
            if (!comp_of.count(o)) {
              comp_of[o] = comps.size();
              queue.push_back(o);
            }
          }
        }
        comps.push_back(std::move(oc));
      }
      // Assign edges and attachment spans.
      for (const Edge& e : cur.edges()) {
        if (on_path_edges.count(e.id)) continue;
        bool u_on = on_path.count(e.u) != 0, v_on = on_path.count(e.v) != 0;
        if (u_on && v_on) {
          OffComponent oc;  // chord: its own one-edge component
          oc.length = e.length;
          oc.lo = std::min(path_position(e.u), path_position(e.v));
          oc.hi = std::max(path_position(e.u), path_position(e.v));
          comps.push_back(std::move(oc));
        } else {
          std::size_t ci = comp_of.at(u_on ? e.v : e.u);
          comps[ci].length += e.length;
          if (u_on) {
            std::int64_t pos = path_position(e.u);
            comps[ci].lo = std::min(comps[ci].lo, pos);
            comps[ci].hi = std::max(comps[ci].hi, pos);
          }
          if (v_on) {
            std::int64_t pos = path_position(e.v);
            comps[ci].lo = std::min(comps[ci].lo, pos);
            comps[ci].hi = std::max(comps[ci].hi, pos);
          }
        }
      }
    }

    if (comps.empty()) break;
    const OffComponent& c = comps.front();
    if (c.hi < 0)
      throw Error(ErrorCode::path_not_in_component,
                  "off-path component with no attachment to the path");

    // Minimal covering subpath P_C and its length.
    double pc_len = 0.0;
    for (std::int64_t i = c.lo; i < c.hi; ++i)
      pc_len += cur.edge(path_edges[static_cast<std::size_t>(i)]).length;
    if (pc_len > c.length + tol)
      throw Error(ErrorCode::not_shortest_path,
                  "covering subpath longer than its component; the path was not shortest");

    std::vector<VertexId> to_contract(c.vertices);
    for (std::int64_t i = c.lo; i <= c.hi; ++i)
      to_contract.push_back(path_vertices[static_cast<std::size_t>(i)]);
    Contraction cont = contract_vertices(cur, to_contract);

    // Collapse the covered span of the path to the merged vertex.
    std::vector<VertexId> new_pv;
    std::vector<EdgeId> new_pe;
    for (std::size_t i = 0; i < path_vertices.size(); ++i) {
      VertexId mapped = cont.projection.at(path_vertices[i]);
      if (new_pv.empty() || new_pv.back() != mapped) new_pv.push_back(mapped);
      if (i + 1 < path_vertices.size()) {
        bool covered = static_cast<std::int64_t>(i) >= c.lo &&
                       static_cast<std::int64_t>(i) < c.hi;
        if (!covered) new_pe.push_back(path_edges[i]);
      }
    }
    cur = std::move(cont.graph);
    path_vertices = std::move(new_pv);
    path_edges = std::move(new_pe);
    ++out.steps;
  }

  double plen = 0.0;
  for (EdgeId e : path_edges) plen += cur.edge(e).length;
  out.contracted_length = plen;
  out.bound_holds = plen >= 2.0 * out.path_length - out.host_length - tol;
  return out;
}

}  // namespace graphlike::electrical
