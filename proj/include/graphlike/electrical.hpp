#pragma once

#include <string>
#include <vector>

#include "graphlike/core.hpp"

namespace graphlike::electrical {

/// Antisymmetric edge flow: edge_values[i] is the flow along edges()[i] in
/// the u -> v direction; Kirchhoff's node law holds away from source/sink.
struct Flow {
  std::uint64_t host_uid = 0;
  VertexId source = 0, sink = 0;
  double strength = 0.0;
  std::vector<double> edge_values;
};

/// Validate host binding, antisymmetric representation (implicit), node law
/// and boundary fluxes up to `tol`.
void validate_flow(const MetricGraph& g, const Flow& flow, double tol = 1e-8);

/// Energy sum i(e)^2 * len(e), each undirected edge counted once (a unit flow
/// on a single edge of length L has energy L).
double energy(const MetricGraph& g, const Flow& flow, bool trusted = false);

/// The energy-minimizing unit-strength p-q flow, from graph Laplacian
/// potentials with conductances 1/len(e).
Flow unit_current(const MetricGraph& g, VertexId p, VertexId q);

/// Potentials phi with unit current injected at p, extracted at q, phi(q)=0;
/// entries are index-aligned with g.vertex_ids(), NaN outside the component.
std::vector<double> potentials(const MetricGraph& g, VertexId p, VertexId q);

/// Energy of the unit current; equals phi(p) - phi(q). Edge-interior points
/// handled by temporary subdivision (never visible to the caller).
double effective_resistance(const MetricGraph& g, const PointRef& p, const PointRef& q);

/// Independent check via the weighted matrix-tree identity: spanning-tree and
/// separating-2-forest sums by explicit subset enumeration; |E| <= 16.
double resistance_oracle(const MetricGraph& g, VertexId p, VertexId q);

/// Replace a two-boundary-vertex subnetwork by one p-q edge of length
/// R_H(p, q); interior vertices disappear, all other resistances preserved.
MetricGraph replace_subnetwork(const MetricGraph& g, const std::vector<EdgeId>& part,
                               VertexId p, VertexId q);

struct ContractionBoundsResult {
  double before = 0.0;
  double after = 0.0;
  double removed_length = 0.0;
  bool within = false;
  Contraction contraction;
};

/// Contract a connected vertex part and verify the resistance drop interval
/// [before - removed_length, before].
ContractionBoundsResult contraction_bounds(const MetricGraph& g,
                                           const std::vector<VertexId>& part, VertexId p,
                                           VertexId q, double tol = 1e-9);

struct ResistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::string provenance;
};

struct PseudoEdgeBoundsResult {
  ResistanceBounds bounds;
  double resistance = 0.0;
  bool within = false;
};

/// Two-sided bounds h1 >= R_H(f0,f1) >= 2*d - h1 for a pseudo-edge carrier
/// graph whose endpoints have degree 1.
PseudoEdgeBoundsResult pseudo_edge_resistance_bounds(const MetricGraph& h, VertexId f0,
                                                     VertexId f1, double h1_f,
                                                     double d_endpoints, double tol = 1e-9);

struct PathContractionResult {
  double path_length = 0.0;        // ell(P)
  double contracted_length = 0.0;  // ell(P')
  double host_length = 0.0;        // ell(H)
  int steps = 0;
  bool bound_holds = false;  // ell(P') >= 2*ell(P) - ell(H) - tol
};

/// Iteratively contract off-path components together with their minimal
/// covering subpaths until only a path remains; verifies the length bound.
/// Throws NotShortestPath when a covering subpath is longer than its
/// component, which contradicts P being shortest.
PathContractionResult path_contraction_transform(const MetricGraph& h, const PathResult& p,
                                                 double tol = 1e-9);

}  // namespace graphlike::electrical
