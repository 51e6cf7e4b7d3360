#pragma once

#include <utility>

#include "graphlike/certified.hpp"
#include "graphlike/refine.hpp"

namespace graphlike::measure {

/// A finite edge cut of G_n whose leftover components all have diameter
/// below delta, produced greedily along the declared enumeration.
struct EdgeCut {
  double delta = 0.0;
  int level = -1;
  std::uint64_t host_uid = 0;
  std::vector<EdgeId> edges;  // removed fragments, in greedy order
  std::vector<int> entries;   // enumeration indices consumed
  double cut_length = 0.0;
  struct Component {
    std::vector<VertexId> vertices;
    double diameter = 0.0;
  };
  std::vector<Component> components;
};

EdgeCut edge_cut_for_delta(const RefinementSequence& seq, int n, double delta);

/// The full-enumeration cut at level n (every available declared edge
/// removed); its delta is just above the largest leftover component diameter.
EdgeCut finest_edge_cut(const RefinementSequence& seq, int n);

/// ell(E_delta) + sum of component diameters, recomputed and validated
/// against the cut (StaleCut when the cut does not match G_n).
double h_g_delta(const RefinementSequence& seq, int n, const EdgeCut& cut);

/// Two-sided estimate of H^1: lower = ell(G_n), upper = ell(G_n) + declared
/// tail; the cut estimator h value is carried alongside and agrees with the
/// lower bound within the achieved gap at the reported (n, delta).
struct MeasureEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double h_value = 0.0;
  int n = -1;
  double delta = 0.0;
  bool converged = false;
  double gap() const { return upper - h_value; }
};

struct HausdorffOptions {
  int n_max = 22;
  std::size_t edge_cap = 2'000'000;  // refuse to refine past this size
};

MeasureEstimate hausdorff_estimate(const RefinementSequence& seq, double target_gap,
                                   const HausdorffOptions& options = {});

struct DistanceSequence {
  std::vector<std::pair<int, double>> values;  // (n, d_n)
  double limit_estimate = 0.0;
  double tail_uncertainty = 0.0;  // +inf when the sequence cannot certify
};

/// d^ell_n between tracked points for n in [base_level, n_max].
DistanceSequence d_ell(const RefinementSequence& seq, const PointRef& p, const PointRef& q,
                       int base_level, int n_max);

/// Summable weight assignment on the declared enumeration: an explicit
/// prefix plus a bound on everything omitted.
struct FWeights {
  std::vector<double> prefix;
  double tail = 0.0;
};

/// d^f_n with edge weights equal to the summed assigned lengths of the
/// enumeration entries contained in each edge; weight-0 edges are allowed
/// here (and only here).
DistanceSequence d_f(const RefinementSequence& seq, const FWeights& weights,
                     const PointRef& p, const PointRef& q, int base_level, int n_max);

/// Intrinsic metric rho(p, q) with a certified interval; the gap comes from
/// the decomposition totals (leftover mass + discrepancies + tail).
CertifiedValue intrinsic_distance(const RefinementSequence& seq, const PointRef& p,
                                  const PointRef& q, double tol, int level_budget = 24,
                                  int base_level = 0);

}  // namespace graphlike::measure
