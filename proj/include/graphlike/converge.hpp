#pragma once

#include "graphlike/certified.hpp"
#include "graphlike/decomp.hpp"
#include "graphlike/refine.hpp"

namespace graphlike::converge {

/// R_n = effective resistance between the tracked points at each level of
/// [n_from, n_to]; points are given at base_level.
std::vector<std::pair<int, double>> resistance_sequence(const RefinementSequence& seq,
                                                        const PointRef& p, const PointRef& q,
                                                        int base_level, int n_from, int n_to);

/// Executes the convergence proof as an algorithm: find a level n0 and a
/// decomposition whose certified budgets (discrepancy and leftover mass, both
/// padded by the declared tail) are below eps/4 with p, q inside leftover
/// components; then |R_n - R_m| < eps is guaranteed for n, m >= n0. Returns
/// estimate R_{n0}, halfwidth eps/2.
CertifiedValue certified_resistance(const RefinementSequence& seq, const PointRef& p,
                                    const PointRef& q, double eps, int level_budget = 24,
                                    int base_level = 0);

struct InvarianceReport {
  int trials = 0;
  double max_relative_deviation = 0.0;
  bool pass = false;
};

/// Random subdivisions and id relabelings must not move the resistance by
/// more than 1e-9 relative.
InvarianceReport invariance_suite(const MetricGraph& g, const PointRef& p, const PointRef& q,
                                  int trials, std::uint64_t seed = 20240901);

}  // namespace graphlike::converge
