#pragma once

#include <string>

namespace graphlike {

struct DecompositionSummary {
  double eps = 0.0;
  double sum_discrepancy = 0.0;
  double leftover_h1 = 0.0;
  int pseudo_edge_count = 0;
  int level = -1;
};

/// Numeric interval with provenance: estimate +- halfwidth, certified at
/// level n_certified by the recorded decomposition budgets.
struct CertifiedValue {
  double estimate = 0.0;
  double halfwidth = 0.0;
  int n_certified = -1;
  bool certified = false;  // false: budget exhausted, fields hold best effort
  DecompositionSummary summary;
  std::string note;
};

}  // namespace graphlike
