#pragma once

#include <map>
#include <string>

#include "graphlike/refine.hpp"

namespace graphlike::spaces {

/// Summable positive sequence (1-based) with a certified tail.
class LengthSequence {
 public:
  static LengthSequence geometric(double first, double ratio);
  static LengthSequence explicit_list(std::vector<double> values, double tail_bound);

  double value(int i) const;       // i >= 1
  double tail_after(int i) const;  // upper bound on sum_{j > i} value(j)
  double total() const;

 private:
  LengthSequence() = default;
  bool geometric_ = false;
  double first_ = 0.0, ratio_ = 0.0;
  std::vector<double> values_;
  double tail_ = 0.0;
};

/// Wedge of loops at a basepoint; loop i is a pair of parallel edges of
/// length l_i / 2. G_0 is the bare basepoint, step n attaches loop n.
RefinementSequence hawaiian(const LengthSequence& loop_lengths);

/// Unit interval with every Smith-Volterra-Cantor removed interval doubled by
/// a parallel copy; generation k removes 2^(k-1) middles of length 4^-k.
RefinementSequence fat_cantor();

/// Sierpinski-gasket variant where every articulation point is an edge.
/// Sides of a level-k triangle have length side * ratio^k; the articulation
/// edge carved from a side at the next level has length side*(1-2r)*r^k.
/// Requires ratio in (0, 1/3) so that total length stays finite.
RefinementSequence gasket_edges(double side, double ratio);

/// Static four-edge fixture: v0-v1-v2-v3 unit path plus a parallel v1-v2 edge.
RefinementSequence dumbbell();

/// Constant sequence of an arbitrary finite graph; its declared enumeration
/// is the full edge set in id order.
RefinementSequence constant_sequence(MetricGraph g, std::string name = "custom");

/// Family tag plus parameters, serializable by the CLI.
struct SpaceSpec {
  std::string family;  // hawaiian | fat_cantor | gasket_edges | dumbbell | custom
  std::map<std::string, double> params;
  std::string graph_file;  // custom only

  static SpaceSpec parse(const std::string& family,
                         const std::map<std::string, double>& params);
};

RefinementSequence from_spec(const SpaceSpec& spec);

}  // namespace graphlike::spaces
