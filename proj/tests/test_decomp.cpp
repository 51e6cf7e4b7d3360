#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "decomp_checks.hpp"
#include "graphlike/decomp.hpp"
#include "graphlike/spaces.hpp"
#include "helpers.hpp"

using namespace graphlike;
using namespace graphlike::decomp;
using testutil::dumbbell_graph;
using testutil::path_graph;
using testutil::theta_graph;
using testutil::verify_decomposition;

namespace {
DecomposeOptions with_eps(double eps) {
  DecomposeOptions opts;
  opts.eps = eps;
  return opts;
}
}  // namespace

TEST_SUITE_BEGIN("decomp");

TEST_CASE("bridged subarcs on the dumbbell") {
  MetricGraph db = dumbbell_graph();
  PathResult p = shortest_path(db, 0, 3);
  auto bridged = bridged_subarcs(db, p, {0, 3});
  // chord [v1,v2] plus the two endpoint singletons
  REQUIRE(bridged.size() == 3);
  int singletons = 0, chords = 0;
  for (const auto& iv : bridged) {
    if (iv.begin == iv.end) {
      ++singletons;
      CHECK(iv.seeded);
    } else {
      ++chords;
      CHECK(iv.begin == 1);
      CHECK(iv.end == 2);
      CHECK(iv.start_pos == doctest::Approx(1.0));
      CHECK(iv.end_pos == doctest::Approx(2.0));
      CHECK_FALSE(iv.seeded);
    }
  }
  CHECK(singletons == 2);
  CHECK(chords == 1);
}

TEST_CASE("bridged subarcs on a tree are only the endpoint singletons") {
  MetricGraph p = path_graph({1.0, 1.0, 1.0});
  PathResult sp = shortest_path(p, 0, 3);
  auto bridged = bridged_subarcs(p, sp, {0, 3});
  REQUIRE(bridged.size() == 2);
  for (const auto& iv : bridged) CHECK(iv.begin == iv.end);
}

TEST_CASE("bridged subarcs on the theta span the whole path") {
  MetricGraph theta = theta_graph();
  PathResult sp = shortest_path(theta, 0, 1);
  auto bridged = bridged_subarcs(theta, sp, {0, 1});
  int full = 0;
  for (const auto& iv : bridged)
    if (iv.begin == 0 && iv.end == static_cast<int>(sp.vertices.size()) - 1 &&
        iv.begin != iv.end)
      ++full;
  CHECK(full == 2);  // the two unused parallel edges each bridge all of P
}

TEST_CASE("super-bridged merging") {
  auto iv = [](int a, int b, bool seeded) {
    return PathInterval{a, b, double(a), double(b), seeded};
  };
  auto merged = maximal_super_bridged({iv(0, 1, true), iv(1, 2, false)});
  REQUIRE(merged.seeded.size() == 1);
  CHECK(merged.seeded[0].begin == 0);
  CHECK(merged.seeded[0].end == 2);
  CHECK(merged.unseeded.empty());

  auto apart = maximal_super_bridged({iv(0, 1, true), iv(2, 3, true)});
  CHECK(apart.seeded.size() == 2);

  // dumbbell shape: two seeded singletons, one non-seeded middle arc
  auto db = maximal_super_bridged({iv(0, 0, true), iv(3, 3, true), iv(1, 2, false)});
  CHECK(db.seeded.size() == 2);
  REQUIRE(db.unseeded.size() == 1);
  CHECK(db.unseeded[0].begin == 1);
  CHECK(db.unseeded[0].end == 2);
}

TEST_CASE("pseudo_edges_of_component on the cut dumbbell") {
  MetricGraph host = dumbbell_graph();
  MetricGraph k = edge_subgraph(host, {0, 1, 3});  // bridge copy (edge 2) cut away
  PathResult p = shortest_path(k, 0, 3);
  std::vector<PathInterval> seeded;
  for (int i = 0; i < 4; ++i)
    seeded.push_back(PathInterval{i, i, double(i), double(i), true});
  auto ext = pseudo_edges_of_component(host, k, p, {0, 1, 2, 3}, seeded);
  REQUIRE(ext.accepted.size() == 3);
  CHECK(ext.rejects.empty());
  CHECK(ext.leftovers.empty());
  for (const auto& pe : ext.accepted) {
    CHECK(pe.edges.size() == 1);
    CHECK(pe.h1 == doctest::Approx(1.0));
    CHECK(pe.discrepancy == doctest::Approx(0.0));
  }
}

TEST_CASE("pseudo_edges_of_component on a single-edge component") {
  MetricGraph single({0, 1}, {Edge{0, 0, 1, 2.0}});
  PathResult p = shortest_path(single, 0, 1);
  std::vector<PathInterval> seeded{PathInterval{0, 0, 0.0, 0.0, true},
                                   PathInterval{1, 1, 2.0, 2.0, true}};
  auto ext = pseudo_edges_of_component(single, single, p, {0, 1}, seeded);
  REQUIRE(ext.accepted.size() == 1);
  CHECK(ext.accepted[0].h1 == doctest::Approx(2.0));
  CHECK(ext.accepted[0].discrepancy == doctest::Approx(0.0));
}

TEST_CASE("pseudo_edges_of_component rejects a bad frontier") {
  // star legs 0-1, 0-2, 0-3, with an extra cut edge 3-4 making vertex 3 a
  // third frontier point of the one candidate.
  MetricGraph host({0, 1, 2, 3, 4}, {Edge{0, 0, 1, 1.0}, Edge{1, 0, 2, 1.0},
                                     Edge{2, 0, 3, 1.0}, Edge{3, 3, 4, 1.0}});
  MetricGraph k = edge_subgraph(host, {0, 1, 2});
  PathResult p = shortest_path(k, 1, 2);
  std::vector<PathInterval> seeded{PathInterval{0, 0, 0.0, 0.0, true},
                                   PathInterval{2, 2, 2.0, 2.0, true}};
  auto ext = pseudo_edges_of_component(host, k, p, {1, 2}, seeded);
  CHECK(ext.accepted.empty());
  REQUIRE(ext.rejects.size() == 1);
  CHECK(ext.rejects[0].h1 == doctest::Approx(3.0));
}

TEST_CASE("decompose the dumbbell exactly") {
  auto dec = decompose(dumbbell_graph(), with_eps(0.1));
  verify_decomposition(dec);
  CHECK(dec.pseudo_edges.size() == 4);
  CHECK(dec.sum_h1 == doctest::Approx(4.0));
  CHECK(dec.sum_discrepancy == 0.0);  // exactly
  CHECK(dec.leftover_h1 == doctest::Approx(0.0));
  CHECK_FALSE(dec.budget_exhausted);
}

TEST_CASE("decompose a bare path makes every edge a pseudo-edge") {
  for (double eps : {0.5, 0.05}) {
    auto dec = decompose(path_graph({1.0, 2.0, 3.0}), with_eps(eps));
    verify_decomposition(dec);
    CHECK(dec.pseudo_edges.size() == 3);
    CHECK(dec.sum_discrepancy == 0.0);
  }
}

TEST_CASE("decompose the theta graph") {
  auto dec = decompose(theta_graph(), with_eps(0.1));
  verify_decomposition(dec);
  CHECK(dec.pseudo_edges.size() == 3);
  CHECK(dec.sum_h1 == doctest::Approx(3.0));
  CHECK(dec.sum_discrepancy < 0.1);
}

TEST_CASE("decompose fat cantor at depth 8") {
  auto seq = spaces::fat_cantor();
  double ell = seq.level_length(8);
  DecomposeOptions opts;
  opts.eps = 0.05 * ell;
  auto dec = decompose(seq, 8, opts);
  verify_decomposition(dec);
  CHECK(dec.sum_h1 > ell - opts.eps);
  CHECK(dec.sum_discrepancy < opts.eps);
  CHECK_FALSE(dec.budget_exhausted);
}

TEST_CASE("decompose the hawaiian wedge (recursion through the basepoint)") {
  auto seq = spaces::hawaiian(spaces::LengthSequence::geometric(0.5, 0.5));
  double ell = seq.level_length(6);
  DecomposeOptions opts;
  opts.eps = 0.05 * ell;
  auto dec = decompose(seq, 6, opts);
  verify_decomposition(dec);
  CHECK(dec.sum_h1 > ell - opts.eps);
  CHECK(dec.sum_discrepancy < opts.eps);
}

TEST_CASE("decompose the gasket at level 2") {
  auto seq = spaces::gasket_edges(1.0, 0.25);
  double ell = seq.level_length(2);
  DecomposeOptions opts;
  opts.eps = 0.05 * ell;
  auto dec = decompose(seq, 2, opts);
  verify_decomposition(dec);
  CHECK(dec.sum_h1 > ell - opts.eps);
  CHECK(dec.sum_discrepancy < opts.eps);
}

TEST_CASE("required edges always come out as cut pseudo-edges") {
  DecomposeOptions opts;
  opts.eps = 0.5;
  opts.required_edges = {3};
  auto dec = decompose(dumbbell_graph(), opts);
  verify_decomposition(dec);
  bool found = false;
  for (const auto& pe : dec.pseudo_edges)
    if (pe.is_cut_edge && pe.edges == std::vector<EdgeId>{3}) found = true;
  CHECK(found);
}

TEST_CASE("exclude_points moves a forbidden vertex into a leftover") {
  DecomposeOptions opts;
  opts.eps = 0.1;
  auto dec = exclude_points(dumbbell_graph(), opts, {vertex_ref(1)});
  verify_decomposition(dec);
  for (const auto& pe : dec.pseudo_edges) {
    CHECK(pe.f0 != 1);
    CHECK(pe.f1 != 1);
    CHECK(std::find(pe.interior.begin(), pe.interior.end(), VertexId{1}) ==
          pe.interior.end());
  }
  bool in_leftover = false;
  for (const auto& lc : dec.leftovers)
    if (std::find(lc.vertices.begin(), lc.vertices.end(), VertexId{1}) != lc.vertices.end())
      in_leftover = true;
  CHECK(in_leftover);
  CHECK(dec.leftover_h1 > 0.0);
  CHECK(dec.leftover_h1 <= 0.1 * 4.0 / 8.0 + 1e-12);
}

TEST_CASE("empty forbidden set behaves like plain decompose") {
  auto a = decompose(dumbbell_graph(), with_eps(0.1));
  auto b = exclude_points(dumbbell_graph(), with_eps(0.1), {});
  REQUIRE(a.pseudo_edges.size() == b.pseudo_edges.size());
  for (std::size_t i = 0; i < a.pseudo_edges.size(); ++i)
    CHECK(a.pseudo_edges[i].edges == b.pseudo_edges[i].edges);
}

TEST_CASE("forbidding everything still reports honestly") {
  DecomposeOptions opts;
  opts.eps = 0.01;
  MetricGraph db = dumbbell_graph();
  std::vector<PointRef> all;
  for (VertexId v : db.vertex_ids()) all.push_back(vertex_ref(v));
  auto dec = exclude_points(db, opts, all);
  verify_decomposition(dec);
  // every closure avoids the forbidden set, whatever the budget verdict
  for (const auto& pe : dec.pseudo_edges) {
    CHECK(pe.f0 > 3);
    CHECK(pe.f1 > 3);
  }
}

TEST_SUITE_END();
