#include <doctest.h>

#include <cmath>

#include "graphlike/converge.hpp"
#include "graphlike/electrical.hpp"
#include "graphlike/spaces.hpp"
#include "helpers.hpp"

using namespace graphlike;
using namespace graphlike::converge;
using namespace graphlike::spaces;

TEST_SUITE_BEGIN("converge");

TEST_CASE("resistance sequences on the fixtures") {
  auto fc = fat_cantor();
  auto rs = resistance_sequence(fc, vertex_ref(0), vertex_ref(1), 0, 0, 10);
  for (auto& [n, r] : rs)
    CHECK(r == doctest::Approx(0.75 + std::pow(2.0, -n) / 4.0).epsilon(1e-9));

  auto hw = hawaiian(LengthSequence::geometric(1.0, 0.5));
  auto hs = resistance_sequence(hw, vertex_ref(0), vertex_ref(1), 1, 1, 8);
  for (auto& [n, r] : hs) CHECK(r == doctest::Approx(0.25).epsilon(1e-12));

  auto db = dumbbell();
  auto ds = resistance_sequence(db, vertex_ref(0), vertex_ref(3), 0, 0, 5);
  for (auto& [n, r] : ds) CHECK(r == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("certified resistance on the dumbbell is immediate") {
  auto db = dumbbell();
  for (double eps : {0.1, 0.01}) {
    CertifiedValue v = certified_resistance(db, vertex_ref(0), vertex_ref(3), eps);
    CHECK(v.certified);
    CHECK(v.n_certified == 0);
    CHECK(v.halfwidth == doctest::Approx(eps / 2.0));
    CHECK(std::abs(v.estimate - 2.5) <= 0.01);  // stub trims move R a whisker
  }
}

TEST_CASE("certified resistance on fat cantor") {
  auto fc = fat_cantor();
  CertifiedValue v = certified_resistance(fc, vertex_ref(0), vertex_ref(1), 0.1, 16);
  REQUIRE(v.certified);
  CHECK(std::abs(v.estimate - 0.75) <= 0.05);
  // every later observed value stays within the certified halfwidth
  auto rs = resistance_sequence(fc, vertex_ref(0), vertex_ref(1), 0, v.n_certified,
                                v.n_certified + 6);
  for (auto& [n, r] : rs) CHECK(std::abs(r - v.estimate) <= v.halfwidth + 1e-12);
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i; j < rs.size(); ++j)
      CHECK(std::abs(rs[i].second - rs[j].second) < 0.1);
}

TEST_CASE("certified resistance on the hawaiian second loop") {
  auto hw = hawaiian(LengthSequence::geometric(1.0, 0.5));  // l_2 = 1/2
  CertifiedValue v =
      certified_resistance(hw, vertex_ref(0), vertex_ref(2), 0.05, 24, /*base_level=*/2);
  REQUIRE(v.certified);
  CHECK(std::abs(v.estimate - 0.125) <= 0.05);  // loop-2 halves 1/4 || 1/4
}

TEST_CASE("certification declines honestly without tail bounds") {
  RefinementSequence::Config cfg;
  cfg.initial = MetricGraph({0, 1}, {Edge{0, 0, 1, 1.0}});
  cfg.step = [](int, const MetricGraph&) { return RefinementStep{}; };
  cfg.name = "no-tail";
  RefinementSequence seq(std::move(cfg));
  CertifiedValue v = certified_resistance(seq, vertex_ref(0), vertex_ref(1), 0.1);
  CHECK_FALSE(v.certified);
  CHECK(!v.note.empty());
}

TEST_CASE("invariance suite") {
  auto db = testutil::dumbbell_graph();
  InvarianceReport r = invariance_suite(db, vertex_ref(0), vertex_ref(3), 50);
  CHECK(r.pass);
  CHECK(r.max_relative_deviation < 1e-9);

  // identity relabeling changes nothing at all
  std::vector<Edge> same(db.edges().begin(), db.edges().end());
  MetricGraph copy(db.vertex_ids(), std::move(same));
  CHECK(electrical::effective_resistance(copy, vertex_ref(0), vertex_ref(3)) ==
        electrical::effective_resistance(db, vertex_ref(0), vertex_ref(3)));

  // subdividing every edge at t = 0.5 is an exact series split
  MetricGraph half = db;
  std::vector<EdgeId> ids;
  for (const Edge& e : half.edges()) ids.push_back(e.id);
  for (EdgeId e : ids) half = subdivide(half, e, 0.5).graph;
  double before = electrical::effective_resistance(db, vertex_ref(0), vertex_ref(3));
  double after = electrical::effective_resistance(half, vertex_ref(0), vertex_ref(3));
  CHECK(after == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("alternating point trackings share the certified interval") {
  auto fc = fat_cantor();
  CertifiedValue v = certified_resistance(fc, vertex_ref(0), vertex_ref(1), 0.1, 16);
  REQUIRE(v.certified);
  // p_n alternates between the vertex 0 and an edge point sliding toward it;
  // all observed values live inside the certified interval.
  for (int n = v.n_certified; n <= v.n_certified + 6; ++n) {
    PointRef p = vertex_ref(0);
    if (n % 2 == 1) {
      const MetricGraph& g = fc.level(n);
      // leftmost base segment edge is the lowest-id edge at vertex 0
      const Edge& e = g.edges()[g.incident(0).front()];
      p = edge_point(e.id, 0.5);
    }
    double r = electrical::effective_resistance(fc.level(n), p, vertex_ref(1));
    CHECK(std::abs(r - v.estimate) <= v.halfwidth + 1e-9);
  }
  // re-running certification with the alternate base point gives the same level
  CertifiedValue w = certified_resistance(fc, vertex_ref(0), vertex_ref(1), 0.1, 16);
  CHECK(w.n_certified == v.n_certified);
  CHECK(w.estimate == doctest::Approx(v.estimate));
  CHECK(w.halfwidth == doctest::Approx(v.halfwidth));
}

TEST_SUITE_END();
