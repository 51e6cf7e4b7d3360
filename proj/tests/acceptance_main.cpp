// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "decomp_verify.hpp"
#include "graphlike/converge.hpp"
#include "graphlike/decomp.hpp"
#include "graphlike/electrical.hpp"
#include "graphlike/measure.hpp"
#include "graphlike/spaces.hpp"
#include "helpers.hpp"

using namespace graphlike;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %d. %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// ---------------------------------------------------------------------------
// 1. solver/oracle equivalence on small multigraphs

// Enumerate every connected multigraph on exactly k labeled vertices with at
// most max_edges edges (multisets over the vertex pairs), invoking fn with
// the multiplicity vector.
void enumerate_shapes(int k, int max_edges,
                      const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) pairs.emplace_back(a, b);
  std::vector<int> mult(pairs.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int remaining) {
    if (idx == pairs.size()) {
      std::vector<int> parent(k);
      for (int i = 0; i < k; ++i) parent[i] = i;
      std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
      };
      int comps = k;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (mult[i] == 0) continue;
        int ra = find(pairs[i].first), rb = find(pairs[i].second);
        if (ra != rb) {
          parent[ra] = rb;
          --comps;
        }
      }
      if (comps == 1) fn(mult);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      mult[idx] = c;
      rec(idx + 1, remaining - c);
    }
    mult[idx] = 0;
  };
  rec(0, max_edges);
}

MetricGraph shape_to_graph(int k, const std::vector<int>& mult, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(0.1, 10.0);
  std::vector<VertexId> vs;
  for (int i = 0; i < k; ++i) vs.push_back(i);
  std::vector<Edge> es;
  std::size_t idx = 0;
  EdgeId next = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b, ++idx)
      for (int c = 0; c < mult[idx]; ++c) es.push_back(Edge{next++, a, b, len(rng)});
  return MetricGraph(std::move(vs), std::move(es));
}

void criterion_1() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  long shapes = 0, checks = 0;
  bool pass = true;
  struct ShapeRef {
    int k;
    std::vector<int> mult;
  };
  std::vector<ShapeRef> catalog;
  for (int k = 2; k <= 5; ++k) {
    enumerate_shapes(k, 8, [&](const std::vector<int>& mult) {
      ++shapes;
      catalog.push_back(ShapeRef{k, mult});
      MetricGraph g = shape_to_graph(k, mult, rng);
      std::uniform_int_distribution<int> pick(0, k - 1);
      int a = pick(rng), b = pick(rng);
      while (b == a) b = pick(rng);
      double solver = electrical::effective_resistance(g, vertex_ref(a), vertex_ref(b));
      double oracle = electrical::resistance_oracle(g, a, b);
      worst = std::max(worst, std::abs(solver - oracle));
      ++checks;
      if (std::abs(solver - oracle) > 1e-8) pass = false;
    });
  }
  // 200 random length samples across the family, all vertex pairs each
  std::uniform_int_distribution<std::size_t> pick_shape(0, catalog.size() - 1);
  for (int sample = 0; sample < 200; ++sample) {
    const ShapeRef& ref = catalog[pick_shape(rng)];
    MetricGraph g = shape_to_graph(ref.k, ref.mult, rng);
    for (int a = 0; a < ref.k; ++a)
      for (int b = a + 1; b < ref.k; ++b) {
        double solver = electrical::effective_resistance(g, vertex_ref(a), vertex_ref(b));
        double oracle = electrical::resistance_oracle(g, a, b);
        worst = std::max(worst, std::abs(solver - oracle));
        ++checks;
        if (std::abs(solver - oracle) > 1e-8) pass = false;
      }
  }
  std::ostringstream os;
  os << shapes << " connected shapes, " << checks
     << " checks, max |solver-oracle| = " << worst << " (tol 1e-8)";
  report(1, "solver/oracle equivalence", pass, os.str());
}

// ---------------------------------------------------------------------------
// 2. series/parallel exactness

void criterion_2() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> len(0.1, 10.0);
  double worst = 0.0;
  for (int t = 0; t < 25; ++t) {
    double a = len(rng), b = len(rng);
    MetricGraph series({0, 1, 2}, {Edge{0, 0, 1, a}, Edge{1, 1, 2, b}});
    double rs = electrical::effective_resistance(series, vertex_ref(0), vertex_ref(2));
    worst = std::max(worst, std::abs(rs - (a + b)));
    MetricGraph par({0, 1}, {Edge{0, 0, 1, a}, Edge{1, 0, 1, b}});
    double rp = electrical::effective_resistance(par, vertex_ref(0), vertex_ref(1));
    worst = std::max(worst, std::abs(rp - a * b / (a + b)));
  }
  double rt = electrical::effective_resistance(testutil::theta_graph(), vertex_ref(0),
                                               vertex_ref(1));
  worst = std::max(worst, std::abs(rt - 1.0 / 3.0));
  bool pass = worst <= 1e-12;
  std::ostringstream os;
  os << "max deviation " << worst << " (tol 1e-12)";
  report(2, "series/parallel exactness", pass, os.str());
}

// ---------------------------------------------------------------------------
// 3. fat-Cantor fixture numbers

void criterion_3() {
  auto seq = spaces::fat_cantor();
  bool pass = true;
  std::ostringstream os;

  measure::MeasureEstimate est = measure::hausdorff_estimate(seq, 1e-3);
  if (!(est.converged && est.gap() <= 1e-3 && std::abs(est.h_value - 1.5) <= 1e-3 &&
        est.lower <= 1.5 && est.upper >= 1.5 - 1e-12)) {
    pass = false;
    os << "hausdorff sandwich failed; ";
  }

  for (int n = 1; n <= 12; ++n) {
    double sum = 0.0;
    for (int idx : seq.entries_available(n)) sum += seq.entry(idx)->length;
    double expected = 1.0 - std::pow(2.0, -n);
    if (std::abs(sum - expected) > 1e-12 ||
        std::abs(sum - 1.0) > std::pow(2.0, -n) + 1e-12) {
      pass = false;
      os << "edge-length sum off at n=" << n << "; ";
    }
  }

  double worst = 0.0;
  for (int n = 0; n <= 12; ++n) {
    double r = electrical::effective_resistance(seq.level(n), vertex_ref(0), vertex_ref(1));
    worst = std::max(worst, std::abs(r - (0.75 + std::pow(2.0, -n) / 4.0)));
  }
  if (worst > 1e-9) {
    pass = false;
    os << "resistance sequence off; ";
  }
  os << "gap=" << est.gap() << ", max |R_n - closed form| = " << worst
     << " for n<=12 (tol 1e-9)";
  report(3, "fat-Cantor fixture numbers", pass, os.str());
}

// ---------------------------------------------------------------------------
// 4. certified resistance windows

void criterion_4() {
  bool pass = true;
  std::ostringstream os;
  struct Case {
    const char* name;
    std::function<RefinementSequence()> make;
    PointRef p, q;
    int base;
  };
  std::vector<Case> cases{
      {"fat_cantor", [] { return spaces::fat_cantor(); }, vertex_ref(0), vertex_ref(1), 0},
      {"hawaiian",
       [] { return spaces::hawaiian(spaces::LengthSequence::geometric(1.0, 0.5)); },
       vertex_ref(0), vertex_ref(1), 1},
  };
  for (const Case& c : cases) {
    for (double eps : {0.1, 0.01}) {
      auto seq = c.make();
      CertifiedValue v = converge::certified_resistance(seq, c.p, c.q, eps, 24, c.base);
      if (!v.certified) {
        pass = false;
        os << c.name << " eps=" << eps << " not certified; ";
        continue;
      }
      auto rs = converge::resistance_sequence(seq, c.p, c.q, c.base,
                                              std::max(v.n_certified, c.base),
                                              v.n_certified + 10);
      double max_gap = 0.0;
      for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i; j < rs.size(); ++j)
          max_gap = std::max(max_gap, std::abs(rs[i].second - rs[j].second));
      if (!(max_gap < eps)) {
        pass = false;
        os << c.name << " eps=" << eps << " window gap " << max_gap << " >= eps; ";
      } else {
        os << c.name << " eps=" << eps << ": n0=" << v.n_certified << " window gap "
           << max_gap << "; ";
      }
    }
  }

  // alternation independence: the interval certified for the limit pair also
  // covers an alternating observation, and re-certification is identical
  auto seq = spaces::fat_cantor();
  CertifiedValue v1 = converge::certified_resistance(seq, vertex_ref(0), vertex_ref(1), 0.1);
  CertifiedValue v2 = converge::certified_resistance(seq, vertex_ref(0), vertex_ref(1), 0.1);
  bool identical = v1.certified && v2.certified && v1.n_certified == v2.n_certified &&
                   v1.estimate == v2.estimate && v1.halfwidth == v2.halfwidth;
  bool contained = true;
  for (int n = v1.n_certified; n <= v1.n_certified + 6; ++n) {
    PointRef p = vertex_ref(0);
    if (n % 2 == 1) {
      const MetricGraph& g = seq.level(n);
      p = edge_point(g.edges()[g.incident(0).front()].id, 0.5);  // slides toward v0
    }
    double r = electrical::effective_resistance(seq.level(n), p, vertex_ref(1));
    if (std::abs(r - v1.estimate) > v1.halfwidth + 1e-9) contained = false;
  }
  if (!(identical && contained)) {
    pass = false;
    os << "alternation test failed; ";
  } else {
    os << "alternating tracking stays inside the certified interval";
  }
  report(4, "certified resistance windows", pass, os.str());
}

// ---------------------------------------------------------------------------
// 5. contraction interval trials

void criterion_5() {
  std::mt19937_64 rng(505);
  bool pass = true;
  double slack_worst = -1e300;
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<int> nv(3, 8);
    int n = nv(rng);
    std::uniform_int_distribution<int> ne(n - 1, 12);
    MetricGraph g = testutil::random_connected_multigraph(rng, n, ne(rng));
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<VertexId> part{pick(rng)};
    std::uniform_int_distribution<int> grow(0, 4);
    for (int steps = grow(rng); steps > 0; --steps) {
      VertexId v = part[static_cast<std::size_t>(rng() % part.size())];
      const auto& inc = g.incident(v);
      if (inc.empty()) break;
      VertexId w = g.edges()[inc[rng() % inc.size()]].other(v);
      if (std::find(part.begin(), part.end(), w) == part.end()) part.push_back(w);
    }
    auto res = electrical::contraction_bounds(g, part, pick(rng), pick(rng), 1e-9);
    if (!res.within) pass = false;
    slack_worst = std::max(slack_worst,
                           std::max(res.after - res.before,
                                    (res.before - res.removed_length) - res.after));
  }
  std::ostringstream os;
  os << "500 trials, worst interval excess " << slack_worst << " (tol 1e-9)";
  report(5, "contraction resistance interval", pass, os.str());
}

// ---------------------------------------------------------------------------
// 6. pseudo-edge bounds and the path contraction transform

void criterion_6() {
  std::mt19937_64 rng(606);
  bool pass = true;
  std::ostringstream os;

  std::uniform_real_distribution<double> len(0.2, 3.0);
  for (int t = 0; t < 50; ++t) {
    double tip = len(rng), copy = len(rng);
    MetricGraph doubled({0, 1, 2, 3}, {Edge{0, 0, 1, tip}, Edge{1, 1, 2, copy},
                                       Edge{2, 1, 2, copy}, Edge{3, 2, 3, tip}});
    double h1 = 2 * tip + 2 * copy;
    double d = 2 * tip + copy;
    auto r = electrical::pseudo_edge_resistance_bounds(doubled, 0, 3, h1, d, 1e-9);
    if (!r.within) pass = false;
  }

  // fat-Cantor carriers, with the level mass and with the limit mass
  auto seq = spaces::fat_cantor();
  for (int n = 1; n <= 12; ++n) {
    const MetricGraph& g = seq.level(n);
    auto level_mass =
        electrical::pseudo_edge_resistance_bounds(g, 0, 1, g.total_length(), 1.0, 1e-9);
    auto limit_mass = electrical::pseudo_edge_resistance_bounds(g, 0, 1, 1.5, 1.0, 1e-9);
    if (!level_mass.within || !limit_mass.within) {
      pass = false;
      os << "bounds failed at level " << n << "; ";
    }
  }

  int transform_trials = 0;
  auto check_transform = [&](const MetricGraph& g, VertexId a, VertexId b) {
    PathResult sp = shortest_path(g, a, b);
    auto r = electrical::path_contraction_transform(g, sp, 1e-9);
    ++transform_trials;
    if (!r.bound_holds) pass = false;
  };
  check_transform(testutil::dumbbell_graph(), 0, 3);
  check_transform(testutil::theta_graph(), 0, 1);
  for (int n = 1; n <= 10; ++n) check_transform(seq.level(n), 0, 1);
  for (int t = 0; t < 60; ++t) {
    std::uniform_int_distribution<int> nv(3, 8);
    int n = nv(rng);
    std::uniform_int_distribution<int> ne(n - 1, 12);
    MetricGraph g = testutil::random_connected_multigraph(rng, n, ne(rng));
    std::uniform_int_distribution<int> pick(0, n - 1);
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    check_transform(g, a, b);
  }
  os << transform_trials << " transform trials, all bounds hold (tol 1e-9)";
  report(6, "pseudo-edge resistance bounds and transform", pass, os.str());
}

// ---------------------------------------------------------------------------
// 7. decomposition checklist

void criterion_7() {
  bool pass = true;
  std::ostringstream os;

  auto verify = [&](const decomp::Decomposition& dec, const std::string& tag) {
    auto violations = testutil::decomposition_violations(dec);
    if (!violations.empty()) {
      pass = false;
      os << tag << ": " << violations.front() << "; ";
    }
  };

  {
    decomp::DecomposeOptions opts;
    opts.eps = 0.1;
    auto dumbbell_seq = spaces::dumbbell();
    auto dec = decomp::decompose(dumbbell_seq, 0, opts);
    verify(dec, "dumbbell");
    if (dec.sum_discrepancy != 0.0 || dec.pseudo_edges.size() != 4 ||
        std::abs(dec.sum_h1 - 4.0) > 1e-12) {
      pass = false;
      os << "dumbbell decomposition not exact; ";
    }
  }

  struct Case {
    const char* tag;
    std::function<RefinementSequence()> make;
    int level;
  };
  for (const Case& c : std::vector<Case>{
           {"fat_cantor@8", [] { return spaces::fat_cantor(); }, 8},
           {"gasket@4", [] { return spaces::gasket_edges(1.0, 0.25); }, 4}}) {
    auto seq = c.make();
    double ell = seq.level_length(c.level);
    decomp::DecomposeOptions opts;
    opts.eps = 0.05 * ell;
    auto dec = decomp::decompose(seq, c.level, opts);
    verify(dec, c.tag);
    if (!(dec.sum_h1 > ell - opts.eps) || !(dec.sum_discrepancy < opts.eps) ||
        dec.budget_exhausted) {
      pass = false;
      os << c.tag << " budgets missed (sum_h1=" << dec.sum_h1 << "/" << ell
         << ", sum_delta=" << dec.sum_discrepancy << "/" << opts.eps << "); ";
    } else {
      os << c.tag << ": sum_h1 > ell-eps and sum_delta=" << dec.sum_discrepancy << " < "
         << opts.eps << "; ";
    }
  }

  {
    decomp::DecomposeOptions opts;
    opts.eps = 0.1;
    auto dumbbell_seq = spaces::dumbbell();
    auto dec = decomp::exclude_points(dumbbell_seq, 0, opts, {vertex_ref(1)});
    verify(dec, "dumbbell+forbid");
    bool avoided = true;
    for (const auto& pe : dec.pseudo_edges) {
      if (pe.f0 == 1 || pe.f1 == 1) avoided = false;
      if (std::find(pe.interior.begin(), pe.interior.end(), VertexId{1}) !=
          pe.interior.end())
        avoided = false;
    }
    if (!avoided) {
      pass = false;
      os << "forbidden vertex still in a closure; ";
    } else {
      os << "forbidden vertex excluded";
    }
  }
  report(7, "pseudo-edge decomposition checklist", pass, os.str());
}

// ---------------------------------------------------------------------------
// 8. metrization properties

void criterion_8() {
  std::mt19937_64 rng(808);
  bool pass = true;
  std::ostringstream os;

  struct Fixture {
    const char* name;
    std::function<RefinementSequence()> make;
    int base, nmax;
  };
  std::vector<Fixture> fixtures{
      {"fat_cantor", [] { return spaces::fat_cantor(); }, 1, 7},
      {"hawaiian",
       [] { return spaces::hawaiian(spaces::LengthSequence::geometric(0.5, 0.5)); }, 1, 8},
      {"gasket", [] { return spaces::gasket_edges(1.0, 0.25); }, 1, 4},
      {"dumbbell", [] { return spaces::dumbbell(); }, 0, 4},
  };
  for (const Fixture& f : fixtures) {
    auto seq = f.make();
    const MetricGraph& g = seq.level(f.base);
    std::uniform_int_distribution<std::size_t> vpick(0, g.vertex_count() - 1);
    std::uniform_int_distribution<std::size_t> epick(0, g.edge_count() - 1);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
      PointRef p = trial % 2 == 0 ? vertex_ref(g.vertex_ids()[vpick(rng)])
                                  : edge_point(g.edges()[epick(rng)].id, frac(rng));
      PointRef q = trial % 3 == 0 ? edge_point(g.edges()[epick(rng)].id, frac(rng))
                                  : vertex_ref(g.vertex_ids()[vpick(rng)]);
      auto d = measure::d_ell(seq, p, q, f.base, f.nmax);
      for (std::size_t i = 1; i < d.values.size(); ++i)
        if (d.values[i].second > d.values[i - 1].second + 1e-12) ++violations;
    }
    if (violations != 0) {
      pass = false;
      os << f.name << ": " << violations << " monotonicity violations; ";
    }

    VertexId a = g.vertex_ids().front();
    VertexId b = g.vertex_ids().back();
    auto rep = converge::invariance_suite(seq.level(std::min(f.nmax, 3)), vertex_ref(a),
                                          vertex_ref(b), 50);
    if (!rep.pass) {
      pass = false;
      os << f.name << ": invariance deviation " << rep.max_relative_deviation << "; ";
    }
  }
  if (pass) os << "100 tracked pairs and 50 invariance trials per fixture";
  report(8, "metrization properties", pass, os.str());
}

void criterion_9() {
  report(9, "non-reproducible continuum statements acknowledged", true,
         "homeomorphism of completions, geodesic metrics as topology, and Brownian "
         "motion are not desk-verifiable; covered only through the finite-level "
         "property suites above");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
