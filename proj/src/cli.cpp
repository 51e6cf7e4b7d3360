#include "graphlike/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "graphlike/converge.hpp"
#include "graphlike/electrical.hpp"
#include "graphlike/io.hpp"
#include "graphlike/measure.hpp"

namespace graphlike::cli {

namespace {

using nlohmann::json;

struct SpaceArgs {
  std::string family;
  double first = 0.5, ratio = -1.0, side = 1.0;
  std::string graph_file;

  RefinementSequence build() const {
    if (!graph_file.empty()) return spaces::constant_sequence(io::load_graph(graph_file));
    std::map<std::string, double> params;
    if (family == "hawaiian") {
      params["first"] = first;
      params["ratio"] = ratio > 0 ? ratio : 0.5;
    } else if (family == "gasket_edges") {
      params["side"] = side;
      params["ratio"] = ratio > 0 ? ratio : 0.25;
    }
    return spaces::from_spec(spaces::SpaceSpec::parse(family, params));
  }
};

void add_space_options(CLI::App* cmd, SpaceArgs& args, bool allow_file) {
  auto* fam = cmd->add_option("--space", args.family,
                              "family: hawaiian|fat_cantor|gasket_edges|dumbbell");
  cmd->add_option("--first", args.first, "hawaiian: length of the first loop");
  cmd->add_option("--ratio", args.ratio, "hawaiian/gasket decay ratio");
  cmd->add_option("--side", args.side, "gasket: initial triangle side");
  if (allow_file) {
    auto* file = cmd->add_option("--graph", args.graph_file, "graph document to load");
    fam->excludes(file);
  } else {
    fam->required();
  }
}

void emit(std::ostream& out, const std::string& text, const std::string& path) {
  if (path.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::invalid_argument, "cannot open " + path);
  f << text << "\n";
}

json certified_to_json(const CertifiedValue& value) {
  return json{{"estimate", value.estimate},
              {"halfwidth", value.halfwidth},
              {"n_certified", value.n_certified},
              {"certified", value.certified},
              {"sum_delta", value.summary.sum_discrepancy},
              {"leftover_h1", value.summary.leftover_h1},
              {"note", value.note}};
}

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"metric-graph realizations of graph-like continua"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "write G_n of a space in the interchange format");
  SpaceArgs gen_space;
  int gen_n = 0;
  std::string gen_out;
  add_space_options(gen, gen_space, false);
  gen->add_option("--n", gen_n, "level");
  gen->add_option("-o,--output", gen_out, "output path (stdout default)");

  // resist
  auto* resist = app.add_subcommand("resist", "effective resistance between two points");
  SpaceArgs resist_space;
  int resist_n = 0;
  std::string resist_p, resist_q;
  double certify_eps = 0.0;
  resist->add_option("p", resist_p, "point (v<id> or e<id>@<t>)")->required();
  resist->add_option("q", resist_q, "point")->required();
  add_space_options(resist, resist_space, true);
  resist->add_option("--n", resist_n, "level (space input)");
  resist->add_option("--certify", certify_eps, "certify |R_n - R_m| < eps");

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "Hausdorff-measure sandwich rows");
  SpaceArgs measure_space;
  double gap = 1e-3;
  int measure_nmax = 22;
  std::string measure_p, measure_q, measure_out;
  add_space_options(measure_cmd, measure_space, false);
  measure_cmd->add_option("--gap", gap, "target upper-lower gap");
  measure_cmd->add_option("--n-max", measure_nmax, "level budget");
  measure_cmd->add_option("--p", measure_p, "optional point for d^ell column");
  measure_cmd->add_option("--q", measure_q, "optional point for d^ell column");
  measure_cmd->add_option("-o,--output", measure_out, "output path");

  // decomp
  auto* decomp_cmd = app.add_subcommand("decomp", "pseudo-edge decomposition document");
  SpaceArgs decomp_space;
  int decomp_n = 0;
  double eps = 0.1, m_param = 8.0;
  std::vector<std::string> forbid;
  std::vector<EdgeId> require_edges;
  std::string decomp_out;
  add_space_options(decomp_cmd, decomp_space, true);
  decomp_cmd->add_option("--n", decomp_n, "level (space input)");
  decomp_cmd->add_option("--eps", eps, "total discrepancy budget");
  decomp_cmd->add_option("--M", m_param, "leftover budget divisor (> 2)");
  decomp_cmd->add_option("--forbid", forbid, "points the closures must avoid");
  decomp_cmd->add_option("--require", require_edges, "edge ids forced into the cut");
  decomp_cmd->add_option("-o,--output", decomp_out, "output path");

  // converge
  auto* converge_cmd = app.add_subcommand("converge", "resistance sequence and certificate");
  SpaceArgs converge_space;
  std::string converge_p, converge_q, converge_out;
  double converge_eps = 0.01;
  int n_from = 0, n_to = 12;
  converge_cmd->add_option("p", converge_p, "point")->required();
  converge_cmd->add_option("q", converge_q, "point")->required();
  add_space_options(converge_cmd, converge_space, false);
  converge_cmd->add_option("--eps", converge_eps, "certification tolerance");
  converge_cmd->add_option("--n-from", n_from, "first level");
  converge_cmd->add_option("--n-to", n_to, "last level");
  converge_cmd->add_option("-o,--output", converge_out, "output path");

  // invariance
  auto* inv = app.add_subcommand("invariance", "subdivision/relabel invariance report");
  SpaceArgs inv_space;
  int inv_n = 0, trials = 50;
  std::string inv_p, inv_q;
  inv->add_option("p", inv_p, "point")->required();
  inv->add_option("q", inv_q, "point")->required();
  add_space_options(inv, inv_space, true);
  inv->add_option("--n", inv_n, "level (space input)");
  inv->add_option("--trials", trials, "number of random transformations");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 1;
  }

  if (gen->parsed()) {
    auto seq = gen_space.build();
    emit(out, io::graph_to_json(seq.level(gen_n)), gen_out);
    return 0;
  }

  if (resist->parsed()) {
    auto seq = resist_space.build();
    PointRef p = io::parse_point(resist_p);
    PointRef q = io::parse_point(resist_q);
    if (certify_eps > 0.0) {
      CertifiedValue value =
          converge::certified_resistance(seq, p, q, certify_eps, 24, resist_n);
      out << certified_to_json(value).dump(2) << "\n";
      if (!value.certified) {
        err << json{{"error", "BudgetExhausted"}, {"message", value.note}}.dump() << "\n";
        return 2;
      }
      return 0;
    }
    out << electrical::effective_resistance(seq.level(resist_n), p, q) << "\n";
    return 0;
  }

  if (measure_cmd->parsed()) {
    auto seq = measure_space.build();
    measure::HausdorffOptions options;
    options.n_max = measure_nmax;
    measure::MeasureEstimate est = measure::hausdorff_estimate(seq, gap, options);
    std::ostringstream csv;
    bool with_points = !measure_p.empty() && !measure_q.empty();
    csv << "n,delta,ell,h_g_delta" << (with_points ? ",d_ell\n" : "\n");
    for (int n = 0; n <= est.n; ++n) {
      measure::EdgeCut cut = measure::finest_edge_cut(seq, n);
      csv << n << "," << cut.delta << "," << seq.level_length(n) << ","
          << measure::h_g_delta(seq, n, cut);
      if (with_points) {
        auto d = measure::d_ell(seq, io::parse_point(measure_p), io::parse_point(measure_q),
                                0, n);
        csv << "," << d.values.back().second;
      }
      csv << "\n";
    }
    csv << "# lower=" << est.lower << " upper=" << est.upper << " h=" << est.h_value
        << " n=" << est.n << " delta=" << est.delta << " converged=" << est.converged;
    emit(out, csv.str(), measure_out);
    if (!est.converged) {
      err << json{{"error", "BudgetExhausted"},
                  {"message", "gap " + std::to_string(est.gap()) + " > target"}}
                 .dump()
          << "\n";
      return 2;
    }
    return 0;
  }

  if (decomp_cmd->parsed()) {
    auto seq = decomp_space.build();
    decomp::DecomposeOptions options;
    options.eps = eps;
    options.m = m_param;
    options.required_edges = require_edges;
    for (const std::string& f : forbid) options.forbidden.push_back(io::parse_point(f));
    decomp::Decomposition dec = decomp::decompose(seq, decomp_n, options);
    emit(out, io::decomposition_to_json(dec), decomp_out);
    if (dec.budget_exhausted) {
      err << json{{"error", "BudgetExhausted"},
                  {"message", "achieved sum_delta " + std::to_string(dec.sum_discrepancy)}}
                 .dump()
          << "\n";
      return 2;
    }
    return 0;
  }

  if (converge_cmd->parsed()) {
    auto seq = converge_space.build();
    PointRef p = io::parse_point(converge_p);
    PointRef q = io::parse_point(converge_q);
    // points are taken at the first level of the range
    auto rs = converge::resistance_sequence(seq, p, q, n_from, n_from, n_to);
    std::ostringstream csv;
    csv << "n,R\n";
    for (auto& [n, r] : rs) csv << n << "," << r << "\n";
    CertifiedValue value =
        converge::certified_resistance(seq, p, q, converge_eps, 24, n_from);
    csv << "# " << certified_to_json(value).dump();
    emit(out, csv.str(), converge_out);
    if (!value.certified) {
      err << json{{"error", "BudgetExhausted"}, {"message", value.note}}.dump() << "\n";
      return 2;
    }
    return 0;
  }

  if (inv->parsed()) {
    auto seq = inv_space.build();
    converge::InvarianceReport report = converge::invariance_suite(
        seq.level(inv_n), io::parse_point(inv_p), io::parse_point(inv_q), trials);
    out << json{{"trials", report.trials},
                {"max_relative_deviation", report.max_relative_deviation},
                {"pass", report.pass}}
               .dump(2)
        << "\n";
    if (!report.pass) {
      err << json{{"error", "InvarianceViolated"},
                  {"message", "max relative deviation " +
                                  std::to_string(report.max_relative_deviation)}}
                 .dump()
          << "\n";
      return 2;
    }
    return 0;
  }

  err << "no subcommand\n";
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const Error& e) {
    err << nlohmann::json{{"error", to_string(e.code)}, {"message", e.what()}}.dump()
        << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", "Unexpected"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
}

}  // namespace graphlike::cli
