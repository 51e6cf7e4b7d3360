#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "graphlike/converge.hpp"
#include "graphlike/decomp.hpp"
#include "graphlike/electrical.hpp"
#include "graphlike/io.hpp"
#include "graphlike/measure.hpp"
#include "graphlike/spaces.hpp"

namespace py = pybind11;
using namespace graphlike;

namespace {

PointRef to_point(const py::object& obj) {
  if (py::isinstance<py::int_>(obj)) return vertex_ref(obj.cast<VertexId>());
  auto pair = obj.cast<std::pair<EdgeId, double>>();
  return edge_point(pair.first, pair.second);
}

MetricGraph make_graph(
    const std::vector<VertexId>& vertices,
    const std::vector<std::tuple<EdgeId, VertexId, VertexId, double>>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [id, u, v, len] : edges) es.push_back(Edge{id, u, v, len});
  return MetricGraph(vertices, std::move(es));
}

std::unique_ptr<RefinementSequence> make_space(const std::string& family,
                                               const std::map<std::string, double>& params) {
  return std::unique_ptr<RefinementSequence>(
      new RefinementSequence(spaces::from_spec(spaces::SpaceSpec::parse(family, params))));
}

py::dict certified_to_dict(const CertifiedValue& v) {
  py::dict d;
  d["estimate"] = v.estimate;
  d["halfwidth"] = v.halfwidth;
  d["n_certified"] = v.n_certified;
  d["certified"] = v.certified;
  d["sum_delta"] = v.summary.sum_discrepancy;
  d["leftover_h1"] = v.summary.leftover_h1;
  d["note"] = v.note;
  return d;
}

py::dict decomposition_to_dict(const decomp::Decomposition& dec) {
  py::dict d;
  d["level"] = dec.level;
  d["eps"] = dec.eps;
  d["sum_h1"] = dec.sum_h1;
  d["sum_delta"] = dec.sum_discrepancy;
  d["leftover_h1"] = dec.leftover_h1;
  d["budget_exhausted"] = dec.budget_exhausted;
  py::list pes;
  for (const auto& pe : dec.pseudo_edges) {
    py::dict e;
    e["edges"] = pe.edges;
    e["f0"] = pe.f0;
    e["f1"] = pe.f1;
    e["h1"] = pe.h1;
    e["d"] = pe.d_endpoints;
    e["delta"] = pe.discrepancy;
    e["cut_edge"] = pe.is_cut_edge;
    pes.append(e);
  }
  d["pseudo_edges"] = pes;
  py::list lcs;
  for (const auto& lc : dec.leftovers) {
    py::dict e;
    e["vertices"] = lc.vertices;
    e["h1"] = lc.h1;
    lcs.append(e);
  }
  d["leftovers"] = lcs;
  return d;
}

}  // namespace

PYBIND11_MODULE(_graphlike, m) {
  m.doc() = "metric-graph realizations of graph-like continua";

  py::register_exception<Error>(m, "GraphError");

  py::class_<MetricGraph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("vertices"), py::arg("edges"),
           "edges: list of (id, u, v, length)")
      .def_property_readonly("total_length", &MetricGraph::total_length)
      .def_property_readonly("vertices", &MetricGraph::vertex_ids)
      .def_property_readonly(
          "edges",
          [](const MetricGraph& g) {
            std::vector<std::tuple<EdgeId, VertexId, VertexId, double>> out;
            for (const Edge& e : g.edges()) out.emplace_back(e.id, e.u, e.v, e.length);
            return out;
          })
      .def("is_connected", &MetricGraph::is_connected)
      .def(
          "distance",
          [](const MetricGraph& g, const py::object& p, const py::object& q) {
            return distance(g, to_point(p), to_point(q));
          },
          py::arg("p"), py::arg("q"))
      .def(
          "diameter",
          [](const MetricGraph& g, const std::vector<VertexId>& part) {
            DiameterResult r = diameter(g, part);
            return py::make_tuple(r.value, py::make_tuple(r.x, r.y));
          },
          py::arg("part"))
      .def(
          "components",
          [](const MetricGraph& g, const std::vector<EdgeId>& removed) {
            return components(g, removed);
          },
          py::arg("removed") = std::vector<EdgeId>{})
      .def(
          "subdivide",
          [](const MetricGraph& g, EdgeId e, double t) {
            SubdivideResult r = subdivide(g, e, t);
            return py::make_tuple(r.graph, r.mid_vertex);
          },
          py::arg("edge"), py::arg("t"))
      .def(
          "contract",
          [](const MetricGraph& g, const std::vector<VertexId>& part) {
            Contraction c = contract_vertices(g, part);
            return py::make_tuple(c.graph, c.projection, c.removed_length);
          },
          py::arg("part"))
      .def("__repr__", [](const MetricGraph& g) {
        return "<Graph |V|=" + std::to_string(g.vertex_count()) +
               " |E|=" + std::to_string(g.edge_count()) + ">";
      });

  m.def(
      "effective_resistance",
      [](const MetricGraph& g, const py::object& p, const py::object& q) {
        return electrical::effective_resistance(g, to_point(p), to_point(q));
      },
      py::arg("graph"), py::arg("p"), py::arg("q"));
  m.def("resistance_oracle", &electrical::resistance_oracle, py::arg("graph"), py::arg("p"),
        py::arg("q"));
  m.def(
      "unit_current",
      [](const MetricGraph& g, VertexId p, VertexId q) {
        electrical::Flow f = electrical::unit_current(g, p, q);
        py::dict out;
        for (std::size_t i = 0; i < g.edge_count(); ++i)
          out[py::int_(g.edges()[i].id)] = f.edge_values[i];
        return out;
      },
      py::arg("graph"), py::arg("p"), py::arg("q"));

  py::class_<RefinementSequence>(m, "Space")
      .def(py::init(&make_space), py::arg("family"),
           py::arg("params") = std::map<std::string, double>{})
      .def("level", &RefinementSequence::level, py::arg("n"),
           py::return_value_policy::copy)
      .def("level_length", &RefinementSequence::level_length, py::arg("n"))
      .def(
          "track",
          [](const RefinementSequence& seq, const py::object& p, int from_level,
             int to_level) -> py::object {
            PointRef r = seq.track(to_point(p), from_level, to_level);
            if (is_vertex(r)) return py::int_(std::get<VertexId>(r));
            const EdgePoint& ep = std::get<EdgePoint>(r);
            return py::make_tuple(ep.edge, ep.fraction);
          },
          py::arg("p"), py::arg("from_level"), py::arg("to_level"))
      .def("tail_bound", &RefinementSequence::tail_bound, py::arg("n"))
      .def_property_readonly("h1_limit",
                             [](const RefinementSequence& seq) -> py::object {
                               auto l = seq.total_length_limit();
                               if (!l) return py::none();
                               return py::float_(*l);
                             })
      .def_property_readonly("name", &RefinementSequence::name);

  m.def(
      "hausdorff_estimate",
      [](const RefinementSequence& seq, double gap, int n_max) {
        measure::HausdorffOptions opts;
        opts.n_max = n_max;
        measure::MeasureEstimate est = measure::hausdorff_estimate(seq, gap, opts);
        py::dict d;
        d["lower"] = est.lower;
        d["upper"] = est.upper;
        d["h_value"] = est.h_value;
        d["n"] = est.n;
        d["delta"] = est.delta;
        d["converged"] = est.converged;
        return d;
      },
      py::arg("space"), py::arg("gap"), py::arg("n_max") = 22);
  m.def(
      "d_ell",
      [](const RefinementSequence& seq, const py::object& p, const py::object& q,
         int base_level, int n_max) {
        return measure::d_ell(seq, to_point(p), to_point(q), base_level, n_max).values;
      },
      py::arg("space"), py::arg("p"), py::arg("q"), py::arg("base_level"),
      py::arg("n_max"));
  m.def(
      "intrinsic_distance",
      [](const RefinementSequence& seq, const py::object& p, const py::object& q,
         double tol, int level_budget, int base_level) {
        return certified_to_dict(measure::intrinsic_distance(
            seq, to_point(p), to_point(q), tol, level_budget, base_level));
      },
      py::arg("space"), py::arg("p"), py::arg("q"), py::arg("tol"),
      py::arg("level_budget") = 24, py::arg("base_level") = 0);

  m.def(
      "decompose",
      [](const RefinementSequence& seq, int level, double eps, double m_param,
         const std::vector<py::object>& forbidden) {
        decomp::DecomposeOptions opts;
        opts.eps = eps;
        opts.m = m_param;
        for (const py::object& f : forbidden) opts.forbidden.push_back(to_point(f));
        return decomposition_to_dict(decomp::decompose(seq, level, opts));
      },
      py::arg("space"), py::arg("level"), py::arg("eps"), py::arg("m") = 8.0,
      py::arg("forbidden") = std::vector<py::object>{});

  m.def(
      "resistance_sequence",
      [](const RefinementSequence& seq, const py::object& p, const py::object& q,
         int base_level, int n_from, int n_to) {
        return converge::resistance_sequence(seq, to_point(p), to_point(q), base_level,
                                             n_from, n_to);
      },
      py::arg("space"), py::arg("p"), py::arg("q"), py::arg("base_level"),
      py::arg("n_from"), py::arg("n_to"));
  m.def(
      "certified_resistance",
      [](const RefinementSequence& seq, const py::object& p, const py::object& q,
         double eps, int level_budget, int base_level) {
        return certified_to_dict(converge::certified_resistance(
            seq, to_point(p), to_point(q), eps, level_budget, base_level));
      },
      py::arg("space"), py::arg("p"), py::arg("q"), py::arg("eps"),
      py::arg("level_budget") = 24, py::arg("base_level") = 0);
  m.def(
      "invariance_report",
      [](const MetricGraph& g, const py::object& p, const py::object& q, int trials) {
        auto r = converge::invariance_suite(g, to_point(p), to_point(q), trials);
        py::dict d;
        d["trials"] = r.trials;
        d["max_relative_deviation"] = r.max_relative_deviation;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("graph"), py::arg("p"), py::arg("q"), py::arg("trials") = 50);

  m.def("graph_to_json", &io::graph_to_json, py::arg("graph"));
  m.def("graph_from_json", &io::graph_from_json, py::arg("text"));
}
