#include "graphlike/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace graphlike::io {

using nlohmann::json;

std::string graph_to_json(const MetricGraph& g) {
  json doc;
  doc["vertices"] = g.vertex_ids();
  json edges = json::array();
  for (const Edge& e : g.edges())
    edges.push_back(json{{"id", e.id}, {"u", e.u}, {"v", e.v}, {"len", e.length}});
  doc["edges"] = std::move(edges);
  return doc.dump(2);
}

MetricGraph graph_from_json(const std::string& text) {
  json doc = json::parse(text);
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
    throw Error(ErrorCode::invalid_argument, "graph document needs vertices and edges");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "vertices" && key != "edges")
      throw Error(ErrorCode::invalid_argument, "unknown field " + key);
  }
  std::vector<VertexId> vertices;
  for (const auto& v : doc["vertices"]) vertices.push_back(v.get<VertexId>());
  std::vector<Edge> edges;
  for (const auto& e : doc["edges"]) {
    for (const auto& [key, value] : e.items()) {
      (void)value;
      if (key != "id" && key != "u" && key != "v" && key != "len")
        throw Error(ErrorCode::invalid_argument, "unknown edge field " + key);
    }
    edges.push_back(Edge{e.at("id").get<EdgeId>(), e.at("u").get<VertexId>(),
                         e.at("v").get<VertexId>(), e.at("len").get<double>()});
  }
  return MetricGraph(std::move(vertices), std::move(edges));
}

MetricGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return graph_from_json(buf.str());
}

void save_graph(const MetricGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot open " + path);
  out << graph_to_json(g) << "\n";
}

std::string decomposition_to_json(const decomp::Decomposition& dec) {
  json doc;
  doc["level"] = dec.level;
  doc["eps"] = dec.eps;
  doc["m"] = dec.m_param;
  doc["budget_exhausted"] = dec.budget_exhausted;
  json pes = json::array();
  for (const auto& pe : dec.pseudo_edges)
    pes.push_back(json{{"edges", pe.edges},
                       {"f0", pe.f0},
                       {"f1", pe.f1},
                       {"h1", pe.h1},
                       {"d", pe.d_endpoints},
                       {"delta", pe.discrepancy},
                       {"cut_edge", pe.is_cut_edge}});
  doc["pseudo_edges"] = std::move(pes);
  json lcs = json::array();
  for (const auto& lc : dec.leftovers)
    lcs.push_back(json{{"vertices", lc.vertices}, {"edges", lc.edges}, {"h1", lc.h1}});
  doc["leftovers"] = std::move(lcs);
  doc["totals"] = json{{"sum_h1", dec.sum_h1},
                       {"sum_delta", dec.sum_discrepancy},
                       {"leftover_h1", dec.leftover_h1}};
  doc["host"] = json::parse(graph_to_json(dec.host));
  return doc.dump(2);
}

std::string space_spec_to_json(const spaces::SpaceSpec& spec) {
  json doc;
  doc["family"] = spec.family;
  doc["params"] = spec.params;
  if (!spec.graph_file.empty()) doc["graph_file"] = spec.graph_file;
  return doc.dump(2);
}

spaces::SpaceSpec space_spec_from_json(const std::string& text) {
  json doc = json::parse(text);
  spaces::SpaceSpec spec;
  spec.family = doc.at("family").get<std::string>();
  if (doc.contains("params"))
    spec.params = doc["params"].get<std::map<std::string, double>>();
  if (doc.contains("graph_file")) spec.graph_file = doc["graph_file"].get<std::string>();
  return spaces::SpaceSpec::parse(spec.family, spec.params);
}

PointRef parse_point(const std::string& text) {
  if (text.size() < 2) throw Error(ErrorCode::invalid_argument, "point: " + text);
  try {
    if (text[0] == 'v') return vertex_ref(std::stoll(text.substr(1)));
    if (text[0] == 'e') {
      auto at = text.find('@');
      if (at == std::string::npos)
        throw Error(ErrorCode::invalid_argument, "edge point needs e<id>@<fraction>");
      EdgeId e = std::stoll(text.substr(1, at - 1));
      double f = std::stod(text.substr(at + 1));
      return edge_point(e, f);
    }
    return vertex_ref(std::stoll(text));  // bare vertex id
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::invalid_argument, "cannot parse point " + text);
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::invalid_argument, "cannot parse point " + text);
  }
}

std::string point_to_string(const PointRef& p) {
  if (is_vertex(p)) return "v" + std::to_string(std::get<VertexId>(p));
  const EdgePoint& ep = std::get<EdgePoint>(p);
  std::ostringstream out;
  out << "e" << ep.edge << "@" << ep.fraction;
  return out.str();
}

}  // namespace graphlike::io
