#pragma once

#include <iosfwd>
#include <string>

#include "graphlike/decomp.hpp"
#include "graphlike/spaces.hpp"

namespace graphlike::io {

/// Interchange document: {"vertices": [id...], "edges": [{id,u,v,len}...]}.
std::string graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(const std::string& text);
MetricGraph load_graph(const std::string& path);
void save_graph(const MetricGraph& g, const std::string& path);

std::string decomposition_to_json(const decomp::Decomposition& dec);

std::string space_spec_to_json(const spaces::SpaceSpec& spec);
spaces::SpaceSpec space_spec_from_json(const std::string& text);

/// "v<id>" or "e<id>@<fraction>".
PointRef parse_point(const std::string& text);
std::string point_to_string(const PointRef& p);

}  // namespace graphlike::io
