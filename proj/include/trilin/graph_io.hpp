#pragma once

#include <trilin/graph.hpp>

#include <json.hpp>

#include <string>
#include <string_view>

namespace trilin {

/// Edge-list text: one "u v" pair per line, '#' starts a comment. A
/// "# n=N" comment fixes the vertex count so isolated vertices survive a
/// round trip; otherwise the count is one past the largest id.
Graph parse_edge_list(std::string_view text);
std::string to_edge_list(const Graph& g);

/// {"n": N, "edges": [[u,v],...], "labels": {"id": "seg/seg"}}
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);
Graph parse_graph_json(std::string_view text);

/// Export only; there is no DOT reader.
std::string to_dot(const Graph& g, std::string_view name = "G");

/// Dispatches on content: a leading '{' means JSON, anything else is an
/// edge list.
Graph parse_graph(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace trilin
