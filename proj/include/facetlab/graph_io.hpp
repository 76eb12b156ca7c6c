#ifndef FACETLAB_GRAPH_IO_HPP
#define FACETLAB_GRAPH_IO_HPP

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "facetlab/digraph.hpp"

namespace facetlab {

struct GraphFile {
  Digraph graph;
  std::optional<Policy> initial_policy;
  // Extra top-level fields carried through unchanged (e.g. "construction").
  nlohmann::json metadata = nlohmann::json::object();
};

// Schema: {scale, target, vertices: [{id, name}], edges: [{id, name, tail,
// head, scaled_cost}]} with costs as decimal strings. Optional fields:
// "initial_policy" (edge ids) and any metadata keys.
nlohmann::json graph_to_json(const Digraph& g, const Policy* initial = nullptr,
                             const nlohmann::json& metadata = nlohmann::json::object());
GraphFile graph_from_json(const nlohmann::json& doc);

void write_json_file(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);
GraphFile read_graph_file(const std::string& path);

// Start tree used when a graph file carries no initial policy: on acyclic
// graphs the longest-path tree, otherwise a breadth-first tree to the target.
Policy default_start_policy(const Digraph& g);

}  // namespace facetlab

#endif
