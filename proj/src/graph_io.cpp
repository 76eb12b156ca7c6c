#include "facetlab/graph_io.hpp"

#include <charconv>
#include <deque>
#include <fstream>

namespace facetlab {

using nlohmann::json;

json graph_to_json(const Digraph& g, const Policy* initial, const json& metadata) {
  json doc = metadata.is_object() ? metadata : json::object();
  doc["scale"] = g.scale();
  doc["target"] = g.target();
  json vertices = json::array();
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    vertices.push_back({{"id", v}, {"name", g.vertex_name(static_cast<VertexId>(v))}});
  }
  json edges = json::array();
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edge(static_cast<EdgeId>(i));
    edges.push_back({{"id", i},
                     {"name", e.name},
                     {"tail", e.tail},
                     {"head", e.head},
                     {"scaled_cost", std::to_string(e.cost)}});
  }
  doc["vertices"] = std::move(vertices);
  doc["edges"] = std::move(edges);
  if (initial != nullptr) doc["initial_policy"] = initial->edges();
  return doc;
}

namespace {

Cost parse_cost(const json& value) {
  if (value.is_number_integer()) return value.get<Cost>();
  if (!value.is_string()) throw IOFailure("scaled_cost must be a decimal string");
  const auto& s = value.get_ref<const std::string&>();
  Cost out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec == std::errc::result_out_of_range)
    throw ParameterOverflow("scaled_cost " + s + " exceeds 64-bit range");
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw IOFailure("scaled_cost is not a decimal integer: " + s);
  return out;
}

}  // namespace

GraphFile graph_from_json(const json& doc) {
  try {
    const auto& vertices = doc.at("vertices");
    std::vector<std::string> names(vertices.size());
    for (const auto& v : vertices) {
      auto id = v.at("id").get<std::size_t>();
      if (id >= names.size()) throw IOFailure("vertex ids must be dense");
      names[id] = v.at("name").get<std::string>();
    }
    const auto& edge_docs = doc.at("edges");
    std::vector<Edge> edges(edge_docs.size());
    for (const auto& e : edge_docs) {
      auto id = e.at("id").get<std::size_t>();
      if (id >= edges.size()) throw IOFailure("edge ids must be dense");
      edges[id] = Edge{e.at("tail").get<VertexId>(), e.at("head").get<VertexId>(),
                       parse_cost(e.at("scaled_cost")), e.value("name", std::string{})};
    }
    Cost scale = doc.value("scale", Cost{1});
    Digraph g(std::move(names), doc.at("target").get<VertexId>(), std::move(edges), scale);
    std::optional<Policy> initial;
    if (doc.contains("initial_policy")) {
      initial = Policy::from_edges(g, doc.at("initial_policy").get<std::vector<EdgeId>>());
    }
    json metadata = json::object();
    for (const auto& [key, value] : doc.items()) {
      if (key != "scale" && key != "target" && key != "vertices" && key != "edges" &&
          key != "initial_policy")
        metadata[key] = value;
    }
    return GraphFile{std::move(g), std::move(initial), std::move(metadata)};
  } catch (const json::exception& ex) {
    throw IOFailure(std::string("malformed graph document: ") + ex.what());
  }
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw IOFailure("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IOFailure("write failed for " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw IOFailure(path + ": " + ex.what());
  }
}

GraphFile read_graph_file(const std::string& path) { return graph_from_json(read_json_file(path)); }

Policy default_start_policy(const Digraph& g) {
  std::vector<EdgeId> chosen(g.num_vertices(), kNoEdge);
  if (g.is_acyclic()) {
    std::vector<Cost> longest(g.num_vertices(), 0);
    for (VertexId v : g.reverse_topological_order()) {
      if (v == g.target()) continue;
      for (EdgeId e : g.out_edges(v)) {
        const Edge& edge = g.edge(e);
        Cost len = edge.cost + longest[static_cast<std::size_t>(edge.head)];
        if (chosen[static_cast<std::size_t>(v)] == kNoEdge ||
            len > longest[static_cast<std::size_t>(v)]) {
          chosen[static_cast<std::size_t>(v)] = e;
          longest[static_cast<std::size_t>(v)] = len;
        }
      }
    }
    return Policy(g, std::move(chosen));
  }
  std::vector<std::vector<EdgeId>> in(g.num_vertices());
  for (std::size_t i = 0; i < g.num_edges(); ++i)
    in[static_cast<std::size_t>(g.edge(static_cast<EdgeId>(i)).head)].push_back(static_cast<EdgeId>(i));
  std::vector<bool> seen(g.num_vertices(), false);
  std::deque<VertexId> queue{g.target()};
  seen[static_cast<std::size_t>(g.target())] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : in[static_cast<std::size_t>(v)]) {
      VertexId u = g.edge(e).tail;
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = true;
        chosen[static_cast<std::size_t>(u)] = e;
        queue.push_back(u);
      }
    }
  }
  return Policy(g, std::move(chosen));
}

}  // namespace facetlab
