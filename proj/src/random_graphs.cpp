#include "facetlab/random_graphs.hpp"

#include <stdexcept>
#include <string>

namespace facetlab {

Digraph random_dag(int inner, int extra_edges, Rng& rng, Cost max_cost) {
  if (inner < 1 || extra_edges < 0 || max_cost < 1)
    throw std::invalid_argument("random_dag: bad parameters");
  std::vector<std::string> names;
  for (int v = 0; v < inner; ++v) names.push_back("v" + std::to_string(v));
  names.push_back("t");
  const VertexId target = inner;
  std::vector<Edge> edges;
  auto random_head = [&](int tail) {
    // Heads range over tail+1 .. inner, where inner is the target.
    return static_cast<VertexId>(tail + 1 + static_cast<int>(rng.uniform_index(
                                                   static_cast<std::uint64_t>(inner - tail))));
  };
  auto random_cost = [&] { return static_cast<Cost>(1 + rng.uniform_index(static_cast<std::uint64_t>(max_cost))); };
  for (int v = 0; v < inner; ++v) edges.push_back(Edge{v, random_head(v), random_cost(), {}});
  for (int k = 0; k < extra_edges; ++k) {
    int v = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(inner)));
    edges.push_back(Edge{v, random_head(v), random_cost(), {}});
  }
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].name = "e" + std::to_string(i);
  return Digraph(std::move(names), target, std::move(edges));
}

Policy random_policy(const Digraph& g, Rng& rng) {
  std::vector<EdgeId> chosen(g.num_vertices(), kNoEdge);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (static_cast<VertexId>(v) == g.target()) continue;
    const auto& out = g.out_edges(static_cast<VertexId>(v));
    chosen[v] = out[rng.uniform_index(out.size())];
  }
  return Policy(g, std::move(chosen));
}

Policy random_policy_within(const Digraph& g, const EdgeSet& F, Rng& rng) {
  std::vector<EdgeId> chosen(g.num_vertices(), kNoEdge);
  std::vector<EdgeId> options;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (static_cast<VertexId>(v) == g.target()) continue;
    options.clear();
    for (EdgeId e : g.out_edges(static_cast<VertexId>(v))) {
      if (F.contains(e)) options.push_back(e);
    }
    if (options.empty()) throw DisconnectedVertex("vertex " + g.vertex_name(static_cast<VertexId>(v)) + " has no edge in F");
    chosen[v] = options[rng.uniform_index(options.size())];
  }
  return Policy(g, std::move(chosen));
}

Digraph parallel_edge_graph() {
  return Digraph({"v", "t"}, 1, {Edge{0, 1, 5, "expensive"}, Edge{0, 1, 2, "cheap"}});
}

}  // namespace facetlab
