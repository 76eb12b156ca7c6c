#include "facetlab/shortest_paths.hpp"

#include <numeric>

namespace facetlab {

DistanceVector tree_distances(const Digraph& g, const Policy& b) {
  const std::size_t nv = g.num_vertices();
  if (b.num_vertices() != nv) throw PolicyCycle("policy does not match graph size");
  enum : std::uint8_t { kUnseen, kOnPath, kDone };
  std::vector<std::uint8_t> state(nv, kUnseen);
  DistanceVector y(nv, 0);
  state[static_cast<std::size_t>(g.target())] = kDone;
  std::vector<VertexId> path;
  for (std::size_t start = 0; start < nv; ++start) {
    VertexId v = static_cast<VertexId>(start);
    while (state[static_cast<std::size_t>(v)] == kUnseen) {
      state[static_cast<std::size_t>(v)] = kOnPath;
      path.push_back(v);
      EdgeId e = b.at(v);
      if (e == kNoEdge) throw PolicyCycle("vertex " + g.vertex_name(v) + " has no chosen edge");
      v = g.edge(e).head;
    }
    if (state[static_cast<std::size_t>(v)] == kOnPath)
      throw PolicyCycle("chosen edges form a cycle through " + g.vertex_name(v));
    while (!path.empty()) {
      VertexId u = path.back();
      path.pop_back();
      const Edge& edge = g.edge(b.at(u));
      y[static_cast<std::size_t>(u)] = edge.cost + y[static_cast<std::size_t>(edge.head)];
      state[static_cast<std::size_t>(u)] = kDone;
    }
  }
  return y;
}

std::vector<std::optional<Cost>> optimal_distances_within(const Digraph& g, const EdgeSet* F) {
  const std::size_t nv = g.num_vertices();
  std::vector<std::optional<Cost>> y(nv);
  y[static_cast<std::size_t>(g.target())] = 0;
  auto usable = [&](EdgeId e) { return F == nullptr || F->contains(e); };

  if (g.is_acyclic()) {
    for (VertexId v : g.reverse_topological_order()) {
      if (v == g.target()) continue;
      std::optional<Cost> best;
      for (EdgeId e : g.out_edges(v)) {
        if (!usable(e)) continue;
        const Edge& edge = g.edge(e);
        const auto& yh = y[static_cast<std::size_t>(edge.head)];
        if (yh && (!best || edge.cost + *yh < *best)) best = edge.cost + *yh;
      }
      y[static_cast<std::size_t>(v)] = best;
    }
    return y;
  }

  for (std::size_t round = 0; round <= nv; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
      const auto e = static_cast<EdgeId>(i);
      if (!usable(e)) continue;
      const Edge& edge = g.edge(e);
      const auto& yh = y[static_cast<std::size_t>(edge.head)];
      auto& yt = y[static_cast<std::size_t>(edge.tail)];
      if (yh && (!yt || edge.cost + *yh < *yt)) {
        yt = edge.cost + *yh;
        changed = true;
      }
    }
    if (!changed) return y;
  }
  throw NegativeCycle("negative cycle reachable to the target");
}

DistanceVector optimal_distances(const Digraph& g) {
  auto y = optimal_distances_within(g, nullptr);
  DistanceVector out(y.size());
  for (std::size_t v = 0; v < y.size(); ++v) out[v] = y[v].value();
  return out;
}

std::vector<EdgeId> improving_switches(const Digraph& g, const Policy& b) {
  DistanceVector y = tree_distances(g, b);
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (is_improving(g, y, static_cast<EdgeId>(i))) out.push_back(static_cast<EdgeId>(i));
  }
  return out;
}

std::vector<EdgeId> improving_switches(const Digraph& g, const Policy& b, const EdgeSet& F) {
  std::vector<EdgeId> out;
  for (EdgeId e : improving_switches(g, b)) {
    if (F.contains(e)) out.push_back(e);
  }
  return out;
}

SwitchOutcome apply_switch(const Digraph& g, const Policy& b, EdgeId e) {
  if (!g.valid_edge(e)) throw NotAnEdge("edge id " + std::to_string(e) + " is not in the graph");
  SwitchOutcome out{b, kNoEdge, false};
  if (b.contains(g, e)) {
    out.self_replace = true;
    out.leaving = e;
    return out;
  }
  out.leaving = out.policy.switch_to(g, e);
  return out;
}

EdgeSet optimal_edge_set(const Digraph& g, const EdgeSet& F) {
  auto y = optimal_distances_within(g, &F);
  for (std::size_t v = 0; v < y.size(); ++v) {
    if (!y[v])
      throw DisconnectedVertex("vertex " + g.vertex_name(static_cast<VertexId>(v)) +
                               " cannot reach the target within F");
  }
  EdgeSet out(g.num_edges());
  for (EdgeId e : F.ids()) {
    const Edge& edge = g.edge(e);
    if (*y[static_cast<std::size_t>(edge.tail)] ==
        edge.cost + *y[static_cast<std::size_t>(edge.head)])
      out.insert(e);
  }
  return out;
}

Cost objective(const DistanceVector& y) { return std::accumulate(y.begin(), y.end(), Cost{0}); }

}  // namespace facetlab
