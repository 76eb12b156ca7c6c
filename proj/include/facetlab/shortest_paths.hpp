#ifndef FACETLAB_SHORTEST_PATHS_HPP
#define FACETLAB_SHORTEST_PATHS_HPP

#include <optional>
#include <vector>

#include "facetlab/digraph.hpp"
#include "facetlab/edge_set.hpp"

namespace facetlab {

// y[v] in scaled units; y[target] = 0.
using DistanceVector = std::vector<Cost>;

DistanceVector tree_distances(const Digraph& g, const Policy& b);

// Shortest distances to the target using only edges of F (all edges when
// F is null). Unreachable vertices are nullopt. Topological relaxation on
// acyclic graphs, Bellman-Ford otherwise.
std::vector<std::optional<Cost>> optimal_distances_within(const Digraph& g, const EdgeSet* F);
DistanceVector optimal_distances(const Digraph& g);

inline bool is_improving(const Digraph& g, const DistanceVector& y, EdgeId e) {
  const Edge& edge = g.edge(e);
  return edge.cost + y[static_cast<std::size_t>(edge.head)] <
         y[static_cast<std::size_t>(edge.tail)];
}

std::vector<EdgeId> improving_switches(const Digraph& g, const Policy& b);
// Improving switches restricted to edges of F.
std::vector<EdgeId> improving_switches(const Digraph& g, const Policy& b, const EdgeSet& F);

struct SwitchOutcome {
  Policy policy;
  EdgeId leaving = kNoEdge;
  // e was already the chosen edge; the policy is unchanged.
  bool self_replace = false;
};
SwitchOutcome apply_switch(const Digraph& g, const Policy& b, EdgeId e);

// Edges (i,j) of F with y(i) = c(i,j) + y(j) under optimal distances of G_F.
EdgeSet optimal_edge_set(const Digraph& g, const EdgeSet& F);

Cost objective(const DistanceVector& y);

}  // namespace facetlab

#endif
