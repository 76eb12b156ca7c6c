#ifndef FACETLAB_RANDOM_GRAPHS_HPP
#define FACETLAB_RANDOM_GRAPHS_HPP

#include "facetlab/digraph.hpp"
#include "facetlab/rng.hpp"

namespace facetlab {

// Random acyclic instance: `inner` non-target vertices v0..v{inner-1} in
// topological order plus target "t". Each vertex gets one edge to a later
// vertex or the target, then `extra_edges` more edges (parallel edges
// allowed). Costs are uniform in [1, max_cost].
Digraph random_dag(int inner, int extra_edges, Rng& rng, Cost max_cost = 20);

// Uniformly random policy; valid on any acyclic graph.
Policy random_policy(const Digraph& g, Rng& rng);
// Uniform choice among the edges of F at every vertex. The result must be a
// tree; on acyclic graphs it always is.
Policy random_policy_within(const Digraph& g, const EdgeSet& F, Rng& rng);

// Vertex v with two parallel edges to t of costs 5 (edge 0) and 2 (edge 1).
Digraph parallel_edge_graph();

}  // namespace facetlab

#endif
