#ifndef FACETLAB_DIGRAPH_HPP
#define FACETLAB_DIGRAPH_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "facetlab/common.hpp"
#include "facetlab/edge_set.hpp"

namespace facetlab {

struct Edge {
  VertexId tail = kNoVertex;
  VertexId head = kNoVertex;
  Cost cost = 0;
  std::string name;
};

// Immutable weighted digraph with a designated target. Edge ids are the
// positions in the edge vector. Every non-target vertex must have an
// outgoing edge and reach the target; the target has no outgoing edges.
class Digraph {
 public:
  Digraph(std::vector<std::string> vertex_names, VertexId target, std::vector<Edge> edges,
          Cost scale = 1);

  std::size_t num_vertices() const { return vertex_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  VertexId target() const { return target_; }
  Cost scale() const { return scale_; }

  const Edge& edge(EdgeId e) const;
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<EdgeId>& out_edges(VertexId v) const {
    return out_[static_cast<std::size_t>(v)];
  }
  const std::string& vertex_name(VertexId v) const {
    return vertex_names_[static_cast<std::size_t>(v)];
  }
  std::optional<EdgeId> find_edge(const std::string& name) const;
  std::optional<VertexId> find_vertex(const std::string& name) const;

  bool is_acyclic() const { return acyclic_; }
  // Heads before tails; only meaningful when acyclic.
  const std::vector<VertexId>& reverse_topological_order() const { return order_; }

  bool valid_edge(EdgeId e) const { return e >= 0 && static_cast<std::size_t>(e) < edges_.size(); }

 private:
  std::vector<std::string> vertex_names_;
  VertexId target_;
  std::vector<Edge> edges_;
  Cost scale_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<VertexId> order_;
  bool acyclic_ = false;
  std::unordered_map<std::string, EdgeId> edge_by_name_;
  std::unordered_map<std::string, VertexId> vertex_by_name_;
};

// One chosen outgoing edge per non-target vertex.
class Policy {
 public:
  Policy() = default;
  // chosen[v] for every vertex; kNoEdge at the target.
  Policy(const Digraph& g, std::vector<EdgeId> chosen);
  static Policy from_edges(const Digraph& g, const std::vector<EdgeId>& edges);

  EdgeId at(VertexId v) const { return chosen_[static_cast<std::size_t>(v)]; }
  bool contains(const Digraph& g, EdgeId e) const {
    return chosen_[static_cast<std::size_t>(g.edge(e).tail)] == e;
  }
  std::size_t num_vertices() const { return chosen_.size(); }
  const std::vector<EdgeId>& chosen() const { return chosen_; }
  std::vector<EdgeId> edges() const;
  EdgeSet edge_set(const Digraph& g) const;
  bool is_subset_of(const EdgeSet& F) const;

  // Replaces the chosen edge at the tail of e; returns the edge that left.
  EdgeId switch_to(const Digraph& g, EdgeId e);

  bool operator==(const Policy& other) const { return chosen_ == other.chosen_; }

 private:
  std::vector<EdgeId> chosen_;
};

}  // namespace facetlab

#endif
