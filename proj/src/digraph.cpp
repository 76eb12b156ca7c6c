#include "facetlab/digraph.hpp"

#include <algorithm>
#include <deque>

namespace facetlab {

Digraph::Digraph(std::vector<std::string> vertex_names, VertexId target,
                 std::vector<Edge> edges, Cost scale)
    : vertex_names_(std::move(vertex_names)),
      target_(target),
      edges_(std::move(edges)),
      scale_(scale),
      out_(vertex_names_.size()) {
  const auto nv = static_cast<VertexId>(vertex_names_.size());
  if (scale_ <= 0) throw InvalidGraph("scale must be positive");
  if (target_ < 0 || target_ >= nv) throw InvalidGraph("target is not a vertex");
  for (VertexId v = 0; v < nv; ++v) {
    if (!vertex_by_name_.emplace(vertex_names_[static_cast<std::size_t>(v)], v).second)
      throw InvalidGraph("duplicate vertex name " + vertex_names_[static_cast<std::size_t>(v)]);
  }
  std::vector<std::vector<EdgeId>> in(vertex_names_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.tail < 0 || e.tail >= nv || e.head < 0 || e.head >= nv)
      throw InvalidGraph("edge " + std::to_string(i) + " has an endpoint outside the graph");
    if (e.tail == target_) throw InvalidGraph("target must not have outgoing edges");
    if (e.tail == e.head) throw InvalidGraph("self-loop at edge " + std::to_string(i));
    out_[static_cast<std::size_t>(e.tail)].push_back(static_cast<EdgeId>(i));
    in[static_cast<std::size_t>(e.head)].push_back(static_cast<EdgeId>(i));
    if (!e.name.empty() && !edge_by_name_.emplace(e.name, static_cast<EdgeId>(i)).second)
      throw InvalidGraph("duplicate edge name " + e.name);
  }
  for (VertexId v = 0; v < nv; ++v) {
    if (v != target_ && out_[static_cast<std::size_t>(v)].empty())
      throw InvalidGraph("vertex " + vertex_names_[static_cast<std::size_t>(v)] +
                         " has no outgoing edge");
  }

  // Reverse search from the target: every vertex must reach it.
  std::vector<bool> reach(vertex_names_.size(), false);
  std::deque<VertexId> queue{target_};
  reach[static_cast<std::size_t>(target_)] = true;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : in[static_cast<std::size_t>(v)]) {
      VertexId u = edges_[static_cast<std::size_t>(e)].tail;
      if (!reach[static_cast<std::size_t>(u)]) {
        reach[static_cast<std::size_t>(u)] = true;
        queue.push_back(u);
      }
    }
  }
  for (VertexId v = 0; v < nv; ++v) {
    if (!reach[static_cast<std::size_t>(v)])
      throw InvalidGraph("vertex " + vertex_names_[static_cast<std::size_t>(v)] +
                         " cannot reach the target");
  }

  // Kahn on the reversed graph gives heads before tails.
  std::vector<std::size_t> pending(vertex_names_.size());
  for (VertexId v = 0; v < nv; ++v) pending[static_cast<std::size_t>(v)] = out_[static_cast<std::size_t>(v)].size();
  std::vector<VertexId> ready;
  for (VertexId v = 0; v < nv; ++v) {
    if (pending[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  }
  while (!ready.empty()) {
    VertexId v = ready.back();
    ready.pop_back();
    order_.push_back(v);
    for (EdgeId e : in[static_cast<std::size_t>(v)]) {
      VertexId u = edges_[static_cast<std::size_t>(e)].tail;
      if (--pending[static_cast<std::size_t>(u)] == 0) ready.push_back(u);
    }
  }
  acyclic_ = order_.size() == vertex_names_.size();
  if (!acyclic_) order_.clear();
}

const Edge& Digraph::edge(EdgeId e) const {
  if (!valid_edge(e)) throw NotAnEdge("edge id " + std::to_string(e) + " is not in the graph");
  return edges_[static_cast<std::size_t>(e)];
}

std::optional<EdgeId> Digraph::find_edge(const std::string& name) const {
  auto it = edge_by_name_.find(name);
  if (it == edge_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<VertexId> Digraph::find_vertex(const std::string& name) const {
  auto it = vertex_by_name_.find(name);
  if (it == vertex_by_name_.end()) return std::nullopt;
  return it->second;
}

Policy::Policy(const Digraph& g, std::vector<EdgeId> chosen) : chosen_(std::move(chosen)) {
  if (chosen_.size() != g.num_vertices()) throw InvalidStart("policy size does not match graph");
  for (std::size_t v = 0; v < chosen_.size(); ++v) {
    EdgeId e = chosen_[v];
    if (static_cast<VertexId>(v) == g.target()) {
      if (e != kNoEdge) throw InvalidStart("policy chooses an edge at the target");
      continue;
    }
    if (!g.valid_edge(e) || g.edge(e).tail != static_cast<VertexId>(v))
      throw InvalidStart("policy edge at " + g.vertex_name(static_cast<VertexId>(v)) +
                         " does not leave that vertex");
  }
}

Policy Policy::from_edges(const Digraph& g, const std::vector<EdgeId>& edges) {
  std::vector<EdgeId> chosen(g.num_vertices(), kNoEdge);
  for (EdgeId e : edges) {
    VertexId t = g.edge(e).tail;
    if (chosen[static_cast<std::size_t>(t)] != kNoEdge)
      throw InvalidStart("two policy edges leave " + g.vertex_name(t));
    chosen[static_cast<std::size_t>(t)] = e;
  }
  for (std::size_t v = 0; v < chosen.size(); ++v) {
    if (static_cast<VertexId>(v) != g.target() && chosen[v] == kNoEdge)
      throw InvalidStart("no policy edge at " + g.vertex_name(static_cast<VertexId>(v)));
  }
  return Policy(g, std::move(chosen));
}

std::vector<EdgeId> Policy::edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e : chosen_) {
    if (e != kNoEdge) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

EdgeSet Policy::edge_set(const Digraph& g) const { return EdgeSet::of(g.num_edges(), edges()); }

bool Policy::is_subset_of(const EdgeSet& F) const {
  return std::all_of(chosen_.begin(), chosen_.end(),
                     [&](EdgeId e) { return e == kNoEdge || F.contains(e); });
}

EdgeId Policy::switch_to(const Digraph& g, EdgeId e) {
  const Edge& edge = g.edge(e);
  EdgeId& slot = chosen_.at(static_cast<std::size_t>(edge.tail));
  EdgeId leaving = slot;
  slot = e;
  return leaving;
}

}  // namespace facetlab
