#ifndef FACETLAB_CONSTRUCTION_HPP
#define FACETLAB_CONSTRUCTION_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "facetlab/digraph.hpp"
#include "facetlab/edge_set.hpp"
#include "facetlab/rng.hpp"

namespace facetlab {

struct ConstructionParams {
  int n = 1;
  int r = 1;
  int s = 1;
  int t = 1;
};

enum class EdgeKind { A1, A0, B1, B0, U1, U0, W, W0 };

// Position of an edge in the construction. Indices are 1-based; unused
// fields are 0. For W edges j is the a-chain index; copy is the multi-edge
// copy number (0 for one-edges of the a/b chains).
struct EdgeRole {
  EdgeKind kind;
  int i = 0;
  int j = 0;
  int k = 0;
  int copy = 0;
  int multi = -1;
};

enum class BitValue { Zero, One, Undefined };

// The lower-bound graph G_{n,r,s,t} with all of its named edge groups.
// Indices i, j, k follow the table of edges: levels i in 1..n, a-chains j
// in 1..r with positions k in 1..s, b-chain positions j in 1..rs. The
// target plays the role of both u_{n+1} and w_{n+1}.
class Construction {
 public:
  static Construction build(int n, int r, int s, int t);
  static Construction build(const ConstructionParams& p) { return build(p.n, p.r, p.s, p.t); }

  const Digraph& graph() const { return graph_; }
  const ConstructionParams& params() const { return p_; }
  int n() const { return p_.n; }
  int r() const { return p_.r; }
  int s() const { return p_.s; }
  int t() const { return p_.t; }
  int rs() const { return p_.r * p_.s; }
  std::size_t num_edges() const { return graph_.num_edges(); }

  VertexId u(int i) const;
  VertexId w(int i) const;
  VertexId a(int i, int j, int k) const;
  VertexId b(int i, int j) const;

  const std::vector<EdgeId>& b1(int i) const { return b1_[static_cast<std::size_t>(i - 1)]; }
  const std::vector<EdgeId>& a1(int i, int j) const {
    return a1_[static_cast<std::size_t>((i - 1) * p_.r + (j - 1))];
  }
  EdgeId b1_edge(int i, int j) const { return b1(i)[static_cast<std::size_t>(j - 1)]; }
  EdgeId a1_edge(int i, int j, int k) const { return a1(i, j)[static_cast<std::size_t>(k - 1)]; }
  // j-th block of s consecutive b-chain one-edges.
  std::vector<EdgeId> b1_chunk(int i, int j) const;

  const std::vector<EdgeId>& b0(int i, int j) const { return multi(b0_id(i, j)); }
  const std::vector<EdgeId>& a0(int i, int j, int k) const { return multi(a0_id(i, j, k)); }
  const std::vector<EdgeId>& u1(int i) const { return multi(u1_id(i)); }
  const std::vector<EdgeId>& u0(int i) const { return multi(u0_id(i)); }
  const std::vector<EdgeId>& wj(int i, int j) const { return multi(w_id(i, j)); }
  const std::vector<EdgeId>& w0(int i) const { return multi(w0_id(i)); }

  std::size_t num_multi() const { return multi_.size(); }
  const std::vector<EdgeId>& multi(int m) const { return multi_[static_cast<std::size_t>(m)]; }
  const std::string& multi_name(int m) const { return multi_names_[static_cast<std::size_t>(m)]; }
  const EdgeRole& role(EdgeId e) const { return roles_[static_cast<std::size_t>(e)]; }
  bool is_one_edge(EdgeId e) const;

  int b0_id(int i, int j) const;
  int a0_id(int i, int j, int k) const;
  int u1_id(int i) const;
  int u0_id(int i) const;
  int w_id(int i, int j) const;
  int w0_id(int i) const;

  // B0: the first copy of the zero-edge at every vertex.
  Policy initial_tree() const;

  int last_b(int i, const EdgeSet& F) const;
  int last_a(int i, int j, const EdgeSet& F) const;
  bool is_functional(const EdgeSet& F) const;
  // Some a-chain of level i lies entirely in F.
  bool a1_sqsubseteq(int i, const EdgeSet& F) const;
  bool b1_subset(int i, const EdgeSet& F) const;
  int reset_level(const EdgeSet& F) const;

  bool bit_is_one(int i, const EdgeSet& F, const Policy& B) const;
  bool bit_is_zero(int i, const EdgeSet& F, const Policy& B) const;
  // One when the one-conditions hold (also if the zero-conditions hold),
  // Zero when only the zero-conditions hold, Undefined otherwise.
  BitValue bit(int i, const EdgeSet& F, const Policy& B) const;

  EdgeSet bf_edge_set(const EdgeSet& F) const;

  // Vertices that cannot reach b_{i,j} (resp. a_{i,j,k}), including it.
  std::vector<VertexId> unreaching_b(int i, int j) const;
  std::vector<VertexId> unreaching_a(int i, int j, int k) const;

  // Group name -> edge ids, for the sidecar index file.
  nlohmann::json index_json() const;

 private:
  Construction(ConstructionParams p, Digraph g) : p_(p), graph_(std::move(g)) {}

  ConstructionParams p_;
  Digraph graph_;
  std::vector<std::vector<EdgeId>> b1_;
  std::vector<std::vector<EdgeId>> a1_;
  std::vector<std::vector<EdgeId>> multi_;
  std::vector<std::string> multi_names_;
  std::vector<EdgeRole> roles_;
  std::vector<int> b0_ids_;
  std::vector<int> a0_ids_;
  std::vector<int> u1_ids_;
  std::vector<int> u0_ids_;
  std::vector<int> w_ids_;
  std::vector<int> w0_ids_;
};

// Random functional subset. Each b-chain, each a-chain and each multi-edge
// independently stays whole or loses a random subset of its edges (a
// multi-edge always keeps at least one copy), so every reset level and
// every case of B_F shows up with fair probability.
EdgeSet random_functional_set(const Construction& c, Rng& rng);

}  // namespace facetlab

#endif
