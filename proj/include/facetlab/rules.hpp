#ifndef FACETLAB_RULES_HPP
#define FACETLAB_RULES_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "facetlab/digraph.hpp"
#include "facetlab/edge_set.hpp"
#include "facetlab/permutation.hpp"
#include "facetlab/rng.hpp"
#include "facetlab/shortest_paths.hpp"

namespace facetlab {

enum class Rule { RandomFacet, RandomFacetNonrec, RandomFacet1P, Bland, RandomBland, Dantzig };

std::string rule_name(Rule rule);
std::optional<Rule> parse_rule(const std::string& name);

struct PivotRecord {
  EdgeId entering = kNoEdge;
  EdgeId leaving = kNoEdge;
  bool operator==(const PivotRecord&) const = default;
};

// One recursive call of Random-Facet. F(u) is not stored: F(left) is F(u)
// minus `picked`, and F(right) = F(u). B(right) is B at the end of the left
// subtree with `pivot` applied.
struct TreeNode {
  int parent = -1;
  bool is_right = false;
  EdgeId picked = kNoEdge;  // kNoEdge when F(u) = B(u)
  int left = -1;
  int right = -1;
  PivotRecord pivot;  // set when right >= 0
};

struct ComputationTree {
  EdgeSet root_F;
  Policy root_B;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  // Nodes with a right child.
  std::size_t switch_count() const;
};

struct RunResult {
  Policy final_policy;
  std::uint64_t pivots = 0;
  std::vector<PivotRecord> log;
  std::uint64_t seed = 0;
  Rule rule = Rule::RandomFacet;
  std::shared_ptr<ComputationTree> tree;
};

struct FacetOptions {
  bool record_tree = false;
};

// How Random-Facet picks from F minus B: the k-th smallest edge id with k
// uniform (rng set), the minimum rank under sigma (sigma set), or the k-th
// smallest edge id with k = picker(|F minus B|) (used to enumerate choices).
struct FacetChoice {
  Rng* rng = nullptr;
  const PermutationFn* sigma = nullptr;
  std::function<std::size_t(std::size_t)> picker;
};

RunResult facet_run(const Digraph& g, const EdgeSet& F, const Policy& B, FacetChoice choice,
                    FacetOptions options = {});
RunResult random_facet(const Digraph& g, const EdgeSet& F, const Policy& B, Rng& rng,
                       FacetOptions options = {});
RunResult random_facet_1p(const Digraph& g, const EdgeSet& F, const Policy& B,
                          const PermutationFn& sigma, FacetOptions options = {});
RunResult random_facet_nonrec(const Digraph& g, const Policy& B0, Rng& rng);

// Hooks into the recursive Bland run. `ell` identifies F = F(sigma, ell).
class BlandObserver {
 public:
  virtual ~BlandObserver() = default;
  virtual void on_enter(int /*ell*/, const Policy& /*B*/) {}
  virtual void on_pivot(int /*ell*/, EdgeId /*e*/, const Policy& /*after*/) {}
  virtual void on_return(int /*ell*/, const Policy& /*in*/, const Policy& /*out*/) {}
};

// Bland(F(sigma, ell), B, sigma) through an explicit stack.
RunResult bland_rec(const Digraph& g, int ell, const Policy& B, const PermutationFn& sigma,
                    BlandObserver* observer = nullptr);
// Scans ranks m, m-1, ..., k for the first improving switch and restarts
// after every pivot.
RunResult bland_nonrec(const Digraph& g, int k, const Policy& B, const PermutationFn& sigma);
RunResult random_bland(const Digraph& g, const Policy& B0, Rng& rng);
RunResult dantzig(const Digraph& g, const Policy& B0);

// Terminal check: no improving switch in F and y_B equal to the optimal
// distances of G_F.
bool is_optimal_within(const Digraph& g, const EdgeSet& F, const Policy& B);

// y_B(tail) equals the optimal distance of the tail in G_{F u B}.
bool is_fixed_edge(const Digraph& g, EdgeId e, const Policy& B, const EdgeSet& F);
// Every B-edge leaving a vertex of `region` is fixed.
bool is_fixed_region(const Digraph& g, const std::vector<VertexId>& region, const Policy& B,
                     const EdgeSet& F);

}  // namespace facetlab

#endif
