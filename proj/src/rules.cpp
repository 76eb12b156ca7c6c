#include "facetlab/rules.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

namespace facetlab {

namespace {

constexpr std::array<std::pair<Rule, const char*>, 6> kRuleNames{{
    {Rule::RandomFacet, "random-facet"},
    {Rule::RandomFacetNonrec, "random-facet-nonrec"},
    {Rule::RandomFacet1P, "random-facet-1p"},
    {Rule::Bland, "bland"},
    {Rule::RandomBland, "random-bland"},
    {Rule::Dantzig, "dantzig"},
}};

// Current tree with its distances; every pivot must lower the objective.
class TreeState {
 public:
  TreeState(const Digraph& g, Policy B)
      : g_(g), B_(std::move(B)), y_(tree_distances(g_, B_)), objective_(objective(y_)) {}

  bool improving(EdgeId e) const { return is_improving(g_, y_, e); }
  const Policy& policy() const { return B_; }
  Policy& mutable_policy() { return B_; }
  const DistanceVector& distances() const { return y_; }

  EdgeId pivot(EdgeId e, RunResult& result) {
    EdgeId leaving = B_.switch_to(g_, e);
    y_ = tree_distances(g_, B_);
    Cost next = objective(y_);
    if (next >= objective_)
      throw InvariantViolation("switch to " + std::to_string(e) + " did not decrease the objective");
    objective_ = next;
    ++result.pivots;
    result.log.push_back(PivotRecord{e, leaving});
    return leaving;
  }

 private:
  const Digraph& g_;
  Policy B_;
  DistanceVector y_;
  Cost objective_;
};

}  // namespace

std::string rule_name(Rule rule) {
  for (const auto& [r, name] : kRuleNames) {
    if (r == rule) return name;
  }
  return "unknown";
}

std::optional<Rule> parse_rule(const std::string& name) {
  for (const auto& [r, n] : kRuleNames) {
    if (name == n) return r;
  }
  return std::nullopt;
}

std::size_t ComputationTree::switch_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& u) { return u.right >= 0; }));
}

RunResult facet_run(const Digraph& g, const EdgeSet& F0, const Policy& B0, FacetChoice choice,
                    FacetOptions options) {
  if ((choice.rng != nullptr) + (choice.sigma != nullptr) + static_cast<bool>(choice.picker) != 1)
    throw std::invalid_argument("facet_run needs exactly one choice mode");
  if (F0.universe() != g.num_edges()) throw InvalidStart("F is over a different edge universe");
  if (!B0.is_subset_of(F0)) throw InvalidStart("start policy is not contained in F");

  RunResult result;
  result.rule = choice.sigma ? Rule::RandomFacet1P : Rule::RandomFacet;
  TreeState state(g, B0);
  EdgeSet F = F0;

  // Candidates F minus B, keyed by edge id or by rank.
  const std::size_t m = g.num_edges();
  auto key = [&](EdgeId e) -> std::size_t {
    return choice.sigma ? static_cast<std::size_t>((*choice.sigma)(e) - 1) : static_cast<std::size_t>(e);
  };
  auto edge_of = [&](std::size_t k) -> EdgeId {
    return choice.sigma ? choice.sigma->edge_at(static_cast<int>(k) + 1) : static_cast<EdgeId>(k);
  };
  RankedSet candidates(m);
  for (EdgeId e : F.ids()) {
    if (!state.policy().contains(g, e)) candidates.insert(key(e));
  }

  std::shared_ptr<ComputationTree> tree;
  if (options.record_tree) {
    tree = std::make_shared<ComputationTree>();
    tree->root_F = F0;
    tree->root_B = B0;
  }
  auto new_node = [&](int parent, bool is_right) {
    if (!tree) return -1;
    tree->nodes.push_back(TreeNode{parent, is_right, kNoEdge, -1, -1, {}});
    int id = static_cast<int>(tree->nodes.size()) - 1;
    if (parent >= 0) {
      auto& p = tree->nodes[static_cast<std::size_t>(parent)];
      (is_right ? p.right : p.left) = id;
    }
    return id;
  };

  struct Frame {
    int node;
    EdgeId picked;
    bool after_left;
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{new_node(-1, false), kNoEdge, false});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (!f.after_left) {
      if (candidates.size() == 0) {
        stack.pop_back();
        continue;
      }
      std::size_t k = 0;
      if (choice.rng)
        k = candidates.kth(choice.rng->uniform_index(candidates.size()));
      else if (choice.picker)
        k = candidates.kth(choice.picker(candidates.size()));
      else
        k = candidates.kth(0);
      const EdgeId e = edge_of(k);
      f.picked = e;
      f.after_left = true;
      if (tree) tree->nodes[static_cast<std::size_t>(f.node)].picked = e;
      F.erase(e);
      candidates.erase(k);
      const int child = new_node(f.node, false);
      stack.push_back(Frame{child, kNoEdge, false});
      continue;
    }
    const EdgeId e = f.picked;
    F.insert(e);
    candidates.insert(key(e));
    if (!state.improving(e)) {
      stack.pop_back();
      continue;
    }
    const EdgeId leaving = state.pivot(e, result);
    if (!F.contains(leaving)) throw InvariantViolation("leaving edge outside F");
    candidates.erase(key(e));
    candidates.insert(key(leaving));
    const int right = new_node(f.node, true);
    if (tree) tree->nodes[static_cast<std::size_t>(f.node)].pivot = PivotRecord{e, leaving};
    // The right call's result is this call's result, so it replaces the frame.
    f = Frame{right, kNoEdge, false};
  }
  result.final_policy = state.policy();
  result.tree = std::move(tree);
  return result;
}

RunResult random_facet(const Digraph& g, const EdgeSet& F, const Policy& B, Rng& rng,
                       FacetOptions options) {
  return facet_run(g, F, B, FacetChoice{&rng, nullptr, {}}, options);
}

RunResult random_facet_1p(const Digraph& g, const EdgeSet& F, const Policy& B,
                          const PermutationFn& sigma, FacetOptions options) {
  if (sigma.size() != g.num_edges()) throw InvalidStart("sigma does not cover the edges");
  return facet_run(g, F, B, FacetChoice{nullptr, &sigma, {}}, options);
}

RunResult random_facet_nonrec(const Digraph& g, const Policy& B0, Rng& rng) {
  RunResult result;
  result.rule = Rule::RandomFacetNonrec;
  TreeState state(g, B0);
  std::vector<EdgeId> perm;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    if (!state.policy().contains(g, static_cast<EdgeId>(i))) perm.push_back(static_cast<EdgeId>(i));
  }
  rng.shuffle(std::span<EdgeId>(perm));
  for (;;) {
    auto it = std::find_if(perm.begin(), perm.end(), [&](EdgeId e) { return state.improving(e); });
    if (it == perm.end()) break;
    const auto j = static_cast<std::size_t>(it - perm.begin());
    const EdgeId leaving = state.pivot(*it, result);
    // Prefix i_1..i_{j-1} plus the leaving edge is reshuffled; the suffix keeps its order.
    perm[j] = leaving;
    rng.shuffle(std::span<EdgeId>(perm.data(), j + 1));
  }
  result.final_policy = state.policy();
  return result;
}

RunResult bland_rec(const Digraph& g, int ell, const Policy& B, const PermutationFn& sigma,
                    BlandObserver* observer) {
  const int m = static_cast<int>(g.num_edges());
  if (sigma.size() != g.num_edges()) throw InvalidStart("sigma does not cover the edges");
  if (ell < 1 || ell > m + 1) throw InvalidStart("start index outside 1..m+1");
  RunResult result;
  result.rule = Rule::Bland;
  TreeState state(g, B);

  enum class Stage { Enter, AfterLeft, AfterRight };
  struct Frame {
    int ell;
    Stage stage;
    Policy in;  // input tree, kept only for the observer
  };
  std::vector<Frame> stack;
  auto enter = [&](int l) {
    Frame f{l, Stage::Enter, {}};
    if (observer) {
      f.in = state.policy();
      observer->on_enter(l, state.policy());
    }
    stack.push_back(std::move(f));
  };
  auto leave = [&] {
    if (observer) observer->on_return(stack.back().ell, stack.back().in, state.policy());
    stack.pop_back();
  };

  enter(ell);
  while (!stack.empty()) {
    Frame& f = stack.back();
    switch (f.stage) {
      case Stage::Enter:
        if (f.ell > m) {
          leave();
        } else {
          f.stage = Stage::AfterLeft;
          enter(f.ell + 1);
        }
        break;
      case Stage::AfterLeft: {
        const EdgeId e = sigma.edge_at(f.ell);
        if (!state.improving(e)) {
          leave();
          break;
        }
        state.pivot(e, result);
        if (observer) {
          observer->on_pivot(f.ell, e, state.policy());
          f.stage = Stage::AfterRight;
          enter(f.ell);
        } else {
          f.stage = Stage::Enter;
        }
        break;
      }
      case Stage::AfterRight:
        leave();
        break;
    }
  }
  result.final_policy = state.policy();
  return result;
}

RunResult bland_nonrec(const Digraph& g, int k, const Policy& B, const PermutationFn& sigma) {
  const int m = static_cast<int>(g.num_edges());
  if (sigma.size() != g.num_edges()) throw InvalidStart("sigma does not cover the edges");
  if (k < 1 || k > m + 1) throw InvalidStart("start index outside 1..m+1");
  RunResult result;
  result.rule = Rule::Bland;
  TreeState state(g, B);
  for (;;) {
    int rank = m;
    while (rank >= k && !state.improving(sigma.edge_at(rank))) --rank;
    if (rank < k) break;
    state.pivot(sigma.edge_at(rank), result);
  }
  result.final_policy = state.policy();
  return result;
}

RunResult random_bland(const Digraph& g, const Policy& B0, Rng& rng) {
  PermutationFn sigma = PermutationFn::uniform(g.num_edges(), rng);
  RunResult result = bland_nonrec(g, 1, B0, sigma);
  result.rule = Rule::RandomBland;
  return result;
}

RunResult dantzig(const Digraph& g, const Policy& B0) {
  RunResult result;
  result.rule = Rule::Dantzig;
  TreeState state(g, B0);
  for (;;) {
    EdgeId best = kNoEdge;
    Cost best_cbar = 0;
    const auto& y = state.distances();
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
      const Edge& e = g.edge(static_cast<EdgeId>(i));
      const Cost cbar = e.cost + y[static_cast<std::size_t>(e.head)] - y[static_cast<std::size_t>(e.tail)];
      if (cbar < best_cbar) {
        best_cbar = cbar;
        best = static_cast<EdgeId>(i);
      }
    }
    if (best == kNoEdge) break;
    state.pivot(best, result);
  }
  result.final_policy = state.policy();
  return result;
}

bool is_optimal_within(const Digraph& g, const EdgeSet& F, const Policy& B) {
  if (!B.is_subset_of(F)) return false;
  DistanceVector y = tree_distances(g, B);
  for (EdgeId e : F.ids()) {
    if (is_improving(g, y, e)) return false;
  }
  auto opt = optimal_distances_within(g, &F);
  for (std::size_t v = 0; v < y.size(); ++v) {
    if (!opt[v] || *opt[v] != y[v]) return false;
  }
  return true;
}

bool is_fixed_region(const Digraph& g, const std::vector<VertexId>& region, const Policy& B,
                     const EdgeSet& F) {
  EdgeSet FB = F;
  FB |= B.edge_set(g);
  auto opt = optimal_distances_within(g, &FB);
  DistanceVector y = tree_distances(g, B);
  for (VertexId v : region) {
    if (v == g.target()) continue;
    const auto& o = opt[static_cast<std::size_t>(v)];
    if (!o) throw DisconnectedVertex("vertex " + g.vertex_name(v) + " cannot reach the target");
    if (*o != y[static_cast<std::size_t>(v)]) return false;
  }
  return true;
}

bool is_fixed_edge(const Digraph& g, EdgeId e, const Policy& B, const EdgeSet& F) {
  if (!B.contains(g, e)) throw PreconditionViolation("edge is not in the tree");
  return is_fixed_region(g, {g.edge(e).tail}, B, F);
}

}  // namespace facetlab
