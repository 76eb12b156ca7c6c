#include "facetlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "facetlab/parallel.hpp"
#include "facetlab/shortest_paths.hpp"

namespace facetlab {

std::optional<int> sigma_p(const ComputationPath& P, EdgeId e) {
  for (std::size_t l = 0; l < P.size(); ++l) {
    if (P[l].edge == e) return static_cast<int>(l);
  }
  return std::nullopt;
}

std::optional<int> sigma_p_min(const ComputationPath& P, const std::vector<EdgeId>& group) {
  for (std::size_t l = 0; l < P.size(); ++l) {
    if (std::find(group.begin(), group.end(), P[l].edge) != group.end()) return static_cast<int>(l);
  }
  return std::nullopt;
}

std::optional<int> sigma_p_b1(const ComputationPath& P, const Construction& c, int i) {
  return sigma_p_min(P, c.b1(i));
}

std::optional<int> sigma_p_a1_group(const ComputationPath& P, const Construction& c, int i, int j) {
  return sigma_p_min(P, c.a1(i, j));
}

std::optional<int> sigma_p_a1(const ComputationPath& P, const Construction& c, int i) {
  int worst = -1;
  for (int j = 1; j <= c.r(); ++j) {
    auto v = sigma_p_a1_group(P, c, i, j);
    if (!v) return std::nullopt;
    worst = std::max(worst, *v);
  }
  return worst;
}

namespace {

class TreeReplay {
 public:
  TreeReplay(const Digraph& g, const ComputationTree& tree) : g_(g), tree_(tree), F_(tree.root_F) {}

  std::optional<Policy> run(int u, Policy B) {
    for (;;) {
      if (u < 0 || static_cast<std::size_t>(u) >= tree_.nodes.size()) return fail("child index out of range");
      ++visited_;
      const TreeNode& node = tree_.nodes[static_cast<std::size_t>(u)];
      if (!B.is_subset_of(F_)) return fail("B(u) not contained in F(u)");
      const bool has_candidate = F_.size() > B.num_vertices() - 1;
      if (node.picked == kNoEdge) {
        if (has_candidate) return fail("node without a pick although F(u) != B(u)");
        if (node.left >= 0 || node.right >= 0) return fail("leaf with children");
        return B;
      }
      const EdgeId e = node.picked;
      if (!F_.contains(e) || B.contains(g_, e)) return fail("picked edge not in F(u) minus B(u)");
      if (node.left < 0) return fail("missing left child");
      const TreeNode& left = tree_.nodes[static_cast<std::size_t>(node.left)];
      if (left.parent != u || left.is_right) return fail("left child links");
      F_.erase(e);
      auto after_left = run(node.left, B);
      F_.insert(e);
      if (!after_left) return std::nullopt;
      const DistanceVector y = tree_distances(g_, *after_left);
      if (!is_improving(g_, y, e)) {
        if (node.right >= 0) return fail("right child although e(u) does not improve");
        return after_left;
      }
      if (node.right < 0) return fail("missing right child for an improving e(u)");
      const TreeNode& right = tree_.nodes[static_cast<std::size_t>(node.right)];
      if (right.parent != u || !right.is_right) return fail("right child links");
      Policy next = *after_left;
      const EdgeId leaving = next.switch_to(g_, e);
      if (node.pivot.entering != e || node.pivot.leaving != leaving) return fail("recorded pivot differs");
      pivots_.push_back(PivotRecord{e, leaving});
      u = node.right;
      B = std::move(next);
    }
  }

  const std::string& error() const { return error_; }
  std::size_t visited() const { return visited_; }
  const std::vector<PivotRecord>& pivots() const { return pivots_; }

 private:
  std::optional<Policy> fail(std::string msg) {
    if (error_.empty()) error_ = std::move(msg);
    return std::nullopt;
  }

  const Digraph& g_;
  const ComputationTree& tree_;
  EdgeSet F_;
  std::string error_;
  std::size_t visited_ = 0;
  std::vector<PivotRecord> pivots_;
};

EdgeId pick(const FacetChoice& choice, const std::vector<EdgeId>& candidates) {
  if (choice.sigma) {
    return *std::min_element(candidates.begin(), candidates.end(),
                             [&](EdgeId x, EdgeId y) { return (*choice.sigma)(x) < (*choice.sigma)(y); });
  }
  if (choice.picker) return candidates[choice.picker(candidates.size())];
  return candidates[choice.rng->uniform_index(candidates.size())];
}

}  // namespace

std::optional<std::string> validate_tree(const Digraph& g, const ComputationTree& tree, const RunResult& run) {
  if (tree.nodes.empty()) return "empty tree";
  if (tree.root_F.universe() != g.num_edges()) return "root F over a different edge set";
  TreeReplay replay(g, tree);
  auto out = replay.run(0, tree.root_B);
  if (!out) return replay.error();
  if (replay.visited() != tree.nodes.size()) return "unreached nodes in the tree";
  if (!(*out == run.final_policy)) return "B(root*) differs from the returned tree";
  if (tree.switch_count() != run.pivots) return "|switch(T)| differs from the pivot count";
  if (replay.pivots() != run.log) return "pivot order in the tree differs from the run log";
  return std::nullopt;
}

std::string outcome_name(FollowOutcome o) {
  switch (o) {
    case FollowOutcome::Canonical: return "canonical";
    case FollowOutcome::Bad1: return "bad1";
    case FollowOutcome::Bad2: return "bad2";
    case FollowOutcome::Bad3: return "bad3";
    case FollowOutcome::NoRightChild: return "no-right-child";
    case FollowOutcome::Leaf: return "leaf";
    case FollowOutcome::NotApplicable: return "not-applicable";
  }
  return "unknown";
}

FollowResult follow_canonical(const Construction& c, const std::vector<int>& S_in, FacetChoice choice) {
  if ((choice.rng != nullptr) + (choice.sigma != nullptr) + static_cast<bool>(choice.picker) != 1)
    throw std::invalid_argument("follow_canonical needs exactly one choice mode");
  std::vector<int> S = S_in;
  std::sort(S.begin(), S.end(), std::greater<>());
  if (std::adjacent_find(S.begin(), S.end()) != S.end())
    throw PreconditionViolation("S has repeated levels");
  for (int i : S) {
    if (i < 1 || i > c.n()) throw PreconditionViolation("S level outside 1..n");
  }
  FollowResult result;
  if (S.empty()) return result;

  const Digraph& g = c.graph();
  const auto n = static_cast<std::size_t>(c.n());
  std::vector<int> pos_in_S(n + 1, 0);  // q, 1-based, or 0
  for (std::size_t q = 0; q < S.size(); ++q) pos_in_S[static_cast<std::size_t>(S[q])] = static_cast<int>(q) + 1;

  EdgeSet F(g.num_edges(), true);
  Policy B = c.initial_tree();
  std::vector<int> copies_left(c.num_multi());
  for (std::size_t m = 0; m < c.num_multi(); ++m) copies_left[m] = static_cast<int>(c.multi(static_cast<int>(m)).size());
  std::vector<bool> b_touched(n + 1, false);
  std::vector<std::vector<bool>> a_touched(n + 1, std::vector<bool>(static_cast<std::size_t>(c.r()) + 1, false));
  std::vector<int> a_groups_touched(n + 1, 0);

  auto finish = [&](FollowOutcome o, int index) {
    result.outcome = o;
    result.index = index;
    return result;
  };

  for (;;) {
    std::vector<EdgeId> candidates;
    for (EdgeId e : F.ids()) {
      if (!B.contains(g, e)) candidates.push_back(e);
    }
    if (candidates.empty()) return finish(FollowOutcome::Leaf, 0);
    const EdgeId e = pick(choice, candidates);
    const EdgeRole& role = c.role(e);
    const auto level = static_cast<std::size_t>(role.i);

    Direction d = Direction::L;
    if (role.kind == EdgeKind::B1 && pos_in_S[level] > 0) d = Direction::R;
    if (role.kind == EdgeKind::A1 && pos_in_S[level] > 0) {
      F.erase(e);
      if (!c.a1_sqsubseteq(role.i, F)) d = Direction::R;
      F.insert(e);
    }
    result.path.push_back(PathStep{e, d});

    // Events at index k = this step, each evaluated on its own.
    int bad1 = 0;
    int bad2 = 0;
    int bad3 = -1;
    if (role.kind == EdgeKind::B1 && !b_touched[level]) {
      b_touched[level] = true;
      const int q_new = pos_in_S[level];
      for (int q = 1; q < q_new && bad1 == 0; ++q) {
        if (!b_touched[static_cast<std::size_t>(S[static_cast<std::size_t>(q - 1)])]) bad1 = q;
      }
    }
    bool completes_last = false;
    if (role.kind == EdgeKind::A1 && !a_touched[level][static_cast<std::size_t>(role.j)]) {
      a_touched[level][static_cast<std::size_t>(role.j)] = true;
      if (++a_groups_touched[level] == c.r()) {
        if (!b_touched[level]) bad2 = role.i;
        completes_last = role.i == S.back();
      }
    }
    if (d == Direction::L && role.multi >= 0 && copies_left[static_cast<std::size_t>(role.multi)] == 1)
      bad3 = role.multi;
    result.bad2_event = bad2 > 0;
    result.bad3_event = bad3 >= 0;
    if (bad1 > 0) return finish(FollowOutcome::Bad1, bad1);
    if (bad2 > 0) return finish(FollowOutcome::Bad2, bad2);
    if (bad3 >= 0) return finish(FollowOutcome::Bad3, bad3);

    if (d == Direction::L) {
      if (completes_last) throw InvariantViolation("a-chains of the last level completed on a left step");
      F.erase(e);
      if (role.multi >= 0) --copies_left[static_cast<std::size_t>(role.multi)];
      continue;
    }
    F.erase(e);
    RunResult sub = facet_run(g, F, B, choice);
    F.insert(e);
    result.pivots += sub.pivots;
    const DistanceVector y = tree_distances(g, sub.final_policy);
    if (!is_improving(g, y, e)) return finish(FollowOutcome::NoRightChild, 0);
    B = std::move(sub.final_policy);
    B.switch_to(g, e);
    ++result.pivots;
    if (completes_last) return finish(FollowOutcome::Canonical, 0);
  }
}

FollowResult follow_canonical(const Construction& c, const std::vector<int>& S, Rng& rng) {
  return follow_canonical(c, S, FacetChoice{&rng, nullptr, {}});
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {};
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double CanonicalEstimate::stderr_() const {
  if (trials == 0) return 0.0;
  const double p = frequency();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

CanonicalEstimate estimate_canonical_probability(const Construction& c, const std::vector<int>& S,
                                                 std::uint64_t trials, std::uint64_t seed, unsigned threads,
                                                 bool keep_runs) {
  std::vector<FollowResult> runs(trials);
  parallel_for(trials, threads, [&](std::uint64_t k) {
    Rng rng(derive_seed(seed, k));
    runs[k] = follow_canonical(c, S, rng);
  });
  CanonicalEstimate est;
  est.trials = trials;
  for (const FollowResult& run : runs) {
    switch (run.outcome) {
      case FollowOutcome::Canonical: ++est.canonical; break;
      case FollowOutcome::Bad2: ++est.bad2_given_good1; break;
      case FollowOutcome::Bad3: ++est.bad3_given_good1; break;
      case FollowOutcome::NoRightChild: ++est.no_right_child; break;
      case FollowOutcome::Leaf: ++est.leaf; break;
      default: break;
    }
    if (run.outcome != FollowOutcome::Bad1) ++est.good1;
    if (run.bad2_event && run.bad3_event) ++est.bad2_and_bad3;
  }
  est.canonical_ci = wilson_interval(est.canonical, trials);
  if (keep_runs) est.runs = std::move(runs);
  return est;
}

}  // namespace facetlab
