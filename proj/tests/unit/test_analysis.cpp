#include <algorithm>
#include <optional>
#include <vector>

#include <gtest/gtest.h>

#include "facetlab/analysis.hpp"
#include "facetlab/construction.hpp"
#include "facetlab/permutation.hpp"
#include "facetlab/random_graphs.hpp"
#include "facetlab/rules.hpp"

using namespace facetlab;

namespace {

struct Classified {
  FollowOutcome outcome = FollowOutcome::NotApplicable;
  int index = 0;
  std::size_t step = 0;
};

// Post-hoc classification of a recorded path, straight from the
// definitions: the first step at which a bad event occurs, ranked
// Bad1 > Bad2 > Bad3, otherwise canonical when the last step is an R step
// completing the a-chains of the lowest level of S.
std::optional<Classified> classify_path(const Construction& c, const std::vector<int>& S_desc,
                                        const ComputationPath& P) {
  EdgeSet F(c.num_edges(), true);
  for (std::size_t k = 0; k < P.size(); ++k) {
    const EdgeId e = P[k].edge;
    const EdgeRole& role = c.role(e);
    const int kk = static_cast<int>(k);
    const auto in_S = std::find(S_desc.begin(), S_desc.end(), role.i);

    // Direction rule.
    bool right = false;
    if (in_S != S_desc.end() && role.kind == EdgeKind::B1) right = true;
    if (in_S != S_desc.end() && role.kind == EdgeKind::A1) {
      EdgeSet without = F;
      without.erase(e);
      right = !c.a1_sqsubseteq(role.i, without);
    }
    if (right != (P[k].dir == Direction::R)) return std::nullopt;

    std::optional<Classified> event;
    for (std::size_t q = 0; q < S_desc.size() && !event; ++q) {
      if (sigma_p_b1(P, c, S_desc[q]) != kk) continue;
      for (std::size_t qq = 0; qq < q; ++qq) {
        const auto earlier = sigma_p_b1(P, c, S_desc[qq]);
        if (!earlier || *earlier > kk) {
          event = Classified{FollowOutcome::Bad1, static_cast<int>(qq) + 1, k};
          break;
        }
      }
    }
    for (int i = 1; i <= c.n() && !event; ++i) {
      const auto b = sigma_p_b1(P, c, i);
      if (sigma_p_a1(P, c, i) == kk && (!b || *b > kk)) event = Classified{FollowOutcome::Bad2, i, k};
    }
    if (!event && P[k].dir == Direction::L && role.multi >= 0) {
      int left = 0;
      for (EdgeId x : c.multi(role.multi)) left += F.contains(x);
      if (left == 1) event = Classified{FollowOutcome::Bad3, role.multi, k};
    }
    if (event) return event;
    if (P[k].dir == Direction::L) F.erase(e);
  }
  if (!P.empty() && P.back().dir == Direction::R &&
      sigma_p_a1(P, c, S_desc.back()) == static_cast<int>(P.size()) - 1)
    return Classified{FollowOutcome::Canonical, 0, P.size() - 1};
  return Classified{FollowOutcome::NoRightChild, 0, P.size()};
}

PermutationFn with_front(const Construction& c, const std::vector<EdgeId>& front) {
  std::vector<EdgeId> order = front;
  for (std::size_t e = 0; e < c.num_edges(); ++e)
    if (std::find(front.begin(), front.end(), static_cast<EdgeId>(e)) == front.end())
      order.push_back(static_cast<EdgeId>(e));
  return PermutationFn::from_order(order);
}

}  // namespace

TEST(ComputationTree, SingleNodeWhenStartEqualsF) {
  const Digraph g = parallel_edge_graph();
  const Policy b = Policy::from_edges(g, {0});
  Rng rng(1);
  const RunResult run = random_facet(g, b.edge_set(g), b, rng, FacetOptions{true});
  ASSERT_TRUE(run.tree);
  EXPECT_EQ(run.tree->nodes.size(), 1u);
  EXPECT_EQ(run.tree->nodes[0].picked, kNoEdge);
  EXPECT_EQ(run.tree->switch_count(), 0u);
  EXPECT_EQ(validate_tree(g, *run.tree, run), std::nullopt);
}

TEST(ComputationTree, ParallelRunHasOneSwitch) {
  const Digraph g = parallel_edge_graph();
  const Policy b = Policy::from_edges(g, {0});
  Rng rng(2);
  const RunResult run = random_facet(g, EdgeSet(2, true), b, rng, FacetOptions{true});
  const TreeNode& root = run.tree->nodes[0];
  EXPECT_EQ(root.picked, 1);
  EXPECT_GE(root.left, 0);
  EXPECT_GE(root.right, 0);
  EXPECT_EQ(run.tree->switch_count(), 1u);
  EXPECT_EQ(validate_tree(g, *run.tree, run), std::nullopt);
}

TEST(ComputationTree, SwitchCountEqualsPivotsOnConstruction) {
  const Construction c = Construction::build(2, 2, 2, 2);
  const EdgeSet E(c.num_edges(), true);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const RunResult run = random_facet(c.graph(), E, c.initial_tree(), rng, FacetOptions{true});
    EXPECT_EQ(run.tree->switch_count(), run.pivots);
    EXPECT_EQ(validate_tree(c.graph(), *run.tree, run), std::nullopt);
  }
}

TEST(ComputationTree, TamperedTreeIsRejected) {
  const Construction c = Construction::build(2, 2, 2, 2);
  Rng rng(3);
  const RunResult run =
      random_facet(c.graph(), EdgeSet(c.num_edges(), true), c.initial_tree(), rng, FacetOptions{true});
  ASSERT_GT(run.pivots, 0u);
  ComputationTree broken = *run.tree;
  for (TreeNode& node : broken.nodes) {
    if (node.right >= 0) {
      node.right = -1;
      break;
    }
  }
  EXPECT_NE(validate_tree(c.graph(), broken, run), std::nullopt);
}

TEST(SigmaP, Examples) {
  const Construction c = Construction::build(3, 2, 2, 1);
  const ComputationPath P{{c.b1_edge(3, 1), Direction::R}, {c.a1_edge(1, 1, 1), Direction::L}};
  EXPECT_EQ(sigma_p_b1(P, c, 3), 0);
  EXPECT_EQ(sigma_p(P, c.a1_edge(1, 1, 1)), 1);
  EXPECT_EQ(sigma_p(P, c.a1_edge(2, 1, 1)), std::nullopt);
  EXPECT_EQ(sigma_p_a1(P, c, 1), std::nullopt);  // chain j=2 never picked
}

TEST(SigmaP, MaxOfMinsMatchesBruteForce) {
  const Construction c = Construction::build(2, 3, 2, 1);
  Rng rng(4);
  for (int q = 0; q < 200; ++q) {
    std::vector<EdgeId> edges;
    for (std::size_t e = 0; e < c.num_edges(); ++e)
      if (rng.uniform_index(3) == 0) edges.push_back(static_cast<EdgeId>(e));
    rng.shuffle(std::span<EdgeId>(edges));
    ComputationPath P;
    for (EdgeId e : edges) P.push_back({e, Direction::L});
    for (int i = 1; i <= 2; ++i) {
      std::optional<int> expected = -1;
      for (int j = 1; j <= 3 && expected; ++j) {
        std::optional<int> first;
        for (int k = 1; k <= 2; ++k) {
          for (std::size_t l = 0; l < P.size(); ++l)
            if (P[l].edge == c.a1_edge(i, j, k) && (!first || static_cast<int>(l) < *first))
              first = static_cast<int>(l);
        }
        expected = first ? std::optional<int>(std::max(*expected, *first)) : std::nullopt;
      }
      EXPECT_EQ(sigma_p_a1(P, c, i), expected);
    }
  }
}

TEST(Follower, EmptySIsNotApplicable) {
  const Construction c = Construction::build(2, 2, 2, 2);
  Rng rng(5);
  EXPECT_EQ(follow_canonical(c, {}, rng).outcome, FollowOutcome::NotApplicable);
  EXPECT_THROW(follow_canonical(c, {1, 1}, rng), PreconditionViolation);
  EXPECT_THROW(follow_canonical(c, {3}, rng), PreconditionViolation);
}

TEST(Follower, AChainsBeforeBChainForceBad2) {
  const Construction c = Construction::build(2, 2, 2, 2);
  std::vector<EdgeId> front;
  for (int j = 1; j <= 2; ++j)
    for (EdgeId e : c.a1(2, j)) front.push_back(e);
  const PermutationFn sigma = with_front(c, front);
  const FollowResult r = follow_canonical(c, {1}, FacetChoice{nullptr, &sigma, {}});
  EXPECT_EQ(r.outcome, FollowOutcome::Bad2);
  EXPECT_EQ(r.index, 2);
  EXPECT_TRUE(r.bad2_event);
  EXPECT_FALSE(r.bad3_event);
}

TEST(Follower, ExhaustedMultiEdgeForcesBad3) {
  const Construction c = Construction::build(2, 2, 2, 3);
  const int m = c.u1_id(1);
  const PermutationFn sigma = with_front(c, c.multi(m));
  const FollowResult r = follow_canonical(c, {1}, FacetChoice{nullptr, &sigma, {}});
  EXPECT_EQ(r.outcome, FollowOutcome::Bad3);
  EXPECT_EQ(r.index, m);
  EXPECT_EQ(r.path.size(), 3u);
  EXPECT_FALSE(r.bad2_event);
}

TEST(Follower, MatchesPostHocClassification) {
  const Construction c = Construction::build(3, 2, 3, 2);
  const std::vector<std::vector<int>> subsets{{1}, {2}, {3}, {3, 1}, {2, 1}, {3, 2, 1}};
  for (const auto& S : subsets) {
    std::vector<int> desc = S;
    std::sort(desc.begin(), desc.end(), std::greater<>());
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      Rng rng(derive_seed(seed, 77));
      const FollowResult r = follow_canonical(c, S, rng);
      const auto expected = classify_path(c, desc, r.path);
      ASSERT_TRUE(expected.has_value()) << "direction rule broken";
      if (r.outcome == FollowOutcome::Leaf || r.outcome == FollowOutcome::NoRightChild) {
        EXPECT_EQ(expected->outcome, FollowOutcome::NoRightChild);
        continue;
      }
      EXPECT_EQ(r.outcome, expected->outcome) << outcome_name(r.outcome);
      EXPECT_EQ(r.index, expected->index);
      EXPECT_EQ(expected->step + 1, r.path.size());
    }
  }
}

TEST(Follower, SingleLevelCanonicalAtLeastHalf) {
  const Construction c = Construction::build(4, 4, 14, 4);
  const CanonicalEstimate est = estimate_canonical_probability(c, {1}, 100, 9);
  EXPECT_GE(est.frequency(), 0.5 - 3 * est.stderr_());
  EXPECT_EQ(est.good1, est.trials);
  EXPECT_EQ(est.bad2_and_bad3, 0u);
  EXPECT_LE(est.canonical_ci.lo, est.frequency());
  EXPECT_GE(est.canonical_ci.hi, est.frequency());
}

TEST(Follower, EstimateIsThreadIndependent) {
  const Construction c = Construction::build(3, 2, 3, 2);
  const CanonicalEstimate a = estimate_canonical_probability(c, {2, 1}, 60, 3, 1);
  const CanonicalEstimate b = estimate_canonical_probability(c, {2, 1}, 60, 3, 4);
  EXPECT_EQ(a.canonical, b.canonical);
  EXPECT_EQ(a.good1, b.good1);
  EXPECT_EQ(a.bad2_given_good1, b.bad2_given_good1);
  EXPECT_EQ(a.bad3_given_good1, b.bad3_given_good1);
}

TEST(Wilson, KnownValues) {
  const Interval half = wilson_interval(5, 10);
  EXPECT_NEAR(half.lo, 0.2366, 1e-4);
  EXPECT_NEAR(half.hi, 0.7634, 1e-4);
  EXPECT_DOUBLE_EQ(wilson_interval(0, 10).lo, 0.0);
  EXPECT_DOUBLE_EQ(wilson_interval(10, 10).hi, 1.0);
  const Interval none = wilson_interval(0, 0);
  EXPECT_DOUBLE_EQ(none.lo, 0.0);
  EXPECT_DOUBLE_EQ(none.hi, 1.0);
}
