#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "facetlab/construction.hpp"
#include "facetlab/counters.hpp"
#include "facetlab/oracles.hpp"
#include "facetlab/permutation.hpp"
#include "facetlab/random_graphs.hpp"
#include "facetlab/rational.hpp"
#include "facetlab/rules.hpp"
#include "facetlab/shortest_paths.hpp"

using namespace facetlab;

namespace {

// Four vertices, six edges; the start sends every vertex straight to t.
Digraph six_edge_dag() {
  return Digraph({"v0", "v1", "v2", "t"}, 3,
                 {Edge{0, 1, 1, "v0v1"}, Edge{0, 2, 4, "v0v2"}, Edge{0, 3, 10, "v0t"}, Edge{1, 2, 1, "v1v2"},
                  Edge{1, 3, 6, "v1t"}, Edge{2, 3, 1, "v2t"}});
}

Policy six_edge_start(const Digraph& g) { return Policy::from_edges(g, {2, 4, 5}); }

EdgeSet all_of(const Digraph& g) { return EdgeSet(g.num_edges(), true); }

// Replays the pivot log from B0: every pivot must improve and lower the objective.
void expect_valid_log(const Digraph& g, const Policy& B0, const RunResult& run) {
  Policy b = B0;
  for (const PivotRecord& p : run.log) {
    ASSERT_TRUE(is_improving(g, tree_distances(g, b), p.entering));
    const auto before = objective(tree_distances(g, b));
    const SwitchOutcome out = apply_switch(g, b, p.entering);
    EXPECT_EQ(out.leaving, p.leaving);
    b = out.policy;
    EXPECT_LT(objective(tree_distances(g, b)), before);
  }
  EXPECT_EQ(b, run.final_policy);
  EXPECT_EQ(run.pivots, run.log.size());
}

PermutationFn groups_first(const Construction& c, bool a_first_at_level_1) {
  std::vector<EdgeId> order;
  std::vector<bool> used(c.num_edges(), false);
  auto push = [&](const std::vector<EdgeId>& group) {
    for (EdgeId e : group)
      if (!used[static_cast<std::size_t>(e)]) {
        used[static_cast<std::size_t>(e)] = true;
        order.push_back(e);
      }
  };
  if (a_first_at_level_1)
    for (int j = 1; j <= c.r(); ++j) push(c.a1(1, j));
  for (int i = 1; i <= c.n(); ++i) push(c.b1(i));
  for (int i = 1; i <= c.n(); ++i)
    for (int j = 1; j <= c.r(); ++j) push(c.a1(i, j));
  for (std::size_t m = 0; m < c.num_multi(); ++m) push(c.multi(static_cast<int>(m)));
  return PermutationFn::from_order(order);
}

}  // namespace

TEST(RandomFacet, StartEqualToFIsImmediate) {
  const Digraph g = six_edge_dag();
  const Policy b = six_edge_start(g);
  Rng rng(1);
  const RunResult run = random_facet(g, b.edge_set(g), b, rng);
  EXPECT_EQ(run.pivots, 0u);
  EXPECT_EQ(run.final_policy, b);
  EXPECT_EQ(random_facet_1p(g, b.edge_set(g), b, PermutationFn::identity(g.num_edges())).pivots, 0u);
}

TEST(RandomFacet, StartOutsideFIsRejected) {
  const Digraph g = six_edge_dag();
  Rng rng(1);
  EXPECT_THROW(random_facet(g, EdgeSet::of(6, {0, 1}), six_edge_start(g), rng), InvalidStart);
}

TEST(AllRules, ParallelGraphTakesOnePivot) {
  const Digraph g = parallel_edge_graph();
  const Policy b = Policy::from_edges(g, {0});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng r1(seed), r2(seed), r3(seed);
    EXPECT_EQ(random_facet(g, all_of(g), b, r1).pivots, 1u);
    EXPECT_EQ(random_facet_nonrec(g, b, r2).pivots, 1u);
    EXPECT_EQ(random_bland(g, b, r3).pivots, 1u);
  }
  EXPECT_EQ(random_facet_1p(g, all_of(g), b, PermutationFn::identity(2)).pivots, 1u);
  const RunResult d = dantzig(g, b);
  EXPECT_EQ(d.pivots, 1u);
  EXPECT_EQ(d.log.at(0).entering, 1);
  EXPECT_EQ(d.final_policy.at(0), 1);
}

TEST(AllRules, OptimalStartTakesNoPivots) {
  const Digraph g = parallel_edge_graph();
  const Policy b = Policy::from_edges(g, {1});
  Rng rng(3);
  EXPECT_EQ(dantzig(g, b).pivots, 0u);
  EXPECT_EQ(random_facet_nonrec(g, b, rng).pivots, 0u);
}

TEST(AllRules, ReachOptimumWithImprovingPivots) {
  Rng setup(41);
  for (int q = 0; q < 60; ++q) {
    const Digraph g = random_dag(7, 9, setup);
    const Policy b = random_policy(g, setup);
    const auto opt = optimal_distances(g);
    Rng r1(q), r2(q), r3(q);
    const PermutationFn sigma = PermutationFn::uniform(g.num_edges(), setup);
    const std::vector<RunResult> runs{random_facet(g, all_of(g), b, r1),
                                      random_facet_nonrec(g, b, r2),
                                      random_facet_1p(g, all_of(g), b, sigma),
                                      bland_rec(g, 1, b, sigma),
                                      random_bland(g, b, r3),
                                      dantzig(g, b)};
    for (const RunResult& run : runs) {
      EXPECT_EQ(tree_distances(g, run.final_policy), opt) << rule_name(run.rule);
      EXPECT_TRUE(improving_switches(g, run.final_policy).empty());
      expect_valid_log(g, b, run);
    }
  }
}

TEST(RandomFacet, ExpectedPivotsOnSixEdgeDag) {
  const Digraph g = six_edge_dag();
  const Policy b = six_edge_start(g);
  const mpq_class engine = enumerate_engine_pivots(g, all_of(g), b).expected_pivots;
  EXPECT_EQ(engine, exact_pivots_recursive(g, all_of(g), b).expected_pivots);
  EXPECT_EQ(engine, exact_pivots_nonrecursive(g, b).expected_pivots);
  EXPECT_GT(engine, 0);

  const double exact = to_double(engine);
  for (int variant = 0; variant < 2; ++variant) {
    const int trials = 4000;
    double sum = 0, sum2 = 0;
    for (int k = 0; k < trials; ++k) {
      Rng rng(derive_seed(variant, static_cast<std::uint64_t>(k)));
      const auto p = static_cast<double>(
          variant == 0 ? random_facet(g, all_of(g), b, rng).pivots : random_facet_nonrec(g, b, rng).pivots);
      sum += p;
      sum2 += p * p;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sum2 / trials - mean * mean) / (trials - 1));
    EXPECT_LE(std::abs(mean - exact), 4 * se) << variant;
  }
}

TEST(RandomFacet1P, DeterministicGivenSigma) {
  const Construction c = Construction::build(2, 2, 2, 2);
  Rng rng(5);
  const PermutationFn sigma = PermutationFn::uniform(c.num_edges(), rng);
  const EdgeSet E(c.num_edges(), true);
  const RunResult a = random_facet_1p(c.graph(), E, c.initial_tree(), sigma);
  const RunResult b = random_facet_1p(c.graph(), E, c.initial_tree(), sigma);
  EXPECT_EQ(a.log, b.log);
}

TEST(Bland, EmptySuffixLeavesStartUnchanged) {
  const Digraph g = six_edge_dag();
  const Policy b = six_edge_start(g);
  const PermutationFn sigma = PermutationFn::identity(g.num_edges());
  const int past_end = static_cast<int>(g.num_edges()) + 1;
  EXPECT_EQ(bland_rec(g, past_end, b, sigma).final_policy, b);
  EXPECT_EQ(bland_nonrec(g, past_end, b, sigma).pivots, 0u);
}

TEST(Bland, RecursiveAndScanningLogsAgree) {
  Rng rng(43);
  for (int q = 0; q < 100; ++q) {
    const Digraph g = random_dag(1 + static_cast<int>(rng.uniform_index(10)), 10, rng);
    const Policy b = random_policy(g, rng);
    const PermutationFn sigma = PermutationFn::uniform(g.num_edges(), rng);
    const int k = 1 + static_cast<int>(rng.uniform_index(g.num_edges()));
    EXPECT_EQ(bland_rec(g, k, b, sigma).log, bland_nonrec(g, k, b, sigma).log) << q;
  }
}

TEST(Bland, SmallConstructionEndsOptimal) {
  const Construction c = Construction::build(2, 1, 1, 1);
  const PermutationFn sigma = PermutationFn::identity(c.num_edges());
  const RunResult rec = bland_rec(c.graph(), 1, c.initial_tree(), sigma);
  const RunResult scan = bland_nonrec(c.graph(), 1, c.initial_tree(), sigma);
  EXPECT_EQ(tree_distances(c.graph(), rec.final_policy), optimal_distances(c.graph()));
  EXPECT_EQ(rec.log, scan.log);
}

TEST(Dantzig, PicksMostNegativeReducedCost) {
  // v -> t costs 9, 5, 1: the cost-1 edge is entered first.
  const Digraph g({"v", "t"}, 1, {Edge{0, 1, 9, "a"}, Edge{0, 1, 5, "b"}, Edge{0, 1, 1, "c"}});
  const RunResult run = dantzig(g, Policy::from_edges(g, {0}));
  EXPECT_EQ(run.pivots, 1u);
  EXPECT_EQ(run.log.at(0).entering, 2);
}

TEST(WellBehaved, GroupOrderExamples) {
  const Construction c = Construction::build(2, 2, 2, 2);
  EXPECT_TRUE(is_well_behaved(groups_first(c, false), c));
  EXPECT_FALSE(is_well_behaved(groups_first(c, true), c));
}

TEST(WellBehaved, SampledPermutationsAreWellBehaved) {
  Rng rng(44);
  for (int n = 1; n <= 4; ++n) {
    const Construction c = Construction::build(n, 2, 2, 2);
    for (int q = 0; q < 50; ++q) EXPECT_TRUE(is_well_behaved(sample_well_behaved(c, rng), c));
  }
}

TEST(InducedPermutation, UniformSigmaGivesUniformBitOrder) {
  for (int n = 2; n <= 4; ++n) {
    const Construction c = Construction::build(n, 1, 1, 1);
    Rng rng(45 + static_cast<std::uint64_t>(n));
    std::map<std::vector<int>, int> counts;
    int cells = 1;
    for (int k = 2; k <= n; ++k) cells *= k;
    const int trials = 400 * cells;
    for (int q = 0; q < trials; ++q)
      ++counts[induced_permutation(PermutationFn::uniform(c.num_edges(), rng), c).values()];
    ASSERT_EQ(static_cast<int>(counts.size()), cells);
    const double expected = static_cast<double>(trials) / cells;
    double chi2 = 0;
    for (const auto& [perm, k] : counts) chi2 += (k - expected) * (k - expected) / expected;
    // 0.999 quantile of chi-square with cells-1 degrees of freedom,
    // Wilson-Hilferty approximation.
    const double df = cells - 1;
    const double z = 3.09;
    const double bound = df * std::pow(1 - 2 / (9 * df) + z * std::sqrt(2 / (9 * df)), 3);
    EXPECT_LT(chi2, bound) << n;
  }
}

TEST(SuffixSet, FromRankOneIsEverything) {
  Rng rng(46);
  const PermutationFn sigma = PermutationFn::uniform(20, rng);
  EXPECT_EQ(suffix_set(sigma, 1), EdgeSet(20, true));
  EXPECT_EQ(suffix_set(sigma, 21), EdgeSet(20));
  EXPECT_EQ(suffix_set(sigma, 20).ids(), std::vector<EdgeId>{sigma.edge_at(20)});
}

TEST(FixedEdges, OptimalTreeIsFixedEverywhere) {
  Rng rng(47);
  for (int q = 0; q < 30; ++q) {
    const Digraph g = random_dag(6, 8, rng);
    const Policy b = random_policy(g, rng);
    const RunResult run = dantzig(g, b);
    for (EdgeId e : run.final_policy.edge_set(g).ids()) EXPECT_TRUE(is_fixed_edge(g, e, run.final_policy, all_of(g)));
  }
}

TEST(TechnicalStar, OnePermutationPivotsDominateCounter) {
  Rng rng(48);
  for (int n = 1; n <= 3; ++n) {
    const Construction c = Construction::build(n, 2, 2, 2);
    const EdgeSet E(c.num_edges(), true);
    for (int q = 0; q < 20; ++q) {
      const PermutationFn sigma = sample_well_behaved(c, rng);
      const auto bound = rand_count_1p(full_index_set(n), induced_permutation(sigma, c));
      EXPECT_GE(random_facet_1p(c.graph(), E, c.initial_tree(), sigma).pivots, bound);
      EXPECT_GE(bland_nonrec(c.graph(), 1, c.initial_tree(), sigma).pivots, bound);
    }
  }
}
