#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "facetlab/lp.hpp"
#include "facetlab/random_graphs.hpp"
#include "facetlab/rational.hpp"
#include "facetlab/rules.hpp"
#include "facetlab/shortest_paths.hpp"

using namespace facetlab;
using namespace facetlab::lp;

namespace {

StdFormLP make_lp(std::size_t rows, std::size_t cols, const std::vector<long>& a, const std::vector<long>& b,
                  const std::vector<long>& c) {
  StdFormLP lp;
  lp.A = Matrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < cols; ++j) lp.A.at(r, j) = a[r * cols + j];
  for (long v : b) lp.b.emplace_back(v);
  for (long v : c) lp.c.emplace_back(v);
  return lp;
}

// v -> u -> t, costs 2 and 3.
Digraph chain() { return Digraph({"v", "u", "t"}, 2, {Edge{0, 1, 2, "vu"}, Edge{1, 2, 3, "ut"}}); }

}  // namespace

TEST(BasicSolution, IdentityRow) {
  const StdFormLP lp = make_lp(1, 1, {1}, {1}, {0});
  const BasicSolution s = basic_solution(lp, {0});
  EXPECT_EQ(s.x, std::vector<mpq_class>{1});
  EXPECT_TRUE(s.feasible);
}

TEST(BasicSolution, InfeasibleBasisIsFlagged) {
  const StdFormLP lp = make_lp(1, 2, {1, -1}, {-1}, {0, 0});
  EXPECT_FALSE(basic_solution(lp, {0}).feasible);
  EXPECT_TRUE(basic_solution(lp, {1}).feasible);
}

TEST(BasicSolution, SingularBasisThrows) {
  const StdFormLP lp = make_lp(2, 2, {1, 2, 2, 4}, {1, 1}, {0, 0});
  EXPECT_THROW(basic_solution(lp, {0, 1}), SingularBasis);
}

TEST(BasicSolution, TreeFlowsAreDescendantCounts) {
  const Digraph g = chain();
  const ShortestPathLP sp = sp_to_lp(g);
  const Basis basis = basis_from_policy(sp, Policy::from_edges(g, {0, 1}));
  const BasicSolution s = basic_solution(sp.lp, basis);
  EXPECT_EQ(s.x[0], 1);  // only v routes through v -> u
  EXPECT_EQ(s.x[1], 2);  // v and u route through u -> t
  EXPECT_TRUE(s.feasible);
}

TEST(SpToLp, IncidenceSigns) {
  const Digraph g = chain();
  const ShortestPathLP sp = sp_to_lp(g);
  EXPECT_EQ(sp.lp.num_cols(), g.num_edges());
  EXPECT_EQ(sp.lp.num_rows(), g.num_vertices() - 1);
  const auto rv = static_cast<std::size_t>(sp.row_of_vertex[0]);
  const auto ru = static_cast<std::size_t>(sp.row_of_vertex[1]);
  EXPECT_EQ(sp.row_of_vertex[2], -1);
  EXPECT_EQ(sp.lp.A.at(rv, 0), 1);
  EXPECT_EQ(sp.lp.A.at(ru, 0), -1);
  EXPECT_EQ(sp.lp.A.at(ru, 1), 1);
  EXPECT_EQ(sp.lp.A.at(rv, 1), 0);
  for (const auto& b : sp.lp.b) EXPECT_EQ(b, 1);
}

TEST(SpToLp, CostsAreScaledDown) {
  const Digraph g({"v", "t"}, 1, {Edge{0, 1, 6, "e"}}, 4);
  EXPECT_EQ(sp_to_lp(g).lp.c[0], mpq_class(3, 2));
}

TEST(ReducedCosts, BasicColumnsAreZeroAndDualsAreDistances) {
  Rng rng(21);
  for (int q = 0; q < 50; ++q) {
    const Digraph g = random_dag(6, 7, rng);
    const Policy b = random_policy(g, rng);
    const ShortestPathLP sp = sp_to_lp(g);
    const Basis basis = basis_from_policy(sp, b);
    const ReducedCosts rc = reduced_costs(sp.lp, basis);
    for (int j : basis) EXPECT_EQ(rc.cbar[static_cast<std::size_t>(j)], 0);
    const auto y = tree_distances(g, b);
    for (std::size_t r = 0; r < sp.vertex_of_row.size(); ++r)
      EXPECT_EQ(rc.y[r], mpq_class(y[static_cast<std::size_t>(sp.vertex_of_row[r])]));
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(static_cast<EdgeId>(e));
      EXPECT_EQ(rc.cbar[e], mpq_class(ed.cost + y[static_cast<std::size_t>(ed.head)] - y[static_cast<std::size_t>(ed.tail)]));
    }
    EXPECT_TRUE(basic_solution(sp.lp, basis).feasible);
  }
}

TEST(PivotLp, ParallelEdgesEnterCheapLeaveExpensive) {
  const Digraph g = parallel_edge_graph();
  const ShortestPathLP sp = sp_to_lp(g);
  const Basis start = basis_from_policy(sp, Policy::from_edges(g, {0}));
  const PivotStep step = pivot_lp(sp.lp, start, 1);
  EXPECT_EQ(step.leaving, 0);
  EXPECT_EQ(policy_from_basis(g, step.basis), apply_switch(g, Policy::from_edges(g, {0}), 1).policy);
  EXPECT_LT(objective_value(sp.lp, basic_solution(sp.lp, step.basis).x),
            objective_value(sp.lp, basic_solution(sp.lp, start).x));
  EXPECT_THROW(pivot_lp(sp.lp, step.basis, 0), PreconditionViolation);
}

TEST(PivotLp, UnboundedAndDegenerateAreReported) {
  const StdFormLP unbounded = make_lp(1, 2, {1, -1}, {1}, {0, -1});
  EXPECT_THROW(pivot_lp(unbounded, {0}, 1), Unbounded);
  const StdFormLP tie = make_lp(2, 3, {1, 0, 1, 0, 1, 1}, {1, 1}, {0, 0, -1});
  EXPECT_THROW(pivot_lp(tie, {0, 1}, 2), Degenerate);
}

TEST(RandomFacetLp, FEqualsBasisIsImmediate) {
  const Digraph g = chain();
  const ShortestPathLP sp = sp_to_lp(g);
  const Basis basis = basis_from_policy(sp, Policy::from_edges(g, {0, 1}));
  Rng rng(1);
  const LpRun run = random_facet_lp(sp.lp, basis, basis, rng);
  EXPECT_EQ(run.pivots, 0u);
  EXPECT_EQ(run.basis, basis);
}

TEST(RandomFacetLp, MatchesGraphEngineStepForStep) {
  Rng setup(22);
  for (int q = 0; q < 20; ++q) {
    const Digraph g = random_dag(6, 7, setup);
    const Policy b0 = random_policy(g, setup);
    const std::uint64_t seed = setup.next();
    Rng a(seed), c(seed);
    const RunResult graph_run = random_facet(g, EdgeSet(g.num_edges(), true), b0, a);
    const ShortestPathLP sp = sp_to_lp(g);
    std::vector<int> all(g.num_edges());
    std::iota(all.begin(), all.end(), 0);
    const LpRun lp_run = random_facet_lp(sp.lp, all, basis_from_policy(sp, b0), c);
    ASSERT_EQ(lp_run.pivots, graph_run.pivots);
    for (std::size_t k = 0; k < graph_run.log.size(); ++k) {
      EXPECT_EQ(lp_run.pivot_log[k].first, graph_run.log[k].entering);
      EXPECT_EQ(lp_run.pivot_log[k].second, graph_run.log[k].leaving);
    }
    EXPECT_EQ(policy_from_basis(g, lp_run.basis), graph_run.final_policy);
    for (const mpq_class& v : reduced_costs(sp.lp, lp_run.basis).cbar) EXPECT_GE(v, 0);
  }
}

TEST(RandomFacetLp, OneRowLpMatchesVertexEnumeration) {
  Rng rng(23);
  for (int q = 0; q < 50; ++q) {
    std::vector<long> a, c;
    for (int j = 0; j < 3; ++j) {
      a.push_back(1 + static_cast<long>(rng.uniform_index(9)));
      c.push_back(static_cast<long>(rng.uniform_index(21)) - 10);
    }
    const long b = 1 + static_cast<long>(rng.uniform_index(9));
    const StdFormLP lp = make_lp(1, 3, a, {b}, c);
    // Every single column is a feasible basis; the optimum is the best vertex.
    mpq_class best;
    for (int j = 0; j < 3; ++j) {
      const mpq_class v = make_ratio(c[static_cast<std::size_t>(j)] * b, a[static_cast<std::size_t>(j)]);
      if (j == 0 || v < best) best = v;
    }
    // Skip ties: the kernel reports rather than resolves degeneracy.
    int ties = 0;
    for (int j = 0; j < 3; ++j)
      ties += make_ratio(c[static_cast<std::size_t>(j)] * b, a[static_cast<std::size_t>(j)]) == best;
    if (ties > 1) continue;
    const int start = static_cast<int>(rng.uniform_index(3));
    const LpRun run = random_facet_lp(lp, {0, 1, 2}, {start}, rng);
    EXPECT_EQ(objective_value(lp, basic_solution(lp, run.basis).x), best);
  }
}
