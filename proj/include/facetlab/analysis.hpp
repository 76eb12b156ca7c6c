#ifndef FACETLAB_ANALYSIS_HPP
#define FACETLAB_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "facetlab/construction.hpp"
#include "facetlab/rules.hpp"

namespace facetlab {

enum class Direction { L, R };

struct PathStep {
  EdgeId edge = kNoEdge;
  Direction dir = Direction::L;
};

// Root-to-node path through a computation tree. Edges are distinct; the
// edge sets along it are F_0 = root set and F_{l+1} = F_l minus e_l after
// an L step, F_l after an R step.
using ComputationPath = std::vector<PathStep>;

// Index of e on P, nullopt for infinity.
std::optional<int> sigma_p(const ComputationPath& P, EdgeId e);
// First index of any edge of the group.
std::optional<int> sigma_p_min(const ComputationPath& P, const std::vector<EdgeId>& group);
std::optional<int> sigma_p_b1(const ComputationPath& P, const Construction& c, int i);
std::optional<int> sigma_p_a1_group(const ComputationPath& P, const Construction& c, int i, int j);
// Max over the a-chains of level i of their first index.
std::optional<int> sigma_p_a1(const ComputationPath& P, const Construction& c, int i);

// Replays the recorded tree against the graph and checks the child rules,
// the F/B propagation, the returned tree, and |switch(T)| == pivots.
// Returns a description of the first violation.
std::optional<std::string> validate_tree(const Digraph& g, const ComputationTree& tree,
                                         const RunResult& run);

enum class FollowOutcome { Canonical, Bad1, Bad2, Bad3, NoRightChild, Leaf, NotApplicable };

std::string outcome_name(FollowOutcome o);

struct FollowResult {
  FollowOutcome outcome = FollowOutcome::NotApplicable;
  // Bad1: q (1-based position in S); Bad2: the level i; Bad3: multi-edge id.
  int index = 0;
  // Bad2 and Bad3 tested separately at the final step.
  bool bad2_event = false;
  bool bad3_event = false;
  ComputationPath path;
  // Pivots performed by the steered execution, subcalls included.
  std::uint64_t pivots = 0;
};

// Walks Random-Facet(E, B_0) along the path P_S(T) for the bit set S,
// expanding full left subtrees where the path turns right. `choice` drives
// every pick, both on the path and in the subcalls. S is sorted descending
// internally; entries must be distinct levels in 1..n.
FollowResult follow_canonical(const Construction& c, const std::vector<int>& S, FacetChoice choice);
FollowResult follow_canonical(const Construction& c, const std::vector<int>& S, Rng& rng);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for k successes out of n trials.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.96);

struct CanonicalEstimate {
  std::uint64_t trials = 0;
  std::uint64_t canonical = 0;
  std::uint64_t good1 = 0;
  std::uint64_t bad2_given_good1 = 0;
  std::uint64_t bad3_given_good1 = 0;
  std::uint64_t no_right_child = 0;
  std::uint64_t leaf = 0;
  // Runs reporting Bad2 and Bad3 together; disjointness makes this 0.
  std::uint64_t bad2_and_bad3 = 0;
  Interval canonical_ci;
  std::vector<FollowResult> runs;  // kept when requested

  double frequency() const { return trials ? static_cast<double>(canonical) / trials : 0.0; }
  double stderr_() const;
};

// Trial k uses Rng(derive_seed(seed, k)).
CanonicalEstimate estimate_canonical_probability(const Construction& c, const std::vector<int>& S,
                                                 std::uint64_t trials, std::uint64_t seed,
                                                 unsigned threads = 1, bool keep_runs = false);

}  // namespace facetlab

#endif
