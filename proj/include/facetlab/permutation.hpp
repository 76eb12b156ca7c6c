#ifndef FACETLAB_PERMUTATION_HPP
#define FACETLAB_PERMUTATION_HPP

#include <vector>

#include "facetlab/construction.hpp"
#include "facetlab/counters.hpp"
#include "facetlab/edge_set.hpp"
#include "facetlab/rng.hpp"

namespace facetlab {

// Bijection from edge ids to ranks 1..m.
class PermutationFn {
 public:
  // order[r-1] is the edge of rank r.
  static PermutationFn from_order(std::vector<EdgeId> order);
  static PermutationFn identity(std::size_t m);
  static PermutationFn uniform(std::size_t m, Rng& rng);

  int operator()(EdgeId e) const { return rank_[static_cast<std::size_t>(e)]; }
  EdgeId edge_at(int rank) const { return order_[static_cast<std::size_t>(rank - 1)]; }
  std::size_t size() const { return order_.size(); }
  const std::vector<EdgeId>& order() const { return order_; }

 private:
  std::vector<EdgeId> order_;
  std::vector<int> rank_;
};

int sigma_b1(const PermutationFn& sigma, const Construction& c, int i);
int sigma_a1_group(const PermutationFn& sigma, const Construction& c, int i, int j);
int sigma_a1(const PermutationFn& sigma, const Construction& c, int i);
int sigma_multi(const PermutationFn& sigma, const Construction& c, int m);

bool is_well_behaved(const PermutationFn& sigma, const Construction& c);
BitPermutation induced_permutation(const PermutationFn& sigma, const Construction& c);

// Edges with rank at least ell.
EdgeSet suffix_set(const PermutationFn& sigma, int ell);

// Random well-behaved permutation. Uniform order of all edges except one
// designated last copy per multi-edge; the designated copies are then mixed
// uniformly into the part after the latest a-chain minimum, and samples
// violating the b-before-a condition are redrawn. The law is invariant
// under relabelling levels, so the induced bit order is uniform.
PermutationFn sample_well_behaved(const Construction& c, Rng& rng);

}  // namespace facetlab

#endif
