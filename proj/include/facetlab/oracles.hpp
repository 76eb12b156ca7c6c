#ifndef FACETLAB_ORACLES_HPP
#define FACETLAB_ORACLES_HPP

#include <cstddef>

#include <gmpxx.h>

#include "facetlab/digraph.hpp"
#include "facetlab/edge_set.hpp"

namespace facetlab {

// Exact expected pivot counts by exhaustive enumeration of every random
// choice. These do not call the rule implementations. Graphs are limited
// to 64 edges (edge sets are bit masks).

struct ExactExpectation {
  mpq_class expected_pivots;
  std::size_t states = 0;  // memoized states visited
};

// Recursive Random-Facet(F, B0) with the uniform pick from F minus B.
ExactExpectation exact_pivots_recursive(const Digraph& g, const EdgeSet& F, const Policy& B0);
// Non-recursive Random-Facet from B0: a uniform order of the non-tree edges,
// first improving edge pivots, and the prefix before it together with the
// leaving edge is reshuffled.
ExactExpectation exact_pivots_nonrecursive(const Digraph& g, const Policy& B0);

// Expected pivots of the Random-Facet engine itself, obtained by replaying
// it over every sequence of pick indices. Exponential; tiny inputs only.
ExactExpectation enumerate_engine_pivots(const Digraph& g, const EdgeSet& F, const Policy& B0);

}  // namespace facetlab

#endif
