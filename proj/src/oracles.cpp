#include "facetlab/oracles.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "facetlab/rules.hpp"
#include "facetlab/shortest_paths.hpp"

namespace facetlab {

namespace {

using Mask = std::uint64_t;

Mask bit(EdgeId e) { return Mask{1} << static_cast<unsigned>(e); }

void require_small(const Digraph& g) {
  if (g.num_edges() > 64) throw PreconditionViolation("exhaustive oracles support at most 64 edges");
}

Mask tree_mask(const std::vector<EdgeId>& chosen) {
  Mask m = 0;
  for (EdgeId e : chosen) {
    if (e != kNoEdge) m |= bit(e);
  }
  return m;
}

// Tree as its chosen-edge vector; switching e replaces the entry at its tail.
std::vector<EdgeId> switched(const Digraph& g, std::vector<EdgeId> chosen, EdgeId e, EdgeId* leaving) {
  auto& slot = chosen[static_cast<std::size_t>(g.edge(e).tail)];
  *leaving = slot;
  slot = e;
  return chosen;
}

class RecursiveOracle {
 public:
  struct Entry {
    std::map<std::vector<EdgeId>, mpq_class> out;  // returned tree -> probability
    mpq_class pivots;
  };

  explicit RecursiveOracle(const Digraph& g) : g_(g) {}

  const Entry& solve(Mask F, const std::vector<EdgeId>& B) {
    auto key = std::make_pair(F, B);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Entry entry;
    const Mask cand = F & ~tree_mask(B);
    const int count = std::popcount(cand);
    if (count == 0) {
      entry.out[B] = 1;
    } else {
      const mpq_class w(1, count);
      for (Mask rest = cand; rest; rest &= rest - 1) {
        const auto e = static_cast<EdgeId>(std::countr_zero(rest));
        const Entry& left = solve(F & ~bit(e), B);
        entry.pivots += w * left.pivots;
        for (const auto& [Bl, p] : left.out) {
          const DistanceVector y = tree_distances(g_, Policy(g_, Bl));
          if (!is_improving(g_, y, e)) {
            entry.out[Bl] += w * p;
            continue;
          }
          EdgeId leaving = kNoEdge;
          const Entry& right = solve(F, switched(g_, Bl, e, &leaving));
          entry.pivots += w * p * (1 + right.pivots);
          for (const auto& [Br, q] : right.out) entry.out[Br] += w * p * q;
        }
      }
    }
    return memo_.emplace(std::move(key), std::move(entry)).first->second;
  }

  std::size_t states() const { return memo_.size(); }

 private:
  const Digraph& g_;
  std::map<std::pair<Mask, std::vector<EdgeId>>, Entry> memo_;
};

// The permutation is a concatenation of blocks, each in uniform random
// order independent of the others. Scanning draws from the first block
// until it is exhausted, then the next. When the drawn edge improves, the
// drawn-before set plus the leaving edge becomes a fresh block in front of
// the undrawn remainder of the current block, followed by the later blocks.
class NonrecursiveOracle {
 public:
  explicit NonrecursiveOracle(const Digraph& g) : g_(g) {}

  mpq_class expected(const std::vector<EdgeId>& B, const std::vector<Mask>& blocks) {
    auto key = std::make_pair(B, blocks);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const DistanceVector y = tree_distances(g_, Policy(g_, B));
    std::map<Mask, mpq_class> scan_memo;
    mpq_class value = scan(B, y, blocks, 0, scan_memo);
    memo_.emplace(std::move(key), value);
    return value;
  }

  std::size_t states() const { return memo_.size(); }

 private:
  mpq_class scan(const std::vector<EdgeId>& B, const DistanceVector& y, const std::vector<Mask>& blocks,
                 Mask drawn, std::map<Mask, mpq_class>& scan_memo) {
    auto it = scan_memo.find(drawn);
    if (it != scan_memo.end()) return it->second;
    std::size_t b = 0;
    while (b < blocks.size() && (blocks[b] & ~drawn) == 0) ++b;
    mpq_class value = 0;
    if (b < blocks.size()) {
      const Mask rem = blocks[b] & ~drawn;
      for (Mask rest = rem; rest; rest &= rest - 1) {
        const auto e = static_cast<EdgeId>(std::countr_zero(rest));
        if (!is_improving(g_, y, e)) {
          value += scan(B, y, blocks, drawn | bit(e), scan_memo);
          continue;
        }
        EdgeId leaving = kNoEdge;
        std::vector<EdgeId> next = switched(g_, B, e, &leaving);
        std::vector<Mask> next_blocks{drawn | bit(leaving)};
        if (rem & ~bit(e)) next_blocks.push_back(rem & ~bit(e));
        next_blocks.insert(next_blocks.end(), blocks.begin() + static_cast<std::ptrdiff_t>(b) + 1, blocks.end());
        value += 1 + expected(next, next_blocks);
      }
      value /= std::popcount(rem);
    }
    scan_memo.emplace(drawn, value);
    return value;
  }

  const Digraph& g_;
  std::map<std::pair<std::vector<EdgeId>, std::vector<Mask>>, mpq_class> memo_;
};

Mask to_mask(const EdgeSet& F) {
  Mask m = 0;
  for (EdgeId e : F.ids()) m |= bit(e);
  return m;
}

}  // namespace

ExactExpectation exact_pivots_recursive(const Digraph& g, const EdgeSet& F, const Policy& B0) {
  require_small(g);
  if (!B0.is_subset_of(F)) throw InvalidStart("start policy is not contained in F");
  RecursiveOracle oracle(g);
  const auto& entry = oracle.solve(to_mask(F), B0.chosen());
  return {entry.pivots, oracle.states()};
}

ExactExpectation exact_pivots_nonrecursive(const Digraph& g, const Policy& B0) {
  require_small(g);
  const Mask all = g.num_edges() == 64 ? ~Mask{0} : (Mask{1} << g.num_edges()) - 1;
  const Mask non_tree = all & ~tree_mask(B0.chosen());
  std::vector<Mask> blocks;
  if (non_tree) blocks.push_back(non_tree);
  NonrecursiveOracle oracle(g);
  mpq_class value = oracle.expected(B0.chosen(), blocks);
  return {value, oracle.states()};
}

ExactExpectation enumerate_engine_pivots(const Digraph& g, const EdgeSet& F, const Policy& B0) {
  // script[k] = (pick index, number of candidates) at the k-th pick.
  std::vector<std::pair<std::size_t, std::size_t>> script;
  ExactExpectation total;
  for (;;) {
    std::size_t pos = 0;
    mpq_class prob = 1;
    FacetChoice choice;
    choice.picker = [&](std::size_t count) {
      if (pos == script.size()) script.emplace_back(0, count);
      if (script[pos].second != count) throw InvariantViolation("replay diverged from the recorded script");
      prob /= static_cast<unsigned long>(count);
      return script[pos++].first;
    };
    RunResult run = facet_run(g, F, B0, choice);
    script.resize(pos);
    total.expected_pivots += prob * static_cast<unsigned long>(run.pivots);
    ++total.states;
    while (!script.empty() && script.back().first + 1 == script.back().second) script.pop_back();
    if (script.empty()) break;
    ++script.back().first;
  }
  return total;
}

}  // namespace facetlab
