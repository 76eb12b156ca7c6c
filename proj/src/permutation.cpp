#include "facetlab/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace facetlab {

PermutationFn PermutationFn::from_order(std::vector<EdgeId> order) {
  PermutationFn p;
  p.rank_.assign(order.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto e = static_cast<std::size_t>(order[r]);
    if (order[r] < 0 || e >= order.size() || p.rank_[e] != 0)
      throw std::invalid_argument("permutation order is not a bijection on edge ids");
    p.rank_[e] = static_cast<int>(r) + 1;
  }
  p.order_ = std::move(order);
  return p;
}

PermutationFn PermutationFn::identity(std::size_t m) {
  std::vector<EdgeId> order(m);
  std::iota(order.begin(), order.end(), 0);
  return from_order(std::move(order));
}

PermutationFn PermutationFn::uniform(std::size_t m, Rng& rng) {
  std::vector<EdgeId> order(m);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<EdgeId>(order));
  return from_order(std::move(order));
}

int sigma_b1(const PermutationFn& sigma, const Construction& c, int i) {
  int best = static_cast<int>(sigma.size()) + 1;
  for (EdgeId e : c.b1(i)) best = std::min(best, sigma(e));
  return best;
}

int sigma_a1_group(const PermutationFn& sigma, const Construction& c, int i, int j) {
  int best = static_cast<int>(sigma.size()) + 1;
  for (EdgeId e : c.a1(i, j)) best = std::min(best, sigma(e));
  return best;
}

int sigma_a1(const PermutationFn& sigma, const Construction& c, int i) {
  int worst = 0;
  for (int j = 1; j <= c.r(); ++j) worst = std::max(worst, sigma_a1_group(sigma, c, i, j));
  return worst;
}

int sigma_multi(const PermutationFn& sigma, const Construction& c, int m) {
  int worst = 0;
  for (EdgeId e : c.multi(m)) worst = std::max(worst, sigma(e));
  return worst;
}

bool is_well_behaved(const PermutationFn& sigma, const Construction& c) {
  int latest_a_min = 0;
  for (int i = 1; i <= c.n(); ++i) {
    if (sigma_b1(sigma, c, i) >= sigma_a1(sigma, c, i)) return false;
    latest_a_min = std::max(latest_a_min, sigma_a1(sigma, c, i));
  }
  for (std::size_t m = 0; m < c.num_multi(); ++m) {
    if (sigma_multi(sigma, c, static_cast<int>(m)) <= latest_a_min) return false;
  }
  return true;
}

BitPermutation induced_permutation(const PermutationFn& sigma, const Construction& c) {
  std::vector<int> bits(static_cast<std::size_t>(c.n()));
  std::iota(bits.begin(), bits.end(), 1);
  std::sort(bits.begin(), bits.end(),
            [&](int x, int y) { return sigma_b1(sigma, c, x) < sigma_b1(sigma, c, y); });
  std::vector<int> values(static_cast<std::size_t>(c.n()) + 1, 0);
  for (std::size_t pos = 0; pos < bits.size(); ++pos)
    values[static_cast<std::size_t>(bits[pos])] = static_cast<int>(pos) + 1;
  return BitPermutation(std::move(values));
}

EdgeSet suffix_set(const PermutationFn& sigma, int ell) {
  EdgeSet F(sigma.size());
  for (int r = std::max(ell, 1); r <= static_cast<int>(sigma.size()); ++r) F.insert(sigma.edge_at(r));
  return F;
}

PermutationFn sample_well_behaved(const Construction& c, Rng& rng) {
  const std::size_t m = c.num_edges();
  std::vector<std::uint8_t> designated(m, 0);
  std::vector<EdgeId> last_copies;
  for (std::size_t g = 0; g < c.num_multi(); ++g) {
    const auto& copies = c.multi(static_cast<int>(g));
    EdgeId e = copies[rng.uniform_index(copies.size())];
    designated[static_cast<std::size_t>(e)] = 1;
    last_copies.push_back(e);
  }
  std::vector<EdgeId> rest;
  for (std::size_t e = 0; e < m; ++e) {
    if (!designated[e]) rest.push_back(static_cast<EdgeId>(e));
  }
  for (;;) {
    rng.shuffle(std::span<EdgeId>(rest));
    std::vector<int> pos(m, -1);
    for (std::size_t p = 0; p < rest.size(); ++p) pos[static_cast<std::size_t>(rest[p])] = static_cast<int>(p);
    int split = -1;
    for (int i = 1; i <= c.n(); ++i) {
      for (int j = 1; j <= c.r(); ++j) {
        int first = static_cast<int>(m);
        for (EdgeId e : c.a1(i, j)) first = std::min(first, pos[static_cast<std::size_t>(e)]);
        split = std::max(split, first);
      }
    }
    std::vector<EdgeId> order(rest.begin(), rest.begin() + split + 1);
    std::vector<EdgeId> tail(rest.begin() + split + 1, rest.end());
    tail.insert(tail.end(), last_copies.begin(), last_copies.end());
    rng.shuffle(std::span<EdgeId>(tail));
    order.insert(order.end(), tail.begin(), tail.end());
    PermutationFn sigma = PermutationFn::from_order(std::move(order));
    if (is_well_behaved(sigma, c)) return sigma;
  }
}

}  // namespace facetlab
