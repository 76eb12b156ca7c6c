#ifndef FACETLAB_EDGE_SET_HPP
#define FACETLAB_EDGE_SET_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "facetlab/common.hpp"

namespace facetlab {

// Subset of the dense edge-id range [0, universe).
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t universe, bool full = false);
  static EdgeSet of(std::size_t universe, const std::vector<EdgeId>& ids);

  std::size_t universe() const { return bits_.size(); }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(EdgeId e) const { return bits_[static_cast<std::size_t>(e)] != 0; }
  bool insert(EdgeId e);
  bool erase(EdgeId e);

  std::vector<EdgeId> ids() const;
  bool is_subset_of(const EdgeSet& other) const;
  EdgeSet& operator|=(const EdgeSet& other);
  bool operator==(const EdgeSet& other) const { return bits_ == other.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

inline EdgeSet operator|(EdgeSet a, const EdgeSet& b) {
  a |= b;
  return a;
}

// Set over positions [0, capacity) with order-statistic queries (Fenwick tree).
class RankedSet {
 public:
  explicit RankedSet(std::size_t capacity);

  std::size_t size() const { return count_; }
  bool contains(std::size_t pos) const { return present_[pos] != 0; }
  void insert(std::size_t pos);
  void erase(std::size_t pos);
  // k-th smallest present position, 0-based k < size().
  std::size_t kth(std::size_t k) const;

 private:
  void add(std::size_t pos, int delta);

  std::vector<int> tree_;
  std::vector<std::uint8_t> present_;
  std::size_t count_ = 0;
  std::size_t top_bit_ = 1;
};

}  // namespace facetlab

#endif
