#include "facetlab/edge_set.hpp"

#include <stdexcept>

namespace facetlab {

EdgeSet::EdgeSet(std::size_t universe, bool full)
    : bits_(universe, full ? 1 : 0), count_(full ? universe : 0) {}

EdgeSet EdgeSet::of(std::size_t universe, const std::vector<EdgeId>& ids) {
  EdgeSet s(universe);
  for (EdgeId e : ids) s.insert(e);
  return s;
}

bool EdgeSet::insert(EdgeId e) {
  auto& b = bits_.at(static_cast<std::size_t>(e));
  if (b) return false;
  b = 1;
  ++count_;
  return true;
}

bool EdgeSet::erase(EdgeId e) {
  auto& b = bits_.at(static_cast<std::size_t>(e));
  if (!b) return false;
  b = 0;
  --count_;
  return true;
}

std::vector<EdgeId> EdgeSet::ids() const {
  std::vector<EdgeId> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(static_cast<EdgeId>(i));
  }
  return out;
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  if (other.universe() != universe()) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

EdgeSet& EdgeSet::operator|=(const EdgeSet& other) {
  if (other.universe() != universe()) throw std::invalid_argument("EdgeSet universe mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (other.bits_[i] && !bits_[i]) {
      bits_[i] = 1;
      ++count_;
    }
  }
  return *this;
}

RankedSet::RankedSet(std::size_t capacity)
    : tree_(capacity + 1, 0), present_(capacity, 0) {
  while (top_bit_ * 2 <= capacity) top_bit_ *= 2;
}

void RankedSet::add(std::size_t pos, int delta) {
  for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
}

void RankedSet::insert(std::size_t pos) {
  if (present_.at(pos)) return;
  present_[pos] = 1;
  ++count_;
  add(pos, 1);
}

void RankedSet::erase(std::size_t pos) {
  if (!present_.at(pos)) return;
  present_[pos] = 0;
  --count_;
  add(pos, -1);
}

std::size_t RankedSet::kth(std::size_t k) const {
  if (k >= count_) throw std::out_of_range("RankedSet::kth");
  std::size_t idx = 0;
  auto remaining = static_cast<int>(k) + 1;
  for (std::size_t step = top_bit_; step > 0; step >>= 1) {
    std::size_t next = idx + step;
    if (next < tree_.size() && tree_[next] < remaining) {
      idx = next;
      remaining -= tree_[next];
    }
  }
  return idx;
}

}  // namespace facetlab
