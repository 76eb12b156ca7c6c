#ifndef FACETLAB_COUNTERS_HPP
#define FACETLAB_COUNTERS_HPP

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "facetlab/rng.hpp"

namespace facetlab {

// Bits indexed 1..n (slot 0 unused).
struct CounterState {
  std::vector<std::uint8_t> bits;
  std::uint64_t increments = 0;

  explicit CounterState(int n) : bits(static_cast<std::size_t>(n) + 1, 0) {}
  int size() const { return static_cast<int>(bits.size()) - 1; }
};

// sigma_hat[i] for i in 1..n; slot 0 unused.
class BitPermutation {
 public:
  explicit BitPermutation(std::vector<int> one_based_values);
  static BitPermutation identity(int n);

  int operator()(int bit) const { return values_[static_cast<std::size_t>(bit)]; }
  int size() const { return static_cast<int>(values_.size()) - 1; }
  const std::vector<int>& values() const { return values_; }

 private:
  std::vector<int> values_;
};

struct CountTrace {
  std::uint64_t increments = 0;
  // Bits in the order they were set to 1.
  std::vector<int> set_order;
};

// RandCount on index set N (sorted, 1-based). Bits of N in `state` must be 0.
CountTrace rand_count(CounterState& state, const std::vector<int>& N, Rng& rng);
std::uint64_t rand_count(const std::vector<int>& N, Rng& rng);

std::uint64_t rand_count_1p(CounterState& state, const std::vector<int>& N,
                            const BitPermutation& sigma_hat);
std::uint64_t rand_count_1p(const std::vector<int>& N, const BitPermutation& sigma_hat);

std::vector<int> full_index_set(int n);

mpq_class f_exact(int n);
mpq_class f_recurrence(int n);
// Values f(0..n) from the recurrence.
std::vector<mpq_class> f_recurrence_table(int n);
double f_asymptote(int n);
double log_f_asymptote(int n);

}  // namespace facetlab

#endif
