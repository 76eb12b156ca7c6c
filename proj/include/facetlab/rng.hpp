#ifndef FACETLAB_RNG_HPP
#define FACETLAB_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace facetlab {

std::uint64_t splitmix64(std::uint64_t x);

// Per-trial seed: splitmix64(master ^ splitmix64(trial)). Depends only on
// (master, trial), so scheduling order never changes a trial's stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial);

// Seeded stream. Bounded draws are done here instead of through
// std::uniform_int_distribution, whose output is implementation-defined;
// this keeps result files identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  // Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace facetlab

#endif
