#include "facetlab/counters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "facetlab/rational.hpp"

namespace facetlab {

BitPermutation::BitPermutation(std::vector<int> one_based_values)
    : values_(std::move(one_based_values)) {
  if (values_.empty()) throw std::invalid_argument("BitPermutation needs slot 0");
  const int n = size();
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int i = 1; i <= n; ++i) {
    int v = values_[static_cast<std::size_t>(i)];
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("sigma_hat is not a permutation of 1..n");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

BitPermutation BitPermutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) v[static_cast<std::size_t>(i)] = i;
  return BitPermutation(std::move(v));
}

std::vector<int> full_index_set(int n) {
  std::vector<int> N(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) N[static_cast<std::size_t>(i)] = i + 1;
  return N;
}

namespace {

void check_zero(const CounterState& state, const std::vector<int>& N) {
  for (int i : N) {
    if (i < 1 || i > state.size()) throw std::out_of_range("bit index outside counter");
    if (state.bits[static_cast<std::size_t>(i)] != 0)
      throw std::invalid_argument("RandCount requires all bits of N to be 0");
  }
}

std::vector<int> below(const std::vector<int>& N, int i) {
  std::vector<int> lower;
  for (int x : N) {
    if (x < i) lower.push_back(x);
  }
  return lower;
}

void set_and_reset(CounterState& state, const std::vector<int>& lower, int i) {
  state.bits[static_cast<std::size_t>(i)] = 1;
  ++state.increments;
  for (int x : lower) state.bits[static_cast<std::size_t>(x)] = 0;
}

void rand_count_impl(CounterState& state, const std::vector<int>& N, Rng& rng,
                     CountTrace& trace) {
  if (N.empty()) return;
  const std::size_t pick = rng.uniform_index(N.size());
  const int i = N[pick];
  std::vector<int> rest = N;
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
  rand_count_impl(state, rest, rng, trace);
  std::vector<int> lower = below(N, i);
  set_and_reset(state, lower, i);
  ++trace.increments;
  trace.set_order.push_back(i);
  rand_count_impl(state, lower, rng, trace);
}

std::uint64_t rand_count_1p_impl(CounterState& state, const std::vector<int>& N,
                                 const BitPermutation& sigma_hat) {
  if (N.empty()) return 0;
  const auto it = std::min_element(N.begin(), N.end(), [&](int a, int b) {
    return sigma_hat(a) < sigma_hat(b);
  });
  const int i = *it;
  std::vector<int> rest = N;
  rest.erase(rest.begin() + (it - N.begin()));
  std::uint64_t count = rand_count_1p_impl(state, rest, sigma_hat);
  std::vector<int> lower = below(N, i);
  set_and_reset(state, lower, i);
  return count + 1 + rand_count_1p_impl(state, lower, sigma_hat);
}

}  // namespace

CountTrace rand_count(CounterState& state, const std::vector<int>& N, Rng& rng) {
  check_zero(state, N);
  CountTrace trace;
  rand_count_impl(state, N, rng, trace);
  return trace;
}

std::uint64_t rand_count(const std::vector<int>& N, Rng& rng) {
  int n = N.empty() ? 0 : *std::max_element(N.begin(), N.end());
  CounterState state(n);
  return rand_count(state, N, rng).increments;
}

std::uint64_t rand_count_1p(CounterState& state, const std::vector<int>& N,
                            const BitPermutation& sigma_hat) {
  check_zero(state, N);
  for (int i : N) {
    if (i > sigma_hat.size()) throw std::out_of_range("sigma_hat shorter than N");
  }
  return rand_count_1p_impl(state, N, sigma_hat);
}

std::uint64_t rand_count_1p(const std::vector<int>& N, const BitPermutation& sigma_hat) {
  CounterState state(sigma_hat.size());
  return rand_count_1p(state, N, sigma_hat);
}

mpq_class f_exact(int n) {
  if (n < 0) throw std::invalid_argument("f_exact: n must be non-negative");
  mpq_class total = 0;
  mpz_class binom = 1;
  mpz_class fact = 1;
  for (int k = 1; k <= n; ++k) {
    binom = binom * (n - k + 1) / k;
    fact *= k;
    total += make_ratio(binom, fact);
  }
  return total;
}

std::vector<mpq_class> f_recurrence_table(int n) {
  if (n < 0) throw std::invalid_argument("f_recurrence: n must be non-negative");
  std::vector<mpq_class> f(static_cast<std::size_t>(n) + 1);
  f[0] = 0;
  mpq_class prefix = 0;
  for (int m = 1; m <= n; ++m) {
    prefix += f[static_cast<std::size_t>(m - 1)];
    f[static_cast<std::size_t>(m)] = f[static_cast<std::size_t>(m - 1)] + 1 + prefix / m;
  }
  return f;
}

mpq_class f_recurrence(int n) { return f_recurrence_table(n).back(); }

double log_f_asymptote(int n) {
  if (n < 1) throw std::invalid_argument("f_asymptote: n must be at least 1");
  const double x = static_cast<double>(n);
  return 2.0 * std::sqrt(x) - std::log(2.0 * std::sqrt(std::numbers::pi * std::numbers::e)) -
         0.25 * std::log(x);
}

double f_asymptote(int n) { return std::exp(log_f_asymptote(n)); }

}  // namespace facetlab
