// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "facetlab/analysis.hpp"
#include "facetlab/construction.hpp"
#include "facetlab/counters.hpp"
#include "facetlab/harness.hpp"
#include "facetlab/permutation.hpp"
#include "facetlab/rational.hpp"
#include "facetlab/rules.hpp"

using namespace facetlab;
using nlohmann::json;

namespace {

struct Line {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

const unsigned kThreads = std::max(1u, std::thread::hardware_concurrency());
constexpr std::uint64_t kSeed = 20240601;

std::uint64_t terminal_total = 0;  // terminal-state violations seen anywhere
std::uint64_t traced_runs = 0;
std::uint64_t traced_mismatches = 0;

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Runs a verify check and folds it into a criterion line.
Line from_check(int id, const std::string& check, const json& params, double limit_s) {
  const VerifyReport rep = verify(check, params, kSeed, kThreads);
  terminal_total += rep.terminal_violations;
  Line line{id, check, rep.passed && rep.seconds < limit_s, rep.seconds,
            std::to_string(rep.cases) + " cases, " + std::to_string(rep.violations) + " violations, " +
                std::to_string(rep.terminal_violations) + " non-optimal terminals"};
  if (rep.seconds >= limit_s) line.detail += ", over the " + fmt("%.0f", limit_s) + " s budget";
  return line;
}

Line asymptote() {
  const auto t0 = std::chrono::steady_clock::now();
  const double exact = log_rational(f_exact(400));
  const double rel = std::abs(exact - log_f_asymptote(400)) / exact;
  const double s = since(t0);
  return {3, "asymptote", rel <= 0.05 && s < 10.0, s, "relative log error at n=400 is " + fmt("%.5f", rel)};
}

Line monte_carlo_counter() {
  const auto t0 = std::chrono::steady_clock::now();
  const mpq_class exact = f_exact(10);
  const double target = to_double(exact);
  const int trials = 10000;
  double sum = 0, sum2 = 0;
  for (int k = 0; k < trials; ++k) {
    Rng rng(derive_seed(kSeed, static_cast<std::uint64_t>(k)));
    const auto v = static_cast<double>(rand_count(full_index_set(10), rng));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum2 / trials - mean * mean) / (trials - 1));
  const double z = std::abs(mean - target) / se;
  const double s = since(t0);
  return {4, "monte-carlo-counter", z <= 4.0 && s < 5.0, s,
          "f_exact(10) = " + to_string(exact) + " = " + fmt("%.6f", target) + ", mean " + fmt("%.4f", mean) +
              ", |z| = " + fmt("%.2f", z)};
}

Line lower_bound_pair() {
  const json p{{"n", {3, 4, 5, 6}}, {"rst", {2, 3}}, {"samples", 200}};
  const VerifyReport star = verify("technical-star", p, kSeed, kThreads);
  const VerifyReport bland = verify("technical-bland", p, kSeed, kThreads);
  terminal_total += star.terminal_violations + bland.terminal_violations;
  const double s = star.seconds + bland.seconds;
  return {9, "technical-star+bland", star.passed && bland.passed && s < 300.0, s,
          "one-permutation " + std::to_string(star.cases) + " samples / " + std::to_string(star.violations) +
              " violations; bland " + std::to_string(bland.cases) + " samples / " +
              std::to_string(bland.violations) + " violations"};
}

Line switch_identity() {
  const VerifyReport rep = verify("switch-identity", json::object(), kSeed, kThreads);
  terminal_total += rep.terminal_violations;
  const std::uint64_t runs = rep.cases + traced_runs;
  const std::uint64_t bad = rep.violations + traced_mismatches;
  return {11, "switch-identity", rep.passed && traced_mismatches == 0, rep.seconds,
          std::to_string(runs) + " traced runs (" + std::to_string(traced_runs) +
              " from the growth suite), " + std::to_string(bad) + " mismatches"};
}

// Growth over n for the 1P and Random-Bland rules. The lower bound is
// checked on sampled well-behaved sigma, where each run dominates the
// one-permutation counter whose mean over the uniform induced order is f(n).
// Traced 1P runs feed the switch identity.
Line growth() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> ns{2, 4, 6, 8};
  const std::uint64_t trials = 200;
  bool ok = true;
  std::string detail;
  for (Rule rule : {Rule::RandomFacet1P, Rule::RandomBland}) {
    double prev = -1.0;
    detail += rule_name(rule) + " means";
    for (int n : ns) {
      ExperimentConfig cfg;
      cfg.rule = rule;
      cfg.gen = ConstructionParams{n, 2, 2, 2};
      cfg.trials = trials;
      cfg.seed = kSeed;
      cfg.threads = kThreads;
      double mean = 0.0;
      try {
        mean = run_experiment(cfg).summary.mean;
      } catch (const InvariantViolation&) {
        ++terminal_total;
        ok = false;
      }
      ok = ok && mean > prev;
      prev = mean;
      detail += " " + fmt("%.1f", mean);
    }
    detail += "; ";
  }
  detail += "well-behaved sigma (1p, bland, counter, f):";
  for (int n : ns) {
    const Construction c = Construction::build(n, 2, 2, 2);
    const EdgeSet E(c.num_edges(), true);
    double star = 0, bland = 0, counter = 0;
    for (std::uint64_t k = 0; k < trials; ++k) {
      Rng rng(derive_seed(kSeed ^ 0x5bd1e995ULL, k));
      const PermutationFn sigma = sample_well_behaved(c, rng);
      counter += static_cast<double>(rand_count_1p(full_index_set(n), induced_permutation(sigma, c)));
      const RunResult a = random_facet_1p(c.graph(), E, c.initial_tree(), sigma);
      const RunResult b = bland_nonrec(c.graph(), 1, c.initial_tree(), sigma);
      terminal_total += !is_optimal_within(c.graph(), E, a.final_policy);
      terminal_total += !is_optimal_within(c.graph(), E, b.final_policy);
      star += static_cast<double>(a.pivots);
      bland += static_cast<double>(b.pivots);
    }
    star /= trials;
    bland /= trials;
    counter /= trials;
    const double f = to_double(f_exact(n));
    ok = ok && star >= counter && bland >= counter && star > f && bland > f;
    detail += " n=" + std::to_string(n) + " (" + fmt("%.1f", star) + ", " + fmt("%.1f", bland) + ", " +
              fmt("%.2f", counter) + ", " + fmt("%.2f", f) + ")";
  }
  for (int n : ns) {
    const Construction c = Construction::build(n, 2, 2, 2);
    for (std::uint64_t k = 0; k < 10; ++k) {
      Rng rng(derive_seed(kSeed, k));
      const RunResult run = run_rule(c.graph(), c.initial_tree(), Rule::RandomFacet1P, rng, true);
      ++traced_runs;
      if (!run.tree || run.tree->switch_count() != run.pivots) ++traced_mismatches;
    }
  }
  const double s = since(t0);
  return {13, "growth", ok && s < 600.0, s, detail};
}

}  // namespace

int main() {
  std::vector<Line> lines;
  auto add = [&](Line l) {
    std::fprintf(stderr, "  finished criterion %d (%.2f s)\n", l.id, l.seconds);
    lines.push_back(std::move(l));
  };
  try {
    add(from_check(1, "recurrence", {{"n_max", 200}}, 5.0));
    add(from_check(2, "counters-equality", {{"n_max", 8}}, 30.0));
    add(asymptote());
    add(monte_carlo_counter());
    add(from_check(5, "bf-optimal",
                   {{"n", {1, 2, 3, 4}}, {"r", {1, 2, 3}}, {"s", {1, 2, 3}}, {"t", {1, 2, 3}}, {"samples", 100}},
                   60.0));
    add(from_check(6, "make-switch", {{"samples", 500}}, 60.0));
    add(from_check(7, "bland-equiv", {{"instances", 100}, {"max_vertices", 12}, {"construction_sigmas", 20}}, 30.0));
    add(from_check(8, "rf-equiv", {{"instances", 20}, {"max_non_tree", 7}}, 120.0));
    add(lower_bound_pair());
    add(from_check(10, "well-behaved-prob", {{"n", 8}, {"r", 9}, {"s", 9}, {"t", 9}, {"samples", 10000}}, 60.0));
    add(from_check(12, "lp-correspondence", {{"instances", 20}}, 60.0));
    add(growth());
    add(switch_identity());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 1;
  }
  add({14, "terminal-optimality", terminal_total == 0, 0.0,
       std::to_string(terminal_total) + " non-optimal terminal states across the suite"});

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  bool all = true;
  for (const Line& l : lines) {
    all = all && l.passed;
    std::printf("%s %2d %-22s %8.2f s  %s\n", l.passed ? "PASS" : "FAIL", l.id, l.name.c_str(), l.seconds,
                l.detail.c_str());
  }
  std::printf("%s\n", all ? "all criteria passed" : "some criteria FAILED");
  return all ? 0 : 1;
}
