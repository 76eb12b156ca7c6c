#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "facetlab/analysis.hpp"
#include "facetlab/construction.hpp"
#include "facetlab/counters.hpp"
#include "facetlab/graph_io.hpp"
#include "facetlab/harness.hpp"
#include "facetlab/rational.hpp"

namespace py = pybind11;
using namespace facetlab;

namespace {

// Exact rationals cross the boundary as decimal numerator/denominator strings.
std::pair<std::string, std::string> split(const mpq_class& q) {
  return {to_string(mpz_class(q.get_num())), to_string(mpz_class(q.get_den()))};
}

Rule rule_or_throw(const std::string& name) {
  auto rule = parse_rule(name);
  if (!rule) throw py::value_error("unknown rule: " + name);
  return *rule;
}

}  // namespace

PYBIND11_MODULE(_facetlab, m) {
  m.def("f_exact", [](int n) { return split(f_exact(n)); }, py::arg("n"));
  m.def("f_recurrence", [](int n) { return split(f_recurrence(n)); }, py::arg("n"));
  m.def("f_asymptote", &f_asymptote, py::arg("n"));
  m.def("log_f_asymptote", &log_f_asymptote, py::arg("n"));
  m.def(
      "rand_count",
      [](int n, std::uint64_t seed) {
        Rng rng(seed);
        return rand_count(full_index_set(n), rng);
      },
      py::arg("n"), py::arg("seed"));
  m.def(
      "rand_count_1p",
      [](const std::vector<int>& N, std::vector<int> sigma_hat) {
        sigma_hat.insert(sigma_hat.begin(), 0);
        return rand_count_1p(N, BitPermutation(std::move(sigma_hat)));
      },
      py::arg("N"), py::arg("sigma_hat"), "sigma_hat lists the ranks of bits 1..n in order.");

  m.def(
      "construction_json",
      [](int n, int r, int s, int t) {
        const Construction c = Construction::build(n, r, s, t);
        const Policy b0 = c.initial_tree();
        nlohmann::json doc = graph_to_json(c.graph(), &b0, {{"construction", {{"n", n}, {"r", r}, {"s", s}, {"t", t}}}});
        return doc.dump();
      },
      py::arg("n"), py::arg("r"), py::arg("s"), py::arg("t"));
  m.def(
      "index_json", [](int n, int r, int s, int t) { return Construction::build(n, r, s, t).index_json().dump(); },
      py::arg("n"), py::arg("r"), py::arg("s"), py::arg("t"));

  m.def(
      "run_construction",
      [](const std::string& rule, int n, int r, int s, int t, std::uint64_t trials, std::uint64_t seed,
         unsigned threads) {
        ExperimentConfig cfg;
        cfg.rule = rule_or_throw(rule);
        cfg.gen = ConstructionParams{n, r, s, t};
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.threads = threads;
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(cfg);
        }
        return records_to_csv(res.records);
      },
      py::arg("rule"), py::arg("n"), py::arg("r"), py::arg("s"), py::arg("t"), py::arg("trials") = 1,
      py::arg("seed") = 1, py::arg("threads") = 1, "Returns the trial CSV.");
  m.def(
      "run_graph_file",
      [](const std::string& rule, const std::string& path, std::uint64_t trials, std::uint64_t seed,
         unsigned threads) {
        ExperimentConfig cfg;
        cfg.rule = rule_or_throw(rule);
        cfg.graph_path = path;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.threads = threads;
        py::gil_scoped_release release;
        return records_to_csv(run_experiment(cfg).records);
      },
      py::arg("rule"), py::arg("path"), py::arg("trials") = 1, py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "estimate_canonical",
      [](int n, int r, int s, int t, const std::vector<int>& S, std::uint64_t trials, std::uint64_t seed,
         unsigned threads) {
        const Construction c = Construction::build(n, r, s, t);
        CanonicalEstimate est;
        {
          py::gil_scoped_release release;
          est = estimate_canonical_probability(c, S, trials, seed, threads);
        }
        py::dict out;
        out["trials"] = est.trials;
        out["canonical"] = est.canonical;
        out["good1"] = est.good1;
        out["bad2_given_good1"] = est.bad2_given_good1;
        out["bad3_given_good1"] = est.bad3_given_good1;
        out["no_right_child"] = est.no_right_child;
        out["leaf"] = est.leaf;
        out["bad2_and_bad3"] = est.bad2_and_bad3;
        out["wilson"] = py::make_tuple(est.canonical_ci.lo, est.canonical_ci.hi);
        return out;
      },
      py::arg("n"), py::arg("r"), py::arg("s"), py::arg("t"), py::arg("S"), py::arg("trials") = 100,
      py::arg("seed") = 1, py::arg("threads") = 1);

  m.def("check_ids", &verify_check_ids);
  m.def(
      "verify_json",
      [](const std::string& check, const std::string& params, std::uint64_t seed, unsigned threads) {
        const nlohmann::json p = nlohmann::json::parse(params);
        VerifyReport rep;
        {
          py::gil_scoped_release release;
          rep = verify(check, p, seed, threads);
        }
        return rep.to_json().dump();
      },
      py::arg("check"), py::arg("params") = "{}", py::arg("seed") = 1, py::arg("threads") = 1);
}
