#ifndef FACETLAB_HARNESS_HPP
#define FACETLAB_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "facetlab/construction.hpp"
#include "facetlab/graph_io.hpp"
#include "facetlab/rules.hpp"

namespace facetlab {

struct ExperimentConfig {
  Rule rule = Rule::RandomFacet;
  std::string graph_path;                 // used when gen is empty
  std::optional<ConstructionParams> gen;  // build G_{n,r,s,t} instead of loading
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool timing = false;  // fill wall_ns; off keeps output byte-identical
  std::string out_csv;
  std::string trace_path;
};

struct ResultRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  Rule rule = Rule::RandomFacet;
  std::uint64_t pivots = 0;
  std::int64_t wall_ns = 0;
};

struct Summary {
  std::uint64_t count = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
};

Summary summarize(const std::vector<std::uint64_t>& values);

struct ExperimentResult {
  std::vector<ResultRecord> records;
  Summary summary;
  nlohmann::json trace;  // null unless tracing
};

// Throws BadConfig when the configuration is unusable.
void validate_config(const ExperimentConfig& config);

// Runs one trial of `rule` from B0 on all edges, with the trial's stream.
// Random-Facet^1P draws a uniform sigma from the stream; Bland uses the
// identity order. Throws InvariantViolation if the final tree is not
// optimal.
RunResult run_rule(const Digraph& g, const Policy& B0, Rule rule, Rng& rng, bool record_tree = false);

// Loads or builds the graph and runs the trials. Trial k uses
// derive_seed(seed, k). Writes the CSV and trace files when paths are set.
ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_trials(const Digraph& g, const Policy& B0, const ExperimentConfig& config);

// trial,seed,rule,pivots,wall_ns
std::string records_to_csv(const std::vector<ResultRecord>& records);

// Rebuilds the construction recorded in a graph file's metadata and checks
// that the file holds the same graph.
Construction construction_from_file(const GraphFile& file);

nlohmann::json run_to_json(const Digraph& g, const RunResult& run, std::uint64_t trial);

struct VerifyReport {
  std::string check;
  bool passed = false;
  std::uint64_t cases = 0;
  std::uint64_t violations = 0;
  std::uint64_t terminal_violations = 0;  // final trees that are not optimal
  double seconds = 0.0;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

const std::vector<std::string>& verify_check_ids();

// Runs one check with parameters overriding its defaults. Throws
// UnknownCheck for ids outside verify_check_ids().
VerifyReport verify(const std::string& check, const nlohmann::json& params = nlohmann::json::object(),
                    std::uint64_t seed = 1, unsigned threads = 1);

}  // namespace facetlab

#endif
