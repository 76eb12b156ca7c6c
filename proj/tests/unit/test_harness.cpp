#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "facetlab/graph_io.hpp"
#include "facetlab/harness.hpp"
#include "facetlab/random_graphs.hpp"

using namespace facetlab;
using nlohmann::json;

namespace {

ExperimentConfig small_config(Rule rule, std::uint64_t trials) {
  ExperimentConfig cfg;
  cfg.rule = rule;
  cfg.gen = ConstructionParams{2, 2, 2, 2};
  cfg.trials = trials;
  cfg.seed = 17;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, InvalidConfigurationsAreRejected) {
  ExperimentConfig cfg = small_config(Rule::Dantzig, 1);
  EXPECT_NO_THROW(validate_config(cfg));
  cfg.trials = 0;
  EXPECT_THROW(validate_config(cfg), BadConfig);
  cfg = small_config(Rule::Dantzig, 1);
  cfg.graph_path = "x.json";
  EXPECT_THROW(validate_config(cfg), BadConfig);
  cfg.gen.reset();
  cfg.graph_path.clear();
  EXPECT_THROW(validate_config(cfg), BadConfig);
  cfg = small_config(Rule::Dantzig, 1);
  cfg.threads = 0;
  EXPECT_THROW(validate_config(cfg), BadConfig);
}

TEST(Rules, NamesRoundTrip) {
  for (Rule r : {Rule::RandomFacet, Rule::RandomFacetNonrec, Rule::RandomFacet1P, Rule::Bland, Rule::RandomBland,
                 Rule::Dantzig})
    EXPECT_EQ(parse_rule(rule_name(r)), r);
  EXPECT_EQ(parse_rule("simplex"), std::nullopt);
}

TEST(RunTrials, ParallelGraphSingleTrial) {
  const Digraph g = parallel_edge_graph();
  ExperimentConfig cfg;
  cfg.rule = Rule::RandomFacet;
  cfg.graph_path = "unused";
  const ExperimentResult res = run_trials(g, Policy::from_edges(g, {0}), cfg);
  ASSERT_EQ(res.records.size(), 1u);
  EXPECT_EQ(res.records[0].pivots, 1u);
  EXPECT_EQ(res.records[0].seed, derive_seed(0, 0));
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
  for (Rule rule : {Rule::RandomFacet, Rule::RandomFacet1P, Rule::RandomBland, Rule::RandomFacetNonrec}) {
    ExperimentConfig one = small_config(rule, 24);
    ExperimentConfig four = one;
    four.threads = 4;
    const std::string a = records_to_csv(run_experiment(one).records);
    EXPECT_EQ(a, records_to_csv(run_experiment(one).records));
    EXPECT_EQ(a, records_to_csv(run_experiment(four).records));
  }
}

TEST(RunExperiment, CsvSchemaAndFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "facetlab_harness_test";
  std::filesystem::create_directories(dir);
  ExperimentConfig cfg = small_config(Rule::Bland, 3);
  cfg.out_csv = (dir / "runs.csv").string();
  cfg.trace_path = (dir / "trace.json").string();
  const ExperimentResult res = run_experiment(cfg);
  const std::string csv = slurp(cfg.out_csv);
  EXPECT_EQ(csv, records_to_csv(res.records));
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "trial,seed,rule,pivots,wall_ns");
  std::string row;
  int rows = 0;
  while (std::getline(lines, row)) {
    ++rows;
    EXPECT_NE(row.find(",bland,"), std::string::npos);
    EXPECT_EQ(row.substr(row.rfind(',') + 1), "0");  // timing off
  }
  EXPECT_EQ(rows, 3);
  const json trace = read_json_file(cfg.trace_path);
  EXPECT_FALSE(trace.is_null());
  std::filesystem::remove_all(dir);
}

TEST(Summary, MeanAndRange) {
  const Summary s = summarize({1, 2, 3, 6});
  EXPECT_EQ(s.count, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_EQ(s.min, 1u);
  EXPECT_EQ(s.max, 6u);
  EXPECT_GT(s.stderr_, 0.0);
}

TEST(ConstructionFromFile, RoundTripAndMismatch) {
  const Construction c = Construction::build(2, 1, 2, 1);
  const Policy b0 = c.initial_tree();
  GraphFile file = graph_from_json(graph_to_json(c.graph(), &b0, json{{"construction", {{"n", 2}, {"r", 1}, {"s", 2}, {"t", 1}}}}));
  EXPECT_EQ(construction_from_file(file).num_edges(), c.num_edges());
  file.metadata["construction"]["t"] = 2;
  EXPECT_THROW(construction_from_file(file), BadConfig);
  file.metadata = json::object();
  EXPECT_THROW(construction_from_file(file), BadConfig);
}

TEST(Verify, UnknownCheckAndBadParams) {
  EXPECT_THROW(verify("no-such-check"), UnknownCheck);
  EXPECT_THROW(verify("recurrence", json::array()), BadConfig);
  EXPECT_THROW(verify("recurrence", json{{"n_max", "many"}}), BadConfig);
}

class VerifySmall : public ::testing::TestWithParam<std::pair<std::string, json>> {};

TEST_P(VerifySmall, Passes) {
  const auto& [check, params] = GetParam();
  const VerifyReport rep = verify(check, params, 5, 2);
  EXPECT_TRUE(rep.passed) << rep.to_json().dump(2);
  EXPECT_GT(rep.cases, 0u);
  EXPECT_EQ(rep.to_json().at("check"), check);
}

INSTANTIATE_TEST_SUITE_P(
    Checks, VerifySmall,
    ::testing::Values(std::pair<std::string, json>{"recurrence", {{"n_max", 40}}},
                      std::pair<std::string, json>{"counters-equality", {{"n_max", 5}}},
                      std::pair<std::string, json>{"bf-optimal", {{"samples", 5}, {"n_max", 2}, {"rst_max", 2}}},
                      std::pair<std::string, json>{"make-switch", {{"samples", 50}}},
                      std::pair<std::string, json>{"bland-equiv", {{"instances", 10}, {"construction_sigmas", 2}}},
                      std::pair<std::string, json>{"rf-equiv", {{"instances", 3}, {"engine_max_non_tree", 3}}},
                      std::pair<std::string, json>{"lp-correspondence", {{"instances", 3}}},
                      std::pair<std::string, json>{"technical-star", {{"n", {2, 3}}, {"rst", {2}}, {"samples", 5}}},
                      std::pair<std::string, json>{"technical-bland",
                                                   {{"n", {2}}, {"rst", {2}}, {"samples", 5}, {"lemma_samples", 3}}},
                      std::pair<std::string, json>{"drop-lemma", {{"n", {2}}, {"rst", {2}}, {"samples", 5}}},
                      std::pair<std::string, json>{"well-behaved-prob", {{"samples", 500}}},
                      std::pair<std::string, json>{"switch-identity", {{"construction_runs", 3}, {"dag_runs", 3}}}),
    [](const auto& info) {
      std::string name = info.param.first;
      for (char& ch : name)
        if (ch == '-') ch = '_';
      return name;
    });

TEST(Verify, LiteralDropLemmaFails) {
  // The containment as literally stated has counterexamples on G_{2,2,2,2}
  // when bit p is already set in the input tree; see drop-lemma details.
  const VerifyReport rep = verify("drop-lemma", json{{"n", {2}}, {"rst", {2}}, {"samples", 10}, {"literal", true}});
  EXPECT_FALSE(rep.passed);
  EXPECT_GT(rep.details.at("stated_hypotheses").at("violations").get<std::uint64_t>(), 0u);
  EXPECT_EQ(rep.details.at("bit_p_unset").at("violations").get<std::uint64_t>(), 0u);
}

TEST(Verify, ListsEveryCheck) {
  EXPECT_EQ(verify_check_ids().size(), 12u);
}
