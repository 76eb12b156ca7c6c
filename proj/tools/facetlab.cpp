// Command-line front end: gen, run, counter, analyze, verify.
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "facetlab/analysis.hpp"
#include "facetlab/construction.hpp"
#include "facetlab/counters.hpp"
#include "facetlab/graph_io.hpp"
#include "facetlab/harness.hpp"
#include "facetlab/rational.hpp"

namespace {

using nlohmann::json;
using namespace facetlab;

constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
};

// Writes to the --out file, or stdout when none was given.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IOFailure("cannot write " + path);
  f << text;
  if (!f) throw IOFailure("write failed for " + path);
}

std::string sidecar_path(const std::string& graph_path) {
  std::filesystem::path p(graph_path);
  p.replace_extension();
  return p.string() + ".index.json";
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw BadConfig("bad level in --S: " + item);
    }
  }
  return out;
}

int cmd_gen(const Globals& g, const ConstructionParams& p) {
  if (g.out.empty()) throw BadConfig("gen needs --out");
  const Construction c = Construction::build(p);
  const Policy B0 = c.initial_tree();
  const json meta{{"construction", {{"n", p.n}, {"r", p.r}, {"s", p.s}, {"t", p.t}}}};
  write_json_file(g.out, graph_to_json(c.graph(), &B0, meta));
  const std::string index = sidecar_path(g.out);
  write_json_file(index, c.index_json());
  std::cout << "wrote " << g.out << " (" << c.graph().num_vertices() << " vertices, " << c.num_edges()
            << " edges) and " << index << "\n";
  return 0;
}

int cmd_run(const Globals& g, ExperimentConfig config, const std::string& rule, const ConstructionParams& p,
            bool have_gen) {
  auto parsed = parse_rule(rule);
  if (!parsed) throw BadConfig("unknown rule: " + rule);
  config.rule = *parsed;
  config.seed = g.seed;
  config.threads = g.threads;
  if (have_gen) config.gen = p;
  // CSV goes to --out, or stdout with the summary on stderr.
  config.out_csv = g.out;
  ExperimentResult result = run_experiment(config);
  if (g.out.empty()) std::cout << records_to_csv(result.records);
  std::ostream& log = g.out.empty() ? std::cerr : std::cout;
  const Summary& s = result.summary;
  log << "rule=" << rule_name(config.rule) << " trials=" << s.count << " mean=" << s.mean << " stderr=" << s.stderr_
      << " min=" << s.min << " max=" << s.max << "\n";
  return 0;
}

int cmd_counter(const Globals& g, const std::string& variant, int n, std::uint64_t trials, bool exact) {
  if (n < 0) throw BadConfig("--n must be non-negative");
  const mpq_class f = f_exact(n);
  if (exact) {
    std::ostringstream out;
    out << "n=" << n << " f_exact=" << to_string(f) << " numerator=" << to_string(mpz_class(f.get_num()))
        << " denominator=" << to_string(mpz_class(f.get_den())) << " approx=" << to_double(f) << "\n";
    emit(g.out, out.str());
    return 0;
  }
  if (variant != "fresh" && variant != "one-perm") throw BadConfig("--variant must be fresh or one-perm");
  if (trials < 1) throw BadConfig("--trials must be at least 1");
  const auto N = full_index_set(n);
  std::vector<std::uint64_t> counts(trials);
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(g.seed, k));
    if (variant == "fresh") {
      counts[k] = rand_count(N, rng);
    } else {
      std::vector<int> perm(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
      rng.shuffle(std::span<int>(perm));
      perm.insert(perm.begin(), 0);
      counts[k] = rand_count_1p(N, BitPermutation(std::move(perm)));
    }
  }
  const Summary s = summarize(counts);
  if (!g.out.empty()) {
    std::ostringstream csv;
    csv << "trial,seed,increments\n";
    for (std::uint64_t k = 0; k < trials; ++k) csv << k << ',' << derive_seed(g.seed, k) << ',' << counts[k] << '\n';
    emit(g.out, csv.str());
  }
  std::cout << "variant=" << variant << " n=" << n << " trials=" << trials << " mean=" << s.mean
            << " stderr=" << s.stderr_ << " f_exact=" << to_string(f) << " (" << to_double(f) << ")\n";
  return 0;
}

int cmd_analyze(const Globals& g, const std::string& graph_path, const std::string& levels, std::uint64_t trials) {
  if (trials < 1) throw BadConfig("--trials must be at least 1");
  const GraphFile file = read_graph_file(graph_path);
  const Construction c = construction_from_file(file);
  const std::vector<int> S = parse_levels(levels);
  CanonicalEstimate est = [&] {
    try {
      return estimate_canonical_probability(c, S, trials, g.seed, g.threads, true);
    } catch (const PreconditionViolation& e) {
      throw BadConfig(e.what());
    }
  }();
  std::ostringstream csv;
  csv << "trial,seed,outcome,index,path_length,pivots\n";
  for (std::uint64_t k = 0; k < trials; ++k) {
    const FollowResult& run = est.runs[k];
    csv << k << ',' << derive_seed(g.seed, k) << ',' << outcome_name(run.outcome) << ',' << run.index << ','
        << run.path.size() << ',' << run.pivots << '\n';
  }
  if (!g.out.empty()) emit(g.out, csv.str());
  const double good1 = static_cast<double>(est.good1);
  std::ostream& log = std::cout;
  log << "trials=" << est.trials << " canonical=" << est.canonical << " frequency=" << est.frequency()
      << " wilson95=[" << est.canonical_ci.lo << "," << est.canonical_ci.hi << "]\n";
  log << "good1=" << est.good1 << " (" << good1 / static_cast<double>(est.trials) << ")"
      << " bad2|good1=" << (est.good1 ? static_cast<double>(est.bad2_given_good1) / good1 : 0.0)
      << " bad3|good1=" << (est.good1 ? static_cast<double>(est.bad3_given_good1) / good1 : 0.0)
      << " bad2_and_bad3=" << est.bad2_and_bad3 << " no_right_child=" << est.no_right_child << " leaf=" << est.leaf
      << "\n";
  return 0;
}

int cmd_verify(const Globals& g, const std::string& check, const std::string& params_text,
               const std::string& params_file) {
  json params = json::object();
  try {
    if (!params_file.empty()) params = read_json_file(params_file);
    if (!params_text.empty()) params = json::parse(params_text);
  } catch (const json::exception& e) {
    throw BadConfig(std::string("bad --params: ") + e.what());
  }
  std::vector<std::string> checks;
  if (check == "all")
    checks = verify_check_ids();
  else
    checks.push_back(check);
  json reports = json::array();
  bool all_passed = true;
  for (const auto& id : checks) {
    const VerifyReport rep = verify(id, check == "all" ? json::object() : params, g.seed, g.threads);
    std::cerr << (rep.passed ? "PASS " : "FAIL ") << id << " cases=" << rep.cases << " violations=" << rep.violations
              << " terminal_violations=" << rep.terminal_violations << " seconds=" << rep.seconds << "\n";
    all_passed = all_passed && rep.passed;
    reports.push_back(rep.to_json());
  }
  const json doc = checks.size() == 1 ? reports.front() : json{{"passed", all_passed}, {"reports", reports}};
  emit(g.out, doc.dump(2) + "\n");
  return all_passed ? 0 : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized pivoting rules on shortest-path instances"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--seed", globals.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", globals.out, "Output file");
  app.fallthrough();

  ConstructionParams params;
  auto* gen = app.add_subcommand("gen", "Write G_{n,r,s,t} as JSON plus a group index sidecar");
  for (auto* sub : {gen}) {
    sub->add_option("--n", params.n)->required()->check(CLI::PositiveNumber);
    sub->add_option("--r", params.r)->required()->check(CLI::PositiveNumber);
    sub->add_option("--s", params.s)->required()->check(CLI::PositiveNumber);
    sub->add_option("--t", params.t)->required()->check(CLI::PositiveNumber);
  }

  auto* run = app.add_subcommand("run", "Run a pivoting rule for many seeded trials");
  ExperimentConfig config;
  std::string rule;
  ConstructionParams run_params;
  run->add_option("--rule", rule, "random-facet|random-facet-nonrec|random-facet-1p|bland|random-bland|dantzig")
      ->required();
  auto* graph_opt = run->add_option("--graph", config.graph_path, "Graph JSON file");
  auto* n_opt = run->add_option("--n", run_params.n, "Build G_{n,r,s,t} instead of --graph")->check(CLI::PositiveNumber);
  run->add_option("--r", run_params.r)->check(CLI::PositiveNumber)->needs(n_opt);
  run->add_option("--s", run_params.s)->check(CLI::PositiveNumber)->needs(n_opt);
  run->add_option("--t", run_params.t)->check(CLI::PositiveNumber)->needs(n_opt);
  graph_opt->excludes(n_opt);
  run->add_option("--trials", config.trials)->capture_default_str();
  run->add_option("--trace", config.trace_path, "Write pivot logs and computation trees as JSON");
  run->add_flag("--timing", config.timing, "Record wall_ns (otherwise 0, keeping output reproducible)");

  auto* counter = app.add_subcommand("counter", "Randomized counters and the exact f(n)");
  std::string variant = "fresh";
  int counter_n = 0;
  std::uint64_t counter_trials = 1000;
  bool exact = false;
  counter->add_option("--variant", variant, "fresh|one-perm")->capture_default_str();
  counter->add_option("--n", counter_n)->required();
  counter->add_option("--trials", counter_trials)->capture_default_str();
  counter->add_flag("--exact", exact, "Print f(n) as an exact fraction");

  auto* analyze = app.add_subcommand("analyze", "Canonical-path follower statistics");
  std::string analyze_graph, levels;
  std::uint64_t analyze_trials = 100;
  analyze->add_option("--graph", analyze_graph)->required();
  analyze->add_option("--S", levels, "Bit levels, comma separated")->required();
  analyze->add_option("--trials", analyze_trials)->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Run a lemma check and print a JSON report");
  std::string check, params_text, params_file;
  verify_cmd->add_option("check", check, "Check id, or 'all'")->required();
  verify_cmd->add_option("--params", params_text, "JSON object overriding check parameters");
  verify_cmd->add_option("--params-file", params_file, "File with the JSON parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(globals, params);
    if (run->parsed()) return cmd_run(globals, config, rule, run_params, n_opt->count() > 0);
    if (counter->parsed()) return cmd_counter(globals, variant, counter_n, counter_trials, exact);
    if (analyze->parsed()) return cmd_analyze(globals, analyze_graph, levels, analyze_trials);
    if (verify_cmd->parsed()) return cmd_verify(globals, check, params_text, params_file);
  } catch (const UnknownCheck& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
