#include "facetlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "facetlab/analysis.hpp"
#include "facetlab/counters.hpp"
#include "facetlab/lp.hpp"
#include "facetlab/oracles.hpp"
#include "facetlab/parallel.hpp"
#include "facetlab/permutation.hpp"
#include "facetlab/random_graphs.hpp"
#include "facetlab/rational.hpp"
#include "facetlab/shortest_paths.hpp"

namespace facetlab {

using nlohmann::json;

Summary summarize(const std::vector<std::uint64_t>& values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  double sum = 0.0;
  for (auto v : values) sum += static_cast<double>(v);
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (auto v : values) ss += (static_cast<double>(v) - s.mean) * (static_cast<double>(v) - s.mean);
    s.stderr_ = std::sqrt(ss / static_cast<double>(s.count - 1) / static_cast<double>(s.count));
  }
  return s;
}

void validate_config(const ExperimentConfig& config) {
  if (config.trials < 1) throw BadConfig("trials must be at least 1");
  if (!config.gen && config.graph_path.empty()) throw BadConfig("no graph file and no construction parameters");
  if (config.gen && !config.graph_path.empty()) throw BadConfig("give either a graph file or construction parameters");
  if (config.threads < 1) throw BadConfig("threads must be at least 1");
}

RunResult run_rule(const Digraph& g, const Policy& B0, Rule rule, Rng& rng, bool record_tree) {
  const EdgeSet all(g.num_edges(), true);
  RunResult run;
  switch (rule) {
    case Rule::RandomFacet:
      run = random_facet(g, all, B0, rng, FacetOptions{record_tree});
      break;
    case Rule::RandomFacetNonrec:
      run = random_facet_nonrec(g, B0, rng);
      break;
    case Rule::RandomFacet1P: {
      const PermutationFn sigma = PermutationFn::uniform(g.num_edges(), rng);
      run = random_facet_1p(g, all, B0, sigma, FacetOptions{record_tree});
      break;
    }
    case Rule::Bland:
      run = bland_rec(g, 1, B0, PermutationFn::identity(g.num_edges()));
      break;
    case Rule::RandomBland:
      run = random_bland(g, B0, rng);
      break;
    case Rule::Dantzig:
      run = dantzig(g, B0);
      break;
  }
  run.rule = rule;
  if (!is_optimal_within(g, all, run.final_policy))
    throw InvariantViolation(rule_name(rule) + " stopped at a non-optimal tree");
  return run;
}

std::string records_to_csv(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  out << "trial,seed,rule,pivots,wall_ns\n";
  for (const auto& r : records)
    out << r.trial << ',' << r.seed << ',' << rule_name(r.rule) << ',' << r.pivots << ',' << r.wall_ns << '\n';
  return out.str();
}

json run_to_json(const Digraph& g, const RunResult& run, std::uint64_t trial) {
  json doc;
  doc["trial"] = trial;
  doc["seed"] = run.seed;
  doc["rule"] = rule_name(run.rule);
  doc["pivots"] = run.pivots;
  json log = json::array();
  for (const auto& p : run.log) {
    log.push_back({{"entering", p.entering},
                   {"leaving", p.leaving},
                   {"entering_name", g.edge(p.entering).name},
                   {"leaving_name", g.edge(p.leaving).name}});
  }
  doc["pivot_log"] = std::move(log);
  doc["final_policy"] = run.final_policy.edges();
  if (run.tree) {
    json nodes = json::array();
    for (const auto& u : run.tree->nodes) {
      json node{{"parent", u.parent}, {"is_right", u.is_right}, {"picked", u.picked},
                {"left", u.left},     {"right", u.right}};
      if (u.right >= 0) node["pivot"] = {u.pivot.entering, u.pivot.leaving};
      nodes.push_back(std::move(node));
    }
    doc["computation_tree"] = {{"root_F", run.tree->root_F.ids()},
                               {"root_B", run.tree->root_B.edges()},
                               {"switch_count", run.tree->switch_count()},
                               {"nodes", std::move(nodes)}};
  }
  return doc;
}

ExperimentResult run_trials(const Digraph& g, const Policy& B0, const ExperimentConfig& config) {
  validate_config(ExperimentConfig{config.rule, "-", std::nullopt, config.trials, config.seed, config.threads,
                                   config.timing, {}, {}});
  const bool tracing = !config.trace_path.empty();
  ExperimentResult out;
  out.records.resize(config.trials);
  std::vector<json> traces(tracing ? config.trials : 0);
  parallel_for(config.trials, config.threads, [&](std::uint64_t k) {
    const std::uint64_t seed = derive_seed(config.seed, k);
    Rng rng(seed);
    const auto start = std::chrono::steady_clock::now();
    RunResult run = run_rule(g, B0, config.rule, rng, tracing);
    const auto stop = std::chrono::steady_clock::now();
    run.seed = seed;
    if (run.tree) {
      if (auto err = validate_tree(g, *run.tree, run)) throw InvariantViolation("computation tree: " + *err);
    }
    ResultRecord& rec = out.records[k];
    rec.trial = k;
    rec.seed = seed;
    rec.rule = config.rule;
    rec.pivots = run.pivots;
    rec.wall_ns = config.timing ? std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count() : 0;
    if (tracing) traces[k] = run_to_json(g, run, k);
  });
  std::vector<std::uint64_t> pivots;
  for (const auto& r : out.records) pivots.push_back(r.pivots);
  out.summary = summarize(pivots);
  if (tracing) {
    out.trace = {{"rule", rule_name(config.rule)},
                 {"master_seed", config.seed},
                 {"initial_policy", B0.edges()},
                 {"trials", std::move(traces)}};
  }
  return out;
}

Construction construction_from_file(const GraphFile& file) {
  if (!file.metadata.contains("construction")) throw BadConfig("graph file has no construction parameters");
  const json& p = file.metadata.at("construction");
  Construction c = [&] {
    try {
      return Construction::build(p.at("n").get<int>(), p.at("r").get<int>(), p.at("s").get<int>(),
                                 p.at("t").get<int>());
    } catch (const json::exception& e) {
      throw BadConfig(std::string("bad construction parameters: ") + e.what());
    }
  }();
  const Digraph& a = c.graph();
  const Digraph& b = file.graph;
  bool same = a.num_vertices() == b.num_vertices() && a.num_edges() == b.num_edges() && a.scale() == b.scale() &&
              a.target() == b.target();
  for (std::size_t e = 0; same && e < a.num_edges(); ++e) {
    const Edge& x = a.edge(static_cast<EdgeId>(e));
    const Edge& y = b.edge(static_cast<EdgeId>(e));
    same = x.tail == y.tail && x.head == y.head && x.cost == y.cost && x.name == y.name;
  }
  if (!same) throw BadConfig("graph file does not match its recorded construction parameters");
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  std::optional<Construction> built;
  std::optional<GraphFile> file;
  const Digraph* g = nullptr;
  std::optional<Policy> start;
  if (config.gen) {
    built.emplace(Construction::build(*config.gen));
    g = &built->graph();
    start = built->initial_tree();
  } else {
    file.emplace(read_graph_file(config.graph_path));
    g = &file->graph;
    start = file->initial_policy ? *file->initial_policy : default_start_policy(*g);
  }
  ExperimentResult result = run_trials(*g, *start, config);
  if (!config.out_csv.empty()) {
    std::ofstream out(config.out_csv, std::ios::binary);
    if (!out) throw IOFailure("cannot write " + config.out_csv);
    out << records_to_csv(result.records);
    if (!out) throw IOFailure("write failed for " + config.out_csv);
  }
  if (!config.trace_path.empty()) write_json_file(config.trace_path, result.trace);
  return result;
}

json VerifyReport::to_json() const {
  return {{"check", check},
          {"passed", passed},
          {"cases", cases},
          {"violations", violations},
          {"terminal_violations", terminal_violations},
          {"seconds", seconds},
          {"details", details}};
}

const std::vector<std::string>& verify_check_ids() {
  static const std::vector<std::string> ids{
      "recurrence",        "counters-equality", "bf-optimal",     "make-switch",
      "bland-equiv",       "rf-equiv",          "lp-correspondence", "technical-star",
      "technical-bland",   "drop-lemma",        "well-behaved-prob", "switch-identity"};
  return ids;
}

namespace {

// Records failures (the first few in full) and terminal-state checks.
class Tally {
 public:
  explicit Tally(VerifyReport& report) : report_(report) {}

  void pass() { ++report_.cases; }
  void fail(json what) {
    ++report_.cases;
    ++report_.violations;
    if (failures_.size() < 10) failures_.push_back(std::move(what));
  }
  void check(bool ok, const std::function<json()>& what) { ok ? pass() : fail(what()); }
  void terminal(const Digraph& g, const EdgeSet& F, const Policy& B, const std::string& where) {
    if (!is_optimal_within(g, F, B)) {
      ++report_.terminal_violations;
      if (failures_.size() < 10) failures_.push_back({{"terminal", where}});
    }
  }
  void finish() {
    if (!failures_.empty()) report_.details["failures"] = failures_;
    report_.passed = report_.violations == 0 && report_.terminal_violations == 0 && report_.cases > 0;
  }

 private:
  VerifyReport& report_;
  json failures_ = json::array();
};

template <typename T>
T param(const json& params, const char* key, T fallback) {
  return params.contains(key) ? params.at(key).get<T>() : fallback;
}

void check_recurrence(VerifyReport& rep, const json& p) {
  Tally tally(rep);
  const int n_max = param(p, "n_max", 200);
  const auto table = f_recurrence_table(n_max);
  for (int n = 0; n <= n_max; ++n) {
    const mpq_class exact = f_exact(n);
    tally.check(exact == table[static_cast<std::size_t>(n)], [&] {
      return json{{"n", n}, {"f_exact", to_string(exact)}, {"f_recurrence", to_string(table[static_cast<std::size_t>(n)])}};
    });
  }
  rep.details["n_max"] = n_max;
  rep.details["f_at_n_max"] = to_string(table.back());
  tally.finish();
}

void check_counters_equality(VerifyReport& rep, const json& p) {
  Tally tally(rep);
  const int n_max = param(p, "n_max", 8);
  json per_n = json::array();
  for (int n = 1; n <= n_max; ++n) {
    std::vector<int> values(static_cast<std::size_t>(n));
    std::iota(values.begin(), values.end(), 1);
    const std::vector<int> N = full_index_set(n);
    mpz_class total = 0;
    mpz_class count = 0;
    CounterState state(n);
    do {
      std::vector<int> one_based{0};
      one_based.insert(one_based.end(), values.begin(), values.end());
      std::fill(state.bits.begin(), state.bits.end(), 0);
      state.increments = 0;
      total += static_cast<unsigned long>(rand_count_1p(state, N, BitPermutation(std::move(one_based))));
      ++count;
    } while (std::next_permutation(values.begin(), values.end()));
    const mpq_class mean = make_ratio(total, count);
    const mpq_class expected = f_exact(n);
    per_n.push_back({{"n", n}, {"permutations", to_string(count)}, {"mean", to_string(mean)}});
    tally.check(mean == expected,
                [&] { return json{{"n", n}, {"mean", to_string(mean)}, {"f_exact", to_string(expected)}}; });
  }
  rep.details["per_n"] = std::move(per_n);
  tally.finish();
}

std::vector<int> int_list(const json& p, const char* key, std::vector<int> fallback) {
  return p.contains(key) ? p.at(key).get<std::vector<int>>() : fallback;
}

void check_bf_optimal(VerifyReport& rep, const json& p, std::uint64_t seed, unsigned threads) {
  const auto ns = int_list(p, "n", {1, 2, 3, 4});
  const auto rs = int_list(p, "r", {1, 2, 3});
  const auto ss = int_list(p, "s", {1, 2, 3});
  const auto ts = int_list(p, "t", {1, 2, 3});
  const int samples = param(p, "samples", 100);
  std::vector<ConstructionParams> grid;
  for (int n : ns)
    for (int r : rs)
      for (int s : ss)
        for (int t : ts) grid.push_back({n, r, s, t});
  struct Outcome {
    int mismatches = 0;
    json first;
    std::vector<int> reset_hist;
  };
  std::vector<Outcome> outcomes(grid.size());
  parallel_for(grid.size(), threads, [&](std::uint64_t k) {
    const Construction c = Construction::build(grid[k]);
    Rng rng(derive_seed(seed, k));
    Outcome& o = outcomes[k];
    o.reset_hist.assign(static_cast<std::size_t>(c.n()) + 1, 0);
    for (int q = 0; q < samples; ++q) {
      const EdgeSet F = random_functional_set(c, rng);
      ++o.reset_hist[static_cast<std::size_t>(c.reset_level(F))];
      const EdgeSet bf = c.bf_edge_set(F);
      const EdgeSet opt = optimal_edge_set(c.graph(), F);
      if (!(bf == opt)) {
        if (o.mismatches++ == 0) {
          o.first = {{"params", {c.n(), c.r(), c.s(), c.t()}}, {"F", F.ids()}, {"bf", bf.ids()}, {"optimal", opt.ids()}};
        }
      }
    }
  });
  Tally tally(rep);
  std::vector<int> reset_hist(static_cast<std::size_t>(*std::max_element(ns.begin(), ns.end())) + 1, 0);
  for (const Outcome& o : outcomes) {
    for (int q = 0; q < samples - o.mismatches; ++q) tally.pass();
    for (int q = 0; q < o.mismatches; ++q) tally.fail(q == 0 ? o.first : json{{"repeat", true}});
    for (std::size_t i = 0; i < o.reset_hist.size(); ++i) reset_hist[i] += o.reset_hist[i];
  }
  rep.details["configurations"] = grid.size();
  rep.details["samples_per_configuration"] = samples;
  rep.details["reset_level_histogram"] = reset_hist;
  tally.finish();
}

void check_make_switch(VerifyReport& rep, const json& p, std::uint64_t seed) {
  Tally tally(rep);
  const int samples = param(p, "samples", 500);
  const int n_max = param(p, "n_max", 4);
  const int rst_max = param(p, "rst_max", 3);
  Rng rng(seed);
  std::map<std::tuple<int, int, int, int>, Construction> cache;
  auto pick_construction = [&]() -> const Construction& {
    auto dim = [&](int hi) { return 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(hi))); };
    const int n = dim(n_max), r = dim(rst_max), s = dim(rst_max), t = dim(rst_max);
    auto key = std::make_tuple(n, r, s, t);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, Construction::build(n, r, s, t)).first;
    return it->second;
  };
  int qualified[2] = {0, 0};
  std::uint64_t attempts = 0;
  for (int part = 0; part < 2; ++part) {
    while (qualified[part] < samples) {
      if (++attempts > 200ULL * static_cast<std::uint64_t>(samples)) throw InvariantViolation("make-switch sampler stalled");
      const Construction& c = pick_construction();
      EdgeSet F = random_functional_set(c, rng);
      const int i = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.n())));
      EdgeId e = kNoEdge;
      if (part == 0) {
        const int j = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.rs())));
        e = c.b1_edge(i, j);
        F.erase(e);
        for (int jj = j + 1; jj <= c.rs(); ++jj) F.insert(c.b1_edge(i, jj));
      } else {
        const int j = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.r())));
        const int k = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.s())));
        e = c.a1_edge(i, j, k);
        F.erase(e);
        for (int kk = k + 1; kk <= c.s(); ++kk) F.insert(c.a1_edge(i, j, kk));
        for (EdgeId b : c.b1(i)) F.insert(b);
      }
      if (i < c.reset_level(F)) continue;
      ++qualified[part];
      const Policy B = random_policy_within(c.graph(), c.bf_edge_set(F), rng);
      const DistanceVector y = tree_distances(c.graph(), B);
      tally.check(is_improving(c.graph(), y, e), [&] {
        return json{{"part", part == 0 ? "i" : "ii"},
                    {"params", {c.n(), c.r(), c.s(), c.t()}},
                    {"edge", c.graph().edge(e).name},
                    {"F", F.ids()},
                    {"B", B.edges()}};
      });
    }
  }
  rep.details["qualifying_part_i"] = qualified[0];
  rep.details["qualifying_part_ii"] = qualified[1];
  rep.details["attempts"] = attempts;
  tally.finish();
}

void check_bland_equiv(VerifyReport& rep, const json& p, std::uint64_t seed) {
  Tally tally(rep);
  const int instances = param(p, "instances", 100);
  const int max_vertices = param(p, "max_vertices", 12);
  const int sigmas = param(p, "construction_sigmas", 20);
  const auto cp = int_list(p, "construction", {2, 2, 2, 2});
  Rng rng(seed);
  auto compare = [&](const Digraph& g, const Policy& B0, const PermutationFn& sigma, const std::string& where) {
    const RunResult rec = bland_rec(g, 1, B0, sigma);
    const RunResult nonrec = bland_nonrec(g, 1, B0, sigma);
    tally.check(rec.log == nonrec.log && rec.final_policy == nonrec.final_policy, [&] {
      return json{{"instance", where}, {"rec_pivots", rec.pivots}, {"nonrec_pivots", nonrec.pivots}};
    });
    const EdgeSet all(g.num_edges(), true);
    tally.terminal(g, all, rec.final_policy, where + " rec");
    tally.terminal(g, all, nonrec.final_policy, where + " nonrec");
    return rec.pivots;
  };
  std::uint64_t dag_pivots = 0;
  for (int q = 0; q < instances; ++q) {
    const int inner = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_vertices - 2)));
    const int extra = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(2 * inner + 1)));
    const Digraph g = random_dag(inner, extra, rng);
    const Policy B0 = random_policy(g, rng);
    const PermutationFn sigma = PermutationFn::uniform(g.num_edges(), rng);
    dag_pivots += compare(g, B0, sigma, "dag " + std::to_string(q));
  }
  const Construction c = Construction::build(cp.at(0), cp.at(1), cp.at(2), cp.at(3));
  std::uint64_t construction_pivots = 0;
  for (int q = 0; q < sigmas; ++q) {
    const PermutationFn sigma = PermutationFn::uniform(c.num_edges(), rng);
    construction_pivots += compare(c.graph(), c.initial_tree(), sigma, "construction sigma " + std::to_string(q));
  }
  rep.details["dag_instances"] = instances;
  rep.details["dag_pivots_total"] = dag_pivots;
  rep.details["construction"] = cp;
  rep.details["construction_sigmas"] = sigmas;
  rep.details["construction_pivots_total"] = construction_pivots;
  tally.finish();
}

// Random DAG with a random start tree that is not already optimal.
std::pair<Digraph, Policy> draw_dag_instance(int inner, int extra, Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Digraph g = random_dag(inner, extra, rng);
    Policy B0 = random_policy(g, rng);
    if (!is_optimal_within(g, EdgeSet(g.num_edges(), true), B0)) return {std::move(g), std::move(B0)};
  }
  throw PreconditionViolation("no non-optimal start tree found for a random DAG");
}

void check_rf_equiv(VerifyReport& rep, const json& p, std::uint64_t seed) {
  Tally tally(rep);
  const int instances = param(p, "instances", 20);
  const int max_non_tree = param(p, "max_non_tree", 7);
  const int max_inner = param(p, "max_inner", 6);
  const int engine_max_non_tree = param(p, "engine_max_non_tree", 5);
  Rng rng(seed);
  json cases = json::array();
  for (int q = 0; q < instances; ++q) {
    const int inner = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_inner - 1)));
    const int extra = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_non_tree)));
    const auto [g, B0] = draw_dag_instance(inner, extra, rng);
    const EdgeSet all(g.num_edges(), true);
    const auto rec = exact_pivots_recursive(g, all, B0);
    const auto nonrec = exact_pivots_nonrecursive(g, B0);
    json row{{"vertices", g.num_vertices()},
             {"edges", g.num_edges()},
             {"recursive", to_string(rec.expected_pivots)},
             {"nonrecursive", to_string(nonrec.expected_pivots)}};
    bool ok = rec.expected_pivots == nonrec.expected_pivots;
    if (extra <= engine_max_non_tree) {
      const auto engine = enumerate_engine_pivots(g, all, B0);
      row["engine"] = to_string(engine.expected_pivots);
      ok = ok && engine.expected_pivots == rec.expected_pivots;
    }
    tally.check(ok, [&] { return row; });
    cases.push_back(std::move(row));
  }
  rep.details["instances"] = std::move(cases);
  tally.finish();
}

void check_lp_correspondence(VerifyReport& rep, const json& p, std::uint64_t seed) {
  Tally tally(rep);
  const int instances = param(p, "instances", 20);
  const int max_inner = param(p, "max_inner", 8);
  Rng setup(seed);
  std::uint64_t steps_checked = 0;
  std::uint64_t total_pivots = 0;
  for (int q = 0; q < instances; ++q) {
    const int inner = 2 + static_cast<int>(setup.uniform_index(static_cast<std::uint64_t>(max_inner - 1)));
    const int extra = 1 + static_cast<int>(setup.uniform_index(static_cast<std::uint64_t>(2 * inner)));
    const auto [g, B0] = draw_dag_instance(inner, extra, setup);
    const std::uint64_t run_seed = setup.next();
    const EdgeSet all(g.num_edges(), true);

    Rng graph_rng(run_seed);
    const RunResult graph_run = random_facet(g, all, B0, graph_rng);
    tally.terminal(g, all, graph_run.final_policy, "graph engine, instance " + std::to_string(q));

    const lp::ShortestPathLP sp = lp::sp_to_lp(g);
    std::vector<int> columns(g.num_edges());
    std::iota(columns.begin(), columns.end(), 0);
    bool duals_ok = true;
    auto check_basis = [&](const lp::Basis& basis) {
      ++steps_checked;
      const Policy tree = lp::policy_from_basis(g, basis);
      const DistanceVector y = tree_distances(g, tree);
      const lp::ReducedCosts rc = lp::reduced_costs(sp.lp, basis);
      const mpz_class scale(static_cast<long>(g.scale()));
      for (std::size_t r = 0; r < sp.vertex_of_row.size(); ++r) {
        const mpq_class expect =
            make_ratio(mpz_class(static_cast<long>(y[static_cast<std::size_t>(sp.vertex_of_row[r])])), scale);
        if (rc.y[r] != expect) duals_ok = false;
      }
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(static_cast<EdgeId>(e));
        const Cost cbar = ed.cost + y[static_cast<std::size_t>(ed.head)] - y[static_cast<std::size_t>(ed.tail)];
        const mpq_class expect = make_ratio(mpz_class(static_cast<long>(cbar)), scale);
        if (rc.cbar[e] != expect) duals_ok = false;
      }
      const lp::BasicSolution x = lp::basic_solution(sp.lp, basis);
      if (!x.feasible) duals_ok = false;
    };
    const lp::Basis start = lp::basis_from_policy(sp, B0);
    check_basis(start);
    Rng lp_rng(run_seed);
    const lp::LpRun lp_run = lp::random_facet_lp(sp.lp, columns, start, lp_rng,
                                                 [&](const lp::Basis& after, int, int) { check_basis(after); });
    bool same = lp_run.pivots == graph_run.pivots && lp_run.pivot_log.size() == graph_run.log.size();
    for (std::size_t k = 0; same && k < graph_run.log.size(); ++k) {
      same = lp_run.pivot_log[k].first == graph_run.log[k].entering &&
             lp_run.pivot_log[k].second == graph_run.log[k].leaving;
    }
    same = same && lp::policy_from_basis(g, lp_run.basis) == graph_run.final_policy;
    total_pivots += graph_run.pivots;
    tally.check(same && duals_ok, [&] {
      return json{{"instance", q}, {"same_pivots", same}, {"duals_ok", duals_ok},
                  {"graph_pivots", graph_run.pivots}, {"lp_pivots", lp_run.pivots}};
    });
  }
  rep.details["steps_checked"] = steps_checked;
  rep.details["total_pivots"] = total_pivots;
  tally.finish();
}

struct ConfigGrid {
  std::vector<int> ns;
  std::vector<int> rsts;
  int samples;
};

ConfigGrid lower_bound_grid(const json& p) {
  return {int_list(p, "n", {3, 4, 5, 6}), int_list(p, "rst", {2, 3}), param(p, "samples", 200)};
}

void check_technical_star(VerifyReport& rep, const json& p, std::uint64_t seed, unsigned threads) {
  const ConfigGrid grid = lower_bound_grid(p);
  std::vector<std::pair<int, int>> configs;
  for (int n : grid.ns)
    for (int x : grid.rsts) configs.emplace_back(n, x);
  struct Outcome {
    std::uint64_t violations = 0, terminal = 0, pivots = 0, bound = 0;
    double min_slack = 1e300;
    json first;
  };
  std::vector<Outcome> outcomes(configs.size());
  parallel_for(configs.size(), threads, [&](std::uint64_t k) {
    const auto [n, x] = configs[k];
    const Construction c = Construction::build(n, x, x, x);
    const Policy B0 = c.initial_tree();
    const EdgeSet all(c.num_edges(), true);
    const auto N = full_index_set(n);
    Rng rng(derive_seed(seed, k));
    Outcome& o = outcomes[k];
    for (int q = 0; q < grid.samples; ++q) {
      const PermutationFn sigma = sample_well_behaved(c, rng);
      const RunResult run = random_facet_1p(c.graph(), all, B0, sigma);
      const std::uint64_t bound = rand_count_1p(N, induced_permutation(sigma, c));
      o.pivots += run.pivots;
      o.bound += bound;
      o.min_slack = std::min(o.min_slack, static_cast<double>(run.pivots) - static_cast<double>(bound));
      if (run.pivots < bound && o.violations++ == 0)
        o.first = {{"n", n}, {"rst", x}, {"pivots", run.pivots}, {"bound", bound}, {"sigma", sigma.order()}};
      if (!is_optimal_within(c.graph(), all, run.final_policy)) ++o.terminal;
    }
  });
  Tally tally(rep);
  json rows = json::array();
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const Outcome& o = outcomes[k];
    for (std::uint64_t q = o.violations; q < static_cast<std::uint64_t>(grid.samples); ++q) tally.pass();
    for (std::uint64_t q = 0; q < o.violations; ++q) tally.fail(q == 0 ? o.first : json{{"repeat", true}});
    rep.terminal_violations += o.terminal;
    rows.push_back({{"n", configs[k].first},
                    {"rst", configs[k].second},
                    {"mean_pivots", static_cast<double>(o.pivots) / grid.samples},
                    {"mean_counter_bound", static_cast<double>(o.bound) / grid.samples},
                    {"min_slack", o.min_slack}});
  }
  rep.details["configurations"] = std::move(rows);
  rep.details["samples_per_configuration"] = grid.samples;
  tally.finish();
}

// Checks the fixed-region lemma at every pivot and, when asked, the drop
// lemma on every call whose hypotheses hold. Drop checks are also tallied
// separately for calls where bit p is not already set in the input tree,
// that is a1_p is not contained in F(sigma, sigma(a1_p)+1) united with B.
// The stated hypotheses do not exclude a set bit p, but the argument for
// the containment needs it.
class LemmaObserver : public BlandObserver {
 public:
  LemmaObserver(const Construction& c, const PermutationFn& sigma, bool drop)
      : c_(c), g_(c.graph()), sigma_(sigma), drop_(drop) {}

  void on_pivot(int ell, EdgeId e, const Policy& after) override {
    const EdgeRole& role = c_.role(e);
    std::vector<VertexId> region;
    if (role.kind == EdgeKind::B1)
      region = c_.unreaching_b(role.i, role.j);
    else if (role.kind == EdgeKind::A1)
      region = c_.unreaching_a(role.i, role.j, role.k);
    else
      return;
    ++fixed_checks;
    if (!is_fixed_region(g_, region, after, suffix_set(sigma_, ell))) ++fixed_violations;
  }

  void on_enter(int ell, const Policy& B) override {
    Pending pending;
    if (drop_) {
      const EdgeSet F = suffix_set(sigma_, ell);
      const EdgeSet FB = F | B.edge_set(g_);
      const int reset = c_.reset_level(FB);
      for (int p = std::max(1, reset + 1); p <= c_.n(); ++p) {
        if (!hypotheses_hold(ell, p, F, FB, B)) continue;
        const EdgeSet later = suffix_set(sigma_, sigma_a1(sigma_, c_, p) + 1);
        pending.levels.push_back({p, c_.a1_sqsubseteq(p, later | B.edge_set(g_))});
      }
      if (!pending.levels.empty()) pending.F = F;
    }
    stack_.push_back(std::move(pending));
  }

  void on_return(int ell, const Policy& in, const Policy& out) override {
    Pending pending = std::move(stack_.back());
    stack_.pop_back();
    for (const auto& [p, bit_p_set] : pending.levels) {
      std::optional<EdgeId> bad;
      for (int i = 1; i < p && !bad; ++i) {
        for (EdgeId e : c_.b1(i)) {
          if (out.contains(g_, e) && !pending.F.contains(e)) bad = e;
        }
      }
      json* first = nullptr;
      ++drop_checks;
      if (bad && drop_violations++ == 0) first = &first_drop;
      if (!bit_p_set) {
        ++proof_checks;
        if (bad && proof_violations++ == 0) first = &first_proof;
      }
      if (first)
        *first = {{"ell", ell},
                  {"p", p},
                  {"bit_p_set_in_input", bit_p_set},
                  {"edge", g_.edge(*bad).name},
                  {"sigma_edge", sigma_(*bad)},
                  {"edge_in_input_tree", in.contains(g_, *bad)},
                  {"sigma", sigma_.order()}};
    }
  }

  std::uint64_t fixed_checks = 0, fixed_violations = 0;
  std::uint64_t drop_checks = 0, drop_violations = 0, proof_checks = 0, proof_violations = 0;
  json first_drop, first_proof;

 private:
  struct Level {
    int p;
    bool bit_p_set;
  };
  struct Pending {
    std::vector<Level> levels;
    EdgeSet F;
  };

  bool hypotheses_hold(int ell, int p, const EdgeSet& F, const EdgeSet& FB, const Policy& B) const {
    if (ell > sigma_a1(sigma_, c_, p)) return false;
    for (int i = p + 1; i <= c_.n(); ++i) {
      if (!c_.bit_is_one(i, FB, B)) return false;
    }
    // Smallest j0 with b1_{p,j} in B for all j >= j0.
    int j0 = c_.rs() + 1;
    while (j0 > 1 && B.contains(g_, c_.b1_edge(p, j0 - 1))) --j0;
    if (j0 > c_.rs()) return false;
    for (int jp = j0; jp <= c_.rs(); ++jp) {
      bool below_in_F = true;
      for (int j = 1; j < jp && below_in_F; ++j) below_in_F = F.contains(c_.b1_edge(p, j));
      if (!below_in_F) return false;  // larger j' only adds requirements
      if (is_fixed_region(g_, c_.unreaching_b(p, jp), B, F)) return true;
    }
    return false;
  }

  const Construction& c_;
  const Digraph& g_;
  const PermutationFn& sigma_;
  bool drop_;
  std::vector<Pending> stack_;
};

void check_technical_bland(VerifyReport& rep, const json& p, std::uint64_t seed, unsigned threads) {
  const ConfigGrid grid = lower_bound_grid(p);
  const int lemma_n_max = param(p, "lemma_n_max", 4);
  const int lemma_samples = param(p, "lemma_samples", 20);
  std::vector<std::pair<int, int>> configs;
  for (int n : grid.ns)
    for (int x : grid.rsts) configs.emplace_back(n, x);
  struct Outcome {
    std::uint64_t violations = 0, terminal = 0, pivots = 0, bound = 0;
    std::uint64_t fixed_checks = 0, fixed_violations = 0;
    json first;
  };
  std::vector<Outcome> outcomes(configs.size());
  parallel_for(configs.size(), threads, [&](std::uint64_t k) {
    const auto [n, x] = configs[k];
    const Construction c = Construction::build(n, x, x, x);
    const Policy B0 = c.initial_tree();
    const EdgeSet all(c.num_edges(), true);
    const auto N = full_index_set(n);
    Rng rng(derive_seed(seed, k));
    Outcome& o = outcomes[k];
    for (int q = 0; q < grid.samples; ++q) {
      const PermutationFn sigma = sample_well_behaved(c, rng);
      RunResult run;
      if (n <= lemma_n_max && q < lemma_samples) {
        LemmaObserver obs(c, sigma, false);
        run = bland_rec(c.graph(), 1, B0, sigma, &obs);
        o.fixed_checks += obs.fixed_checks;
        o.fixed_violations += obs.fixed_violations;
      } else {
        run = bland_nonrec(c.graph(), 1, B0, sigma);
      }
      const std::uint64_t bound = rand_count_1p(N, induced_permutation(sigma, c));
      o.pivots += run.pivots;
      o.bound += bound;
      if (run.pivots < bound && o.violations++ == 0)
        o.first = {{"n", n}, {"rst", x}, {"pivots", run.pivots}, {"bound", bound}, {"sigma", sigma.order()}};
      if (!is_optimal_within(c.graph(), all, run.final_policy)) ++o.terminal;
    }
  });
  Tally tally(rep);
  json rows = json::array();
  std::uint64_t fixed_checks = 0, fixed_violations = 0;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const Outcome& o = outcomes[k];
    for (std::uint64_t q = o.violations; q < static_cast<std::uint64_t>(grid.samples); ++q) tally.pass();
    for (std::uint64_t q = 0; q < o.violations; ++q) tally.fail(q == 0 ? o.first : json{{"repeat", true}});
    rep.terminal_violations += o.terminal;
    fixed_checks += o.fixed_checks;
    fixed_violations += o.fixed_violations;
    rows.push_back({{"n", configs[k].first},
                    {"rst", configs[k].second},
                    {"mean_pivots", static_cast<double>(o.pivots) / grid.samples},
                    {"mean_counter_bound", static_cast<double>(o.bound) / grid.samples}});
  }
  // Fixed-region checks count as cases too.
  for (std::uint64_t q = 0; q < fixed_checks - fixed_violations; ++q) tally.pass();
  if (fixed_violations) tally.fail({{"fixed_region_violations", fixed_violations}});
  rep.details["configurations"] = std::move(rows);
  rep.details["samples_per_configuration"] = grid.samples;
  rep.details["fixed_region_checks"] = fixed_checks;
  tally.finish();
}

// Drop lemma on traced recursive Bland runs. `literal` selects the
// hypotheses exactly as stated; otherwise only calls where bit p is not
// already set in the input tree are judged. Both tallies are reported.
void check_drop_lemma(VerifyReport& rep, const json& p, std::uint64_t seed, unsigned threads) {
  const auto ns = param(p, "n", std::vector<int>{2, 3, 4});
  const auto rsts = param(p, "rst", std::vector<int>{2, 3});
  const int samples = param(p, "samples", 20);
  const bool literal = param(p, "literal", false);
  std::vector<std::pair<int, int>> configs;
  for (int n : ns)
    for (int x : rsts) configs.emplace_back(n, x);
  struct Outcome {
    std::uint64_t drop_checks = 0, drop_violations = 0, proof_checks = 0, proof_violations = 0, terminal = 0;
    json first_drop, first_proof;
  };
  std::vector<Outcome> outcomes(configs.size());
  parallel_for(configs.size(), threads, [&](std::uint64_t k) {
    const auto [n, x] = configs[k];
    const Construction c = Construction::build(n, x, x, x);
    const Policy B0 = c.initial_tree();
    const EdgeSet all(c.num_edges(), true);
    Rng rng(derive_seed(seed, k));
    Outcome& o = outcomes[k];
    for (int q = 0; q < samples; ++q) {
      const PermutationFn sigma = sample_well_behaved(c, rng);
      LemmaObserver obs(c, sigma, true);
      const RunResult run = bland_rec(c.graph(), 1, B0, sigma, &obs);
      if (!is_optimal_within(c.graph(), all, run.final_policy)) ++o.terminal;
      o.drop_checks += obs.drop_checks;
      o.proof_checks += obs.proof_checks;
      if (obs.drop_violations && o.first_drop.is_null()) o.first_drop = obs.first_drop;
      if (obs.proof_violations && o.first_proof.is_null()) o.first_proof = obs.first_proof;
      o.drop_violations += obs.drop_violations;
      o.proof_violations += obs.proof_violations;
    }
  });
  Tally tally(rep);
  std::uint64_t drop_checks = 0, drop_violations = 0, proof_checks = 0, proof_violations = 0;
  json first_drop, first_proof;
  for (const Outcome& o : outcomes) {
    rep.terminal_violations += o.terminal;
    drop_checks += o.drop_checks;
    drop_violations += o.drop_violations;
    proof_checks += o.proof_checks;
    proof_violations += o.proof_violations;
    if (first_drop.is_null()) first_drop = o.first_drop;
    if (first_proof.is_null()) first_proof = o.first_proof;
  }
  const std::uint64_t checks = literal ? drop_checks : proof_checks;
  const std::uint64_t violations = literal ? drop_violations : proof_violations;
  for (std::uint64_t q = 0; q < checks - violations; ++q) tally.pass();
  if (violations) tally.fail(literal ? first_drop : first_proof);
  for (std::uint64_t q = 1; q < violations; ++q) tally.fail({{"repeat", true}});
  rep.details["literal"] = literal;
  rep.details["stated_hypotheses"] = {
      {"checks", drop_checks}, {"violations", drop_violations}, {"first_counterexample", first_drop}};
  rep.details["bit_p_unset"] = {
      {"checks", proof_checks}, {"violations", proof_violations}, {"first_counterexample", first_proof}};
  tally.finish();
}

void check_well_behaved_prob(VerifyReport& rep, const json& p, std::uint64_t seed, unsigned threads) {
  const int n = param(p, "n", 8);
  const int r = param(p, "r", 9);
  const int s = param(p, "s", 9);
  const int t = param(p, "t", 9);
  const std::uint64_t samples = param<std::uint64_t>(p, "samples", 10000);
  const double threshold = param(p, "threshold", 0.5);
  const Construction c = Construction::build(n, r, s, t);
  std::vector<std::uint8_t> good(samples, 0);
  parallel_for(samples, threads, [&](std::uint64_t k) {
    Rng rng(derive_seed(seed, k));
    good[k] = is_well_behaved(PermutationFn::uniform(c.num_edges(), rng), c) ? 1 : 0;
  });
  const auto hits = static_cast<std::uint64_t>(std::count(good.begin(), good.end(), 1));
  const double freq = static_cast<double>(hits) / static_cast<double>(samples);
  const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(samples));
  Tally tally(rep);
  tally.check(freq >= threshold - 3.0 * se, [&] { return json{{"frequency", freq}, {"stderr", se}}; });
  rep.details["frequency"] = freq;
  rep.details["stderr"] = se;
  rep.details["samples"] = samples;
  rep.details["params"] = {n, r, s, t};
  rep.details["wilson95"] = {wilson_interval(hits, samples).lo, wilson_interval(hits, samples).hi};
  tally.finish();
}

void check_switch_identity(VerifyReport& rep, const json& p, std::uint64_t seed) {
  Tally tally(rep);
  const int construction_runs = param(p, "construction_runs", 30);
  const int dag_runs = param(p, "dag_runs", 30);
  const auto cp = int_list(p, "construction", {2, 2, 2, 2});
  Rng rng(seed);
  auto traced = [&](const Digraph& g, const Policy& B0, bool one_perm, const std::string& where) {
    const EdgeSet all(g.num_edges(), true);
    RunResult run;
    if (one_perm) {
      const PermutationFn sigma = PermutationFn::uniform(g.num_edges(), rng);
      run = random_facet_1p(g, all, B0, sigma, FacetOptions{true});
    } else {
      run = random_facet(g, all, B0, rng, FacetOptions{true});
    }
    const auto err = validate_tree(g, *run.tree, run);
    tally.check(!err && run.tree->switch_count() == run.pivots, [&] {
      return json{{"run", where}, {"error", err.value_or("")}, {"switches", run.tree->switch_count()},
                  {"pivots", run.pivots}};
    });
    tally.terminal(g, all, run.final_policy, where);
  };
  const Construction c = Construction::build(cp.at(0), cp.at(1), cp.at(2), cp.at(3));
  for (int q = 0; q < construction_runs; ++q)
    traced(c.graph(), c.initial_tree(), q % 2 == 1, "construction run " + std::to_string(q));
  for (int q = 0; q < dag_runs; ++q) {
    const int inner = 2 + static_cast<int>(rng.uniform_index(10));
    const int extra = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(2 * inner + 1)));
    const Digraph g = random_dag(inner, extra, rng);
    traced(g, random_policy(g, rng), q % 2 == 1, "dag run " + std::to_string(q));
  }
  rep.details["construction"] = cp;
  tally.finish();
}

}  // namespace

VerifyReport verify(const std::string& check, const json& params, std::uint64_t seed, unsigned threads) {
  const auto& ids = verify_check_ids();
  if (std::find(ids.begin(), ids.end(), check) == ids.end()) throw UnknownCheck("unknown check: " + check);
  if (!params.is_object()) throw BadConfig("check parameters must be a JSON object");
  VerifyReport rep;
  rep.check = check;
  rep.details["seed"] = seed;
  rep.details["overrides"] = params;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (check == "recurrence") check_recurrence(rep, params);
    else if (check == "counters-equality") check_counters_equality(rep, params);
    else if (check == "bf-optimal") check_bf_optimal(rep, params, seed, threads);
    else if (check == "make-switch") check_make_switch(rep, params, seed);
    else if (check == "bland-equiv") check_bland_equiv(rep, params, seed);
    else if (check == "rf-equiv") check_rf_equiv(rep, params, seed);
    else if (check == "lp-correspondence") check_lp_correspondence(rep, params, seed);
    else if (check == "technical-star") check_technical_star(rep, params, seed, threads);
    else if (check == "technical-bland") check_technical_bland(rep, params, seed, threads);
    else if (check == "drop-lemma") check_drop_lemma(rep, params, seed, threads);
    else if (check == "well-behaved-prob") check_well_behaved_prob(rep, params, seed, threads);
    else if (check == "switch-identity") check_switch_identity(rep, params, seed);
  } catch (const json::exception& e) {
    throw BadConfig(std::string("bad check parameters: ") + e.what());
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace facetlab
