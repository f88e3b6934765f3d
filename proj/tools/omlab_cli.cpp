// Copyright 2026 The omlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// omlab: generate instances, run experiments, verify, reduce, report.
// Exit status: 0 success, 1 a check failed, 2 bad input.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omlab/omlab.hpp"

namespace {

using namespace omlab;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

void add_generator_options(CLI::App* cmd, GeneratorSpec& s) {
  cmd->add_option("--n", s.n, "size (offline vertices, star length, agents for msvv-stress)");
  cmd->add_option("--m", s.m, "online vertices (random-bipartite)");
  cmd->add_option("--eps", s.eps, "gadget epsilon");
  cmd->add_option("--copies", s.copies, "gadget copies");
  cmd->add_flag("--swap", s.swap, "swap gadget weights (Ranking-adversarial variant)");
  cmd->add_option("--which", s.which, "1 or 2: G1/G2 of skew-pair, first/second canonical 2x2");
  cmd->add_option("--heavy", s.heavy, "heavy weight of skew-pair");
  cmd->add_option("--alpha", s.alpha, "weight ratio of canonical-2x2");
  cmd->add_option("--D", s.base, "base of edge-weight-hard");
  cmd->add_option("--edge-prob", s.edge_prob, "edge probability (random-bipartite)");
  cmd->add_option("--weights", s.weights, "uniform | uniform-int | lognormal | two-point");
  cmd->add_option("--agents", s.alloc.agents, "agents (single-bid-alloc)");
  cmd->add_option("--items", s.alloc.items, "items (single-bid-alloc)");
  cmd->add_option("--max-bid", s.alloc.max_bid, "bids drawn from 1..max-bid");
  cmd->add_option("--max-budget", s.alloc.max_budget, "budgets drawn from 1..max-budget");
  cmd->add_option("--interest-prob", s.alloc.interest_prob, "probability an agent bids on an item");
  cmd->add_option("--bid", s.bid, "bid of msvv-stress agents");
  cmd->add_option("--capacity", s.capacity, "budget / bid of msvv-stress agents");
}

// Input from --instance, or from a generator family.
struct InputSource {
  std::string path;
  std::string family;
  GeneratorSpec spec;

  bool given() const { return !path.empty() || !family.empty(); }

  std::pair<GeneratedInstance, Json> load(std::uint64_t seed) const {
    if (!path.empty() && !family.empty()) throw InputError("give either --instance or --family");
    if (!path.empty()) return {any_from_json(read_json_file(path)), Json{{"file", path}}};
    if (family.empty()) throw InputError("missing --instance or --family");
    GeneratorSpec s = spec;
    s.family = family;
    s.seed = seed;
    try {
      return {generate(s), Json{{"generator", to_json(s)}}};
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
};

void add_input_options(CLI::App* cmd, InputSource& in) {
  cmd->add_option("--instance", in.path, "input file (instance, allocation or star JSON)");
  cmd->add_option("--family", in.family, "generate the input instead of reading it");
  add_generator_options(cmd, in.spec);
}

std::string check_line(const CheckResult& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %-8s checked=%llu violations=%llu", c.name.c_str(),
                to_string(c.status), static_cast<unsigned long long>(c.checked),
                static_cast<unsigned long long>(c.violations));
  std::string s = buf;
  if (!c.detail.empty()) s += "  " + c.detail;
  return s;
}

int cmd_gen(const std::string& family, const GeneratorSpec& spec_in, std::uint64_t seed,
            const std::string& out) {
  GeneratorSpec s = spec_in;
  s.family = family;
  s.seed = seed;
  GeneratedInstance g;
  try {
    g = generate(s);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  emit(out, dump(to_json(g)));
  return kExitOk;
}

int cmd_run(const InputSource& in, const std::string& algorithm, int trials, std::optional<int> k,
            std::uint64_t seed, const std::string& out, const std::string& format) {
  ExperimentConfig c;
  try {
    c.algorithm = parse_algorithm(algorithm);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  c.trials = trials;
  c.k = k;
  c.seed = seed;
  auto [input, source] = in.load(seed);
  ExperimentReport r;
  try {
    if (const auto* inst = std::get_if<VertexWeightedInstance>(&input)) {
      r = run_experiment(*inst, c);
    } else if (const auto* a = std::get_if<BudgetedAllocationInstance>(&input)) {
      r = run_experiment(*a, c);
    } else {
      throw InputError("edge-weighted stars are evaluated by the stopping-rules command");
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const Json j = to_json(r, input, source);
  emit(out, format == "csv" ? trials_csv(j) : dump(j));
  std::fprintf(stderr, "%s: mean gain %.6g, OPT %.6g, ratio %.6f +- %.6f (%d trials, %.2fs)\n",
               to_string(c.algorithm), r.mean_gain, r.opt, r.ratio_mean, r.ci_half_width, c.trials,
               r.wall_seconds);
  return kExitOk;
}

int cmd_verify(const InputSource& in, int k, bool mutant, bool warmup, std::uint64_t guard,
               std::uint64_t samples, std::uint64_t seed, const std::string& out) {
  auto [input, source] = in.load(seed);
  const auto* inst = std::get_if<VertexWeightedInstance>(&input);
  if (inst == nullptr) throw InputError("verify needs a vertex-weighted instance");
  const Graph g(*inst);
  if (!g.unit_capacities()) throw InputError("verify needs unit capacities");
  VerifierOptions opt;
  opt.guard = guard;
  opt.mutant = mutant;
  opt.samples = samples;
  opt.seed = seed;
  VerifierReport rep;
  Json extra;
  if (warmup) {
    WarmupReport w;
    try {
      w = verify_ranking_warmup(g, opt);
    } catch (const std::length_error& e) {
      throw InputError(std::string(e.what()) + "; warm-up mode has no statistical fallback");
    }
    rep = std::move(w.report);
    Json x = Json::array(), xe = Json::array();
    for (int t = 1; t <= w.tables.n; ++t) {
      x.push_back(to_double(w.tables.x[t]));
      xe.push_back(to_string(w.tables.x[t]));
    }
    extra = {{"x_t", x}, {"x_t_exact", xe}};
  } else {
    if (k < 1) throw InputError("--k must be >= 1");
    rep = verify_discrete(g, k, opt);
    if (rep.mode == VerifierMode::kStatistical) {
      std::fprintf(stderr,
                   "note: k^n exceeds the enumeration guard (%llu); downgraded to statistical mode\n",
                   static_cast<unsigned long long>(guard));
    }
  }
  Json j = to_json(rep, instance_hash(*inst));
  if (!extra.is_null()) j["tables"] = extra;
  j["mutant"] = mutant;
  emit(out, dump(j));
  for (const auto& c : rep.checks) std::fprintf(stderr, "%s\n", check_line(c).c_str());
  std::fprintf(stderr, "verify (%s, k=%d): %s\n", to_string(rep.mode), rep.k,
               rep.passed() ? "all checks pass" : "CHECK FAILED");
  return rep.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_reduce(const std::string& path, const std::string& out, const std::string& map_out) {
  const auto a = allocation_from_json(read_json_file(path));
  const ReductionImage img = reduce_single_bid(a);
  emit(out, dump(to_json(img.instance)));
  if (!map_out.empty()) emit(map_out, dump(reduction_map_json(img)));
  return kExitOk;
}

int cmd_msvv_compare(int agents, double bid, const std::vector<int>& ladder, int seeds,
                     std::uint64_t seed, const std::string& out, const std::string& format) {
  if (agents < 1 || !(bid > 0.0) || ladder.empty() || seeds < 1) {
    throw InputError("need agents >= 1, bid > 0, a non-empty ladder and seeds >= 1");
  }
  for (int c : ladder) {
    if (c < 1) throw InputError("capacities must be >= 1");
  }
  const ConvergenceReport r = run_msvv_convergence(agents, bid, ladder, seeds, seed);
  emit(out, format == "csv" ? convergence_csv(r) : dump(to_json(r)));
  for (const auto& row : r.rows) {
    std::fprintf(stderr, "c=%-5d msvv=%-10.6g pg=%-10.6g gap=%.6f trajectory=%.4f\n", row.capacity,
                 row.msvv_revenue, row.pg_mean, row.gap, row.trajectory_deviation);
  }
  std::fprintf(stderr, "gap non-increasing: %s\n", r.gap_non_increasing() ? "yes" : "no");
  return kExitOk;
}

int cmd_report(const std::string& in, const std::string& replay, const std::string& out,
               const std::string& format) {
  if (!replay.empty()) {
    const ReplayResult rr = replay_experiment(read_json_file(replay));
    std::fprintf(stderr, "replayed %d trials: %d mismatches\n", rr.trials, rr.mismatches);
    return rr.mismatches == 0 ? kExitOk : kExitCheckFailed;
  }
  if (in.empty()) throw InputError("report needs --in or --replay");
  const Json j = read_json_file(in);
  const std::string schema = j.value("schema", std::string());
  try {
    if (schema == kExperimentSchema) {
      emit(out, format == "csv" ? trials_csv(j) : dump(j));
    } else {
      throw InputError("report --in expects an experiment report, got schema '" + schema + "'");
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  return kExitOk;
}

int cmd_two_by_two(const std::vector<double>& alphas, const std::string& out) {
  Json rows = Json::array();
  for (double a : alphas) {
    TwoByTwoResult r;
    try {
      r = analyze_2x2(a);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    rows.push_back({{"alpha", a}, {"p_heavy_first", r.p_heavy_first},
                    {"p_light_first", r.p_light_first}, {"closed_form", to_string(r.closed_form)},
                    {"closed_form_value", r.closed_form_value},
                    {"canonical_factor", r.canonical_factor},
                    {"all_graphs_factor", r.all_graphs_factor}, {"grid_step", r.grid_step}});
  }
  emit(out, dump(Json{{"schema", "omlab.two-by-two/1"}, {"rows", rows}}));
  return kExitOk;
}

int cmd_stopping_rules(const InputSource& in, const std::string& out) {
  auto [input, source] = in.load(1);
  const auto* star = std::get_if<EdgeWeightedStar>(&input);
  if (star == nullptr) throw InputError("stopping-rules needs an edge-weighted star");
  const auto ratios = stopping_rule_ratios(*star);
  Json rows = Json::array();
  Rational best = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    rows.push_back({{"k", i + 1}, {"ratio", to_double(ratios[i])}, {"ratio_exact", to_string(ratios[i])}});
    best = std::max(best, ratios[i]);
  }
  emit(out, dump(Json{{"schema", "omlab.stopping-rules/1"}, {"n", star->n}, {"D", star->base},
                      {"rules", rows}, {"best_ratio", to_double(best)}}));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omlab: online vertex-weighted bipartite matching lab"};
  app.require_subcommand(1);

  std::string out = "-";
  std::string format = "json";
  std::uint64_t seed = 1;

  auto* gen = app.add_subcommand("gen", "generate an instance file");
  std::string gen_family;
  GeneratorSpec gen_spec;
  gen->add_option("--family", gen_family, "instance family")
      ->required()
      ->check(CLI::IsMember(generator_families()));
  add_generator_options(gen, gen_spec);
  gen->add_option("--seed", seed, "seed for random families");
  gen->add_option("--out", out, "output path (default stdout)");

  auto* run = app.add_subcommand("run", "Monte-Carlo competitive-ratio experiment");
  InputSource run_in;
  std::string algorithm = "perturbed";
  int trials = 1000;
  std::optional<int> k;
  add_input_options(run, run_in);
  run->add_option("--algorithm", algorithm, "greedy | ranking | perturbed | perturbed-discrete | msvv");
  run->add_option("--trials", trials, "number of trials");
  run->add_option("--k", k, "discretization for perturbed-discrete");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out", out, "output path (default stdout)");
  run->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  auto* verify = app.add_subcommand("verify", "exhaustive check of the charging argument");
  InputSource verify_in;
  int verify_k = 3;
  bool mutant = false, warmup = false;
  std::uint64_t guard = kEnumerationGuard;
  std::uint64_t samples = 200'000;
  add_input_options(verify, verify_in);
  verify->add_option("--k", verify_k, "number of discrete positions");
  verify->add_flag("--mutant", mutant, "negative control: invert the matching priority");
  verify->add_flag("--warmup", warmup, "Ranking over all n! permutations with unit weights");
  verify->add_option("--guard", guard, "maximum number of enumerated assignments");
  verify->add_option("--samples", samples, "samples in statistical mode");
  verify->add_option("--seed", seed, "seed for statistical mode");
  verify->add_option("--out", out, "report path (default stdout)");

  auto* reduce = app.add_subcommand("reduce", "single-bid allocation to vertex-weighted matching");
  std::string reduce_in, map_out;
  reduce->add_option("--instance", reduce_in, "allocation file")->required();
  reduce->add_option("--out", out, "instance output path (default stdout)");
  reduce->add_option("--map", map_out, "copy-origin mapping output path");

  auto* msvv = app.add_subcommand("msvv-compare", "Perturbed-Greedy versus MSVV over a capacity ladder");
  int agents = 10, seeds = 1000;
  double bid = 1.0;
  std::vector<int> ladder{1, 10, 100};
  msvv->add_option("--agents", agents, "number of agents");
  msvv->add_option("--bid", bid, "bid of every agent");
  msvv->add_option("--ladder", ladder, "capacities (budget / bid)")->delimiter(',');
  msvv->add_option("--seeds", seeds, "Perturbed-Greedy seeds per capacity");
  msvv->add_option("--seed", seed, "master seed");
  msvv->add_option("--out", out, "output path (default stdout)");
  msvv->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  auto* report = app.add_subcommand("report", "convert or replay an experiment report");
  std::string report_in, replay;
  report->add_option("--in", report_in, "experiment report to convert");
  report->add_option("--replay", replay, "experiment report to replay bit-exactly");
  report->add_option("--out", out, "output path (default stdout)");
  report->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  auto* two = app.add_subcommand("analyze-2x2", "optimal permutation mix on 2x2 graphs");
  std::vector<double> alphas{1.0, 2.0, 5.0, 100.0};
  two->add_option("--alpha", alphas, "weight ratios >= 1")->delimiter(',');
  two->add_option("--out", out, "output path (default stdout)");

  auto* stop = app.add_subcommand("stopping-rules", "fixed stopping rules on an edge-weighted star");
  InputSource stop_in;
  add_input_options(stop, stop_in);
  stop->add_option("--out", out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_family, gen_spec, seed, out);
    if (run->parsed()) return cmd_run(run_in, algorithm, trials, k, seed, out, format);
    if (verify->parsed()) {
      return cmd_verify(verify_in, verify_k, mutant, warmup, guard, samples, seed, out);
    }
    if (reduce->parsed()) return cmd_reduce(reduce_in, out, map_out);
    if (msvv->parsed()) return cmd_msvv_compare(agents, bid, ladder, seeds, seed, out, format);
    if (report->parsed()) return cmd_report(report_in, replay, out, format);
    if (two->parsed()) return cmd_two_by_two(alphas, out);
    if (stop->parsed()) return cmd_stopping_rules(stop_in, out);
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInputError;
  } catch (const InvalidInstance& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
  return kExitInputError;
}
