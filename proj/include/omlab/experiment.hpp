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

// Monte-Carlo competitive-ratio experiments and the MSVV convergence sweep.
// Trial i uses seed derive_seed(master, i), so trials run in any order and
// replay bit-exactly from the recorded seeds.

#ifndef OMLAB_EXPERIMENT_HPP_
#define OMLAB_EXPERIMENT_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "omlab/allocation.hpp"
#include "omlab/generators.hpp"
#include "omlab/instance.hpp"
#include "omlab/online.hpp"
#include "omlab/oracle.hpp"
#include "omlab/parallel.hpp"
#include "omlab/reductions.hpp"

namespace omlab {

enum class Algorithm { kGreedy, kRanking, kPerturbed, kPerturbedDiscrete, kMsvv };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kRanking: return "ranking";
    case Algorithm::kPerturbed: return "perturbed";
    case Algorithm::kPerturbedDiscrete: return "perturbed-discrete";
    case Algorithm::kMsvv: return "msvv";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::kGreedy, Algorithm::kRanking, Algorithm::kPerturbed,
                      Algorithm::kPerturbedDiscrete, Algorithm::kMsvv}) {
    if (s == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm: " + s);
}

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kPerturbed;
  int trials = 1;
  std::optional<int> k;  // perturbed-discrete only
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = thread_count()
};

// Rejects incompatible algorithm / input combinations before any work starts.
inline void check_config(const ExperimentConfig& c, bool allocation_input) {
  if (c.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (c.algorithm == Algorithm::kPerturbedDiscrete) {
    if (!c.k || *c.k < 1) throw std::invalid_argument("perturbed-discrete needs --k >= 1");
  } else if (c.k) {
    throw std::invalid_argument(std::string(to_string(c.algorithm)) + " takes no k");
  }
  if (c.algorithm == Algorithm::kMsvv && !allocation_input) {
    throw std::invalid_argument("msvv runs on a budgeted allocation instance");
  }
}

struct TrialRecord {
  std::uint64_t seed = 0;
  double gain = 0.0;
  double ratio = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  double mean_gain = 0.0;
  double opt = 0.0;
  double ratio_mean = 0.0;
  double ci_half_width = 0.0;  // 1.96 * sd / sqrt(trials) of the ratio
  double min_ratio = 0.0;
  int min_ratio_trial = 0;
  double wall_seconds = 0.0;
};

inline double ratio_of(double gain, double opt) {
  if (opt <= 0.0) return 1.0;
  return std::clamp(gain / opt, 0.0, 1.0 + 1e-9);
}

// One trial of a matching policy on a unit-capacity graph.
inline MatchResult run_policy(const Graph& g, const ExperimentConfig& c,
                              const DiscreteScoreTable* table, std::uint64_t seed) {
  switch (c.algorithm) {
    case Algorithm::kGreedy: return run_greedy(g);
    case Algorithm::kRanking: return run_ranking(g, sample_permutation(g.offline_count(), seed));
    case Algorithm::kPerturbed: {
      const auto a = std::get<ContinuousPositions>(sample_assignment(g, ContinuousMode{}, seed));
      return run_perturbed_greedy(g, a.x, DecreasingExp{});
    }
    case Algorithm::kPerturbedDiscrete: {
      const auto a = std::get<DiscretePositions>(sample_assignment(g, DiscreteMode{*c.k}, seed));
      return run_perturbed_greedy(g, *table, a.sigma);
    }
    case Algorithm::kMsvv: break;
  }
  throw std::invalid_argument("msvv needs an allocation instance");
}

inline void summarize(ExperimentReport& r) {
  const auto t = static_cast<double>(r.trials.size());
  double sum = 0.0, rsum = 0.0;
  r.min_ratio = r.trials.front().ratio;
  r.min_ratio_trial = 0;
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    sum += r.trials[i].gain;
    rsum += r.trials[i].ratio;
    if (r.trials[i].ratio < r.min_ratio) {
      r.min_ratio = r.trials[i].ratio;
      r.min_ratio_trial = static_cast<int>(i);
    }
  }
  r.mean_gain = sum / t;
  r.ratio_mean = rsum / t;
  double ss = 0.0;
  for (const auto& tr : r.trials) ss += (tr.ratio - r.ratio_mean) * (tr.ratio - r.ratio_mean);
  const double sd = r.trials.size() > 1 ? std::sqrt(ss / (t - 1.0)) : 0.0;
  r.ci_half_width = 1.96 * sd / std::sqrt(t);
}

namespace detail {

template <class TrialFn>
ExperimentReport run_trials(const ExperimentConfig& c, double opt, TrialFn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.config = c;
  r.opt = opt;
  r.trials.resize(c.trials);
  const int workers = c.threads > 0 ? c.threads : thread_count();
  parallel_for(0, static_cast<std::uint64_t>(c.trials), workers,
               [&](std::uint64_t lo, std::uint64_t hi, int) {
                 for (std::uint64_t i = lo; i < hi; ++i) {
                   const std::uint64_t seed = derive_seed(c.seed, i);
                   const double gain = fn(seed);
                   r.trials[i] = {seed, gain, ratio_of(gain, opt)};
                 }
               });
  summarize(r);
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace detail

// Capacities are expanded into unit copies first; OPT is computed once.
inline ExperimentReport run_experiment(const VertexWeightedInstance& inst, const ExperimentConfig& c) {
  check_config(c, false);
  const ExpandedInstance ex = expand_capacities(inst);
  const Graph g(ex.instance);
  const double opt = optimal_value(g);
  std::optional<DiscreteScoreTable> table;
  if (c.algorithm == Algorithm::kPerturbedDiscrete) table.emplace(g, DiscretePsi{*c.k});
  return detail::run_trials(c, opt, [&](std::uint64_t seed) {
    return run_policy(g, c, table ? &*table : nullptr, seed).gain;
  });
}

// Allocation input: MSVV runs natively, every other algorithm runs on the
// reduction image and is paid the lifted revenue. OPT is the oracle value of
// the image.
inline ExperimentReport run_experiment(const BudgetedAllocationInstance& a, const ExperimentConfig& c) {
  check_config(c, true);
  const ReductionImage img = reduce_single_bid(a);
  const Graph g(img.instance);
  const double opt = optimal_value(g);
  if (c.algorithm == Algorithm::kMsvv) {
    const double revenue = run_msvv(a).allocation.revenue;
    return detail::run_trials(c, opt, [&](std::uint64_t) { return revenue; });
  }
  std::optional<DiscreteScoreTable> table;
  if (c.algorithm == Algorithm::kPerturbedDiscrete) table.emplace(g, DiscretePsi{*c.k});
  return detail::run_trials(c, opt, [&](std::uint64_t seed) {
    const MatchResult m = run_policy(g, c, table ? &*table : nullptr, seed);
    return lift_matching_to_allocation(a, img, m.matching).revenue;
  });
}

// ---- MSVV convergence ----

struct ConvergenceRow {
  int capacity = 1;  // budget / bid, the number of full copies per agent
  double budget = 0.0;
  double opt = 0.0;
  double msvv_revenue = 0.0;
  double pg_mean = 0.0;
  double pg_stderr = 0.0;
  double gap = 0.0;  // |pg_mean - msvv_revenue| / opt
  // Max over (arrival, agent) of |MSVV spent fraction - mean lowest unmatched
  // copy position under Perturbed-Greedy|.
  double trajectory_deviation = 0.0;
};

struct ConvergenceReport {
  int agents = 0;
  double bid = 0.0;
  int seeds = 0;
  std::uint64_t master_seed = 0;
  std::vector<ConvergenceRow> rows;

  bool gap_non_increasing() const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].gap > rows[i - 1].gap) return false;
    }
    return true;
  }
};

// For each capacity c: MSVV on the allocation family with budget c * bid, and
// continuous Perturbed-Greedy on its reduction image over `seeds` seeds.
inline ConvergenceReport run_msvv_convergence(int agents, double bid, const std::vector<int>& ladder,
                                              int seeds, std::uint64_t master_seed,
                                              int threads = 0) {
  if (seeds < 1) throw std::invalid_argument("seeds must be >= 1");
  ConvergenceReport rep{agents, bid, seeds, master_seed, {}};
  const int workers = threads > 0 ? threads : thread_count();
  for (int c : ladder) {
    const BudgetedAllocationInstance a = gen_msvv_stress(agents, bid, c);
    const ReductionImage img = reduce_single_bid(a);
    const Graph g(img.instance);
    ConvergenceRow row;
    row.capacity = c;
    row.budget = bid * c;
    row.opt = optimal_value(g);
    const MsvvResult ms = run_msvv(a, true);
    row.msvv_revenue = ms.allocation.revenue;

    const int steps = a.item_count();
    std::vector<double> revenue(seeds);
    // Per worker sums of the lowest unmatched copy position, [step][agent].
    std::vector<std::vector<double>> traj(std::max(1, workers),
                                          std::vector<double>(static_cast<std::size_t>(steps) * agents, 0.0));
    parallel_for(0, static_cast<std::uint64_t>(seeds), workers,
                 [&](std::uint64_t lo, std::uint64_t hi, int worker) {
                   auto& acc = traj[worker];
                   for (std::uint64_t s = lo; s < hi; ++s) {
                     const auto x = std::get<ContinuousPositions>(
                         sample_assignment(g, ContinuousMode{}, derive_seed(master_seed, s))).x;
                     const MatchResult m = run_perturbed_greedy(g, x, DecreasingExp{});
                     revenue[s] = lift_matching_to_allocation(a, img, m.matching).revenue;
                     // Copies of one agent are matched in ascending x, so the
                     // lowest unmatched one is the used-count order statistic.
                     std::vector<std::vector<double>> sorted(agents);
                     for (int u = 0; u < g.offline_count(); ++u) sorted[img.origin[u].agent].push_back(x[u]);
                     for (auto& v : sorted) std::sort(v.begin(), v.end());
                     std::vector<int> used(agents, 0);
                     for (int j = 0; j < steps; ++j) {
                       const int u = m.trace[j].offline;
                       if (u != kNone) ++used[img.origin[u].agent];
                       for (int i = 0; i < agents; ++i) {
                         const auto& v = sorted[i];
                         const double low = used[i] < static_cast<int>(v.size()) ? v[used[i]] : 1.0;
                         acc[static_cast<std::size_t>(j) * agents + i] += low;
                       }
                     }
                   }
                 });
    double sum = 0.0;
    for (double r : revenue) sum += r;
    row.pg_mean = sum / seeds;
    double ss = 0.0;
    for (double r : revenue) ss += (r - row.pg_mean) * (r - row.pg_mean);
    row.pg_stderr = seeds > 1 ? std::sqrt(ss / (seeds - 1.0) / seeds) : 0.0;
    row.gap = row.opt > 0.0 ? std::abs(row.pg_mean - row.msvv_revenue) / row.opt : 0.0;
    for (int j = 0; j < steps; ++j) {
      for (int i = 0; i < agents; ++i) {
        double total = 0.0;
        for (const auto& acc : traj) total += acc[static_cast<std::size_t>(j) * agents + i];
        const double mean_low = total / seeds;
        row.trajectory_deviation =
            std::max(row.trajectory_deviation, std::abs(ms.spent_fraction[j][i] - mean_low));
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace omlab

#endif  // OMLAB_EXPERIMENT_HPP_
