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

// Experiment and convergence reports: schema-versioned JSON and tidy CSV,
// plus bit-exact replay of a recorded experiment.

#ifndef OMLAB_REPORT_HPP_
#define OMLAB_REPORT_HPP_

#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "omlab/experiment.hpp"
#include "omlab/json_io.hpp"

namespace omlab {

inline constexpr const char* kExperimentSchema = "omlab.experiment/1";
inline constexpr const char* kTrialsCsvSchema = "omlab.trials-csv/1";
inline constexpr const char* kConvergenceSchema = "omlab.msvv-convergence/1";
inline constexpr const char* kConvergenceCsvSchema = "omlab.msvv-convergence-csv/1";

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// `input` is the instance the trials ran on (embedded for replay); `source`
// records where it came from.
inline Json to_json(const ExperimentReport& r, const GeneratedInstance& input, const Json& source) {
  Json per_trial = Json::array();
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    per_trial.push_back({{"trial", i}, {"seed", r.trials[i].seed}, {"gain", r.trials[i].gain},
                         {"ratio", r.trials[i].ratio}});
  }
  const Json inst = to_json(input);
  Json j = {{"schema", kExperimentSchema},
            {"algorithm", to_string(r.config.algorithm)},
            {"trials", r.config.trials},
            {"master_seed", r.config.seed},
            {"instance_hash", hex64(fnv1a64(inst.dump()))},
            {"source", source},
            {"instance", inst},
            {"opt", r.opt},
            {"mean_gain", r.mean_gain},
            {"ratio_mean", r.ratio_mean},
            {"ci95_half_width", r.ci_half_width},
            {"min_ratio", r.min_ratio},
            {"min_ratio_trial", r.min_ratio_trial},
            {"wall_seconds", r.wall_seconds},
            {"per_trial", per_trial}};
  if (r.config.k) j["k"] = *r.config.k;
  return j;
}

inline std::string trials_csv(const Json& report) {
  std::string out = "schema_version,algorithm,instance_hash,trial,seed,gain,opt,ratio\n";
  const std::string prefix = std::string(kTrialsCsvSchema) + "," +
                             report.at("algorithm").get<std::string>() + "," +
                             report.at("instance_hash").get<std::string>() + ",";
  const std::string opt = format_double(report.at("opt").get<double>());
  for (const auto& t : report.at("per_trial")) {
    out += prefix + std::to_string(t.at("trial").get<long long>()) + "," +
           std::to_string(t.at("seed").get<std::uint64_t>()) + "," +
           format_double(t.at("gain").get<double>()) + "," + opt + "," +
           format_double(t.at("ratio").get<double>()) + "\n";
  }
  return out;
}

struct ReplayResult {
  int trials = 0;
  int mismatches = 0;
  int first_mismatch = -1;
};

// Re-runs every recorded trial from its recorded seed on the embedded
// instance and compares gains bit for bit.
inline ReplayResult replay_experiment(const Json& report) {
  try {
    if (report.value("schema", std::string()) != kExperimentSchema) {
      throw InputError("not an experiment report");
    }
    ExperimentConfig c;
    c.algorithm = parse_algorithm(report.at("algorithm").get<std::string>());
    c.trials = 1;
    c.seed = report.at("master_seed").get<std::uint64_t>();
    if (report.contains("k")) c.k = report.at("k").get<int>();
    const GeneratedInstance input = any_from_json(report.at("instance"));
    ReplayResult rr;
    const auto& per_trial = report.at("per_trial");
    rr.trials = static_cast<int>(per_trial.size());
    auto compare = [&](int i, double gain) {
      if (gain != per_trial[i].at("gain").get<double>()) {
        if (rr.first_mismatch < 0) rr.first_mismatch = i;
        ++rr.mismatches;
      }
    };
    if (const auto* inst = std::get_if<VertexWeightedInstance>(&input)) {
      check_config(c, false);
      const ExpandedInstance ex = expand_capacities(*inst);
      const Graph g(ex.instance);
      std::optional<DiscreteScoreTable> table;
      if (c.algorithm == Algorithm::kPerturbedDiscrete) table.emplace(g, DiscretePsi{*c.k});
      for (int i = 0; i < rr.trials; ++i) {
        const auto seed = per_trial[i].at("seed").get<std::uint64_t>();
        compare(i, run_policy(g, c, table ? &*table : nullptr, seed).gain);
      }
    } else if (const auto* a = std::get_if<BudgetedAllocationInstance>(&input)) {
      check_config(c, true);
      const ReductionImage img = reduce_single_bid(*a);
      const Graph g(img.instance);
      std::optional<DiscreteScoreTable> table;
      if (c.algorithm == Algorithm::kPerturbedDiscrete) table.emplace(g, DiscretePsi{*c.k});
      const double msvv = c.algorithm == Algorithm::kMsvv ? run_msvv(*a).allocation.revenue : 0.0;
      for (int i = 0; i < rr.trials; ++i) {
        const auto seed = per_trial[i].at("seed").get<std::uint64_t>();
        if (c.algorithm == Algorithm::kMsvv) {
          compare(i, msvv);
        } else {
          const auto m = run_policy(g, c, table ? &*table : nullptr, seed);
          compare(i, lift_matching_to_allocation(*a, img, m.matching).revenue);
        }
      }
    } else {
      throw InputError("experiment report embeds an unsupported instance kind");
    }
    return rr;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed experiment report: ") + e.what());
  }
}

inline Json to_json(const ConvergenceReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"capacity", row.capacity}, {"budget", row.budget}, {"opt", row.opt},
                    {"msvv_revenue", row.msvv_revenue}, {"pg_mean", row.pg_mean},
                    {"pg_stderr", row.pg_stderr}, {"gap", row.gap},
                    {"trajectory_deviation", row.trajectory_deviation}});
  }
  return {{"schema", kConvergenceSchema}, {"agents", r.agents}, {"bid", r.bid},
          {"seeds", r.seeds}, {"master_seed", r.master_seed}, {"rows", rows},
          {"gap_non_increasing", r.gap_non_increasing()}};
}

inline std::string convergence_csv(const ConvergenceReport& r) {
  std::string out =
      "schema_version,capacity,budget,opt,msvv_revenue,pg_mean,pg_stderr,gap,trajectory_deviation\n";
  for (const auto& row : r.rows) {
    out += std::string(kConvergenceCsvSchema) + "," + std::to_string(row.capacity) + "," +
           format_double(row.budget) + "," + format_double(row.opt) + "," +
           format_double(row.msvv_revenue) + "," + format_double(row.pg_mean) + "," +
           format_double(row.pg_stderr) + "," + format_double(row.gap) + "," +
           format_double(row.trajectory_deviation) + "\n";
  }
  return out;
}

}  // namespace omlab

#endif  // OMLAB_REPORT_HPP_
