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

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "omlab/experiment.hpp"
#include "omlab/generators.hpp"
#include "omlab/json_io.hpp"
#include "omlab/parallel.hpp"
#include "omlab/report.hpp"
#include "random_cases.hpp"

namespace omlab {
namespace {

ExperimentConfig config(Algorithm a, int trials, std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.algorithm = a;
  c.trials = trials;
  c.seed = seed;
  return c;
}

TEST(Experiment, GreedyTrialsAreIdentical) {
  const auto r = run_experiment(gen_greedy_gadget(0.01, 1), config(Algorithm::kGreedy, 5));
  ASSERT_EQ(r.trials.size(), 5u);
  for (const auto& t : r.trials) EXPECT_EQ(t.gain, r.trials[0].gain);
  EXPECT_NEAR(r.ratio_mean, 1.01 / 2.01, 1e-12);
  EXPECT_EQ(r.ci_half_width, 0.0);
}

TEST(Experiment, RankingTwoByTwoExactAndSampled) {
  const Graph g(gen_upper_triangular(2));
  double total = 0.0;
  for (const std::vector<int>& p : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
    total += static_cast<double>(run_ranking(g, p).matching.pairs.size());
  }
  EXPECT_EQ(total / 2.0, 1.5);
  EXPECT_EQ(total / 2.0 / solve_optimal(g).optimum_value, 0.75);
  const auto r = run_experiment(gen_upper_triangular(2), config(Algorithm::kRanking, 20000));
  EXPECT_NEAR(r.ratio_mean, 0.75, 0.01);
}

TEST(Experiment, PerturbedGreedyOnUpperTriangular) {
  const auto r = run_experiment(gen_upper_triangular(40), config(Algorithm::kPerturbed, 2000));
  EXPECT_GT(r.ratio_mean, 0.6);
  EXPECT_LT(r.ratio_mean, 0.7);
  EXPECT_GT(r.ci_half_width, 0.0);
  EXPECT_LE(r.min_ratio, r.ratio_mean);
  EXPECT_EQ(r.trials[r.min_ratio_trial].ratio, r.min_ratio);
}

TEST(Experiment, SeedsAndThreadsAreReproducible) {
  auto c = config(Algorithm::kPerturbed, 300, 77);
  c.threads = 1;
  const auto a = run_experiment(gen_upper_triangular(12), c);
  c.threads = 4;
  const auto b = run_experiment(gen_upper_triangular(12), c);
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    EXPECT_EQ(a.trials[i].seed, derive_seed(77, i));
    EXPECT_EQ(a.trials[i].gain, b.trials[i].gain);
    seeds.insert(a.trials[i].seed);
  }
  EXPECT_EQ(seeds.size(), a.trials.size());
  EXPECT_EQ(a.ratio_mean, b.ratio_mean);
}

TEST(Experiment, DiscreteModeAndCapacities) {
  auto inst = make_instance({2.0, 1.0}, 3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}});
  inst.offline[0].capacity = 2;
  auto c = config(Algorithm::kPerturbedDiscrete, 200);
  c.k = 4;
  const auto r = run_experiment(inst, c);
  EXPECT_EQ(r.opt, 5.0);
  for (const auto& t : r.trials) EXPECT_LE(t.gain, 5.0);
}

TEST(Experiment, ConfigErrors) {
  const auto inst = gen_upper_triangular(3);
  EXPECT_THROW(run_experiment(inst, config(Algorithm::kGreedy, 0)), std::invalid_argument);
  EXPECT_THROW(run_experiment(inst, config(Algorithm::kPerturbedDiscrete, 3)), std::invalid_argument);
  auto with_k = config(Algorithm::kRanking, 3);
  with_k.k = 3;
  EXPECT_THROW(run_experiment(inst, with_k), std::invalid_argument);
  EXPECT_THROW(run_experiment(inst, config(Algorithm::kMsvv, 3)), std::invalid_argument);
  EXPECT_THROW(parse_algorithm("simulated-annealing"), std::invalid_argument);
  for (auto a : {Algorithm::kGreedy, Algorithm::kRanking, Algorithm::kPerturbed,
                 Algorithm::kPerturbedDiscrete, Algorithm::kMsvv}) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  }
}

TEST(Experiment, RatioClampAndZeroOpt) {
  EXPECT_EQ(ratio_of(0.0, 0.0), 1.0);
  EXPECT_EQ(ratio_of(3.0, 2.0), 1.0 + 1e-9);
  const auto r = run_experiment(make_instance({1.0}, 1, {}), config(Algorithm::kPerturbed, 3));
  EXPECT_EQ(r.ratio_mean, 1.0);
}

TEST(Experiment, AllocationInput) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto a = cases::random_allocation(seed);
    const auto ms = run_experiment(a, config(Algorithm::kMsvv, 2));
    EXPECT_EQ(ms.trials[0].gain, run_msvv(a).allocation.revenue);
    EXPECT_LE(ms.ratio_mean, 1.0 + 1e-9);
    const auto pg = run_experiment(a, config(Algorithm::kPerturbed, 50, seed));
    EXPECT_EQ(pg.opt, brute_force_optimal_allocation(a).revenue);
    for (const auto& t : pg.trials) EXPECT_LE(t.gain, pg.opt);
  }
}

Json report_json(const GeneratedInstance& input, const ExperimentReport& r) {
  return Json::parse(dump(to_json(r, input, Json{{"family", "test"}})));
}

TEST(Report, ReplayReproducesEveryTrial) {
  const auto inst = gen_upper_triangular(15);
  const auto r = run_experiment(inst, config(Algorithm::kPerturbed, 500, 9));
  const Json j = report_json(inst, r);
  const auto rr = replay_experiment(j);
  EXPECT_EQ(rr.trials, 500);
  EXPECT_EQ(rr.mismatches, 0);

  Json tampered = j;
  tampered["per_trial"][7]["gain"] = tampered["per_trial"][7]["gain"].get<double>() + 1.0;
  const auto bad = replay_experiment(tampered);
  EXPECT_EQ(bad.mismatches, 1);
  EXPECT_EQ(bad.first_mismatch, 7);
}

TEST(Report, ReplayDiscreteAndAllocation) {
  auto c = config(Algorithm::kPerturbedDiscrete, 100, 4);
  c.k = 3;
  const auto inst = gen_greedy_gadget(0.5, 3);
  EXPECT_EQ(replay_experiment(report_json(inst, run_experiment(inst, c))).mismatches, 0);
  const auto a = gen_single_bid_alloc({}, 12);
  EXPECT_EQ(replay_experiment(report_json(a, run_experiment(a, config(Algorithm::kRanking, 100)))).mismatches,
            0);
  EXPECT_THROW(replay_experiment(Json{{"schema", "other"}}), InputError);
  EXPECT_THROW(replay_experiment(Json{{"schema", kExperimentSchema}}), InputError);
}

TEST(Report, TrialsCsv) {
  const auto inst = gen_upper_triangular(3);
  const Json j = report_json(inst, run_experiment(inst, config(Algorithm::kRanking, 4)));
  const std::string csv = trials_csv(j);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "schema_version,algorithm,instance_hash,trial,seed,gain,opt,ratio");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.rfind(std::string(kTrialsCsvSchema) + ",ranking," + j.at("instance_hash").get<std::string>(), 0),
              0u);
    ++rows;
  }
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Convergence, LadderRowsAndTrend) {
  const auto rep = run_msvv_convergence(6, 1.0, {1, 10, 40}, 200, 5);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rows[0].budget, 1.0);
  EXPECT_EQ(rep.rows[2].budget, 40.0);
  for (const auto& row : rep.rows) {
    EXPECT_GE(row.gap, 0.0);
    EXPECT_LE(row.msvv_revenue, row.opt);
    EXPECT_LE(row.pg_mean, row.opt);
    EXPECT_EQ(row.opt, 6.0 * row.capacity);
  }
  EXPECT_TRUE(rep.gap_non_increasing());
  EXPECT_LT(rep.rows[2].trajectory_deviation, rep.rows[0].trajectory_deviation);
  const Json j = to_json(rep);
  EXPECT_EQ(j.at("schema"), kConvergenceSchema);
  EXPECT_EQ(j.at("rows").size(), 3u);
  EXPECT_EQ(convergence_csv(rep).rfind("schema_version,capacity,", 0), 0u);
}

TEST(Parallel, SeedDerivationAndWorkerErrors) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
  std::vector<int> hits(100, 0);
  parallel_for(0, 100, 4, [&](std::uint64_t lo, std::uint64_t hi, int) {
    for (auto i = lo; i < hi; ++i) ++hits[i];
  });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(0, 10, 3,
                            [](std::uint64_t lo, std::uint64_t, int) {
                              if (lo == 0) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace omlab
