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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "omlab/experiment.hpp"
#include "omlab/generators.hpp"
#include "omlab/json_io.hpp"
#include "omlab/online.hpp"
#include "omlab/oracle.hpp"

namespace omlab {
namespace {

double greedy_ratio(const VertexWeightedInstance& inst) {
  const Graph g(inst);
  return run_greedy(g).gain / solve_optimal(g).optimum_value;
}

std::vector<double> sorted_weights(const VertexWeightedInstance& inst) {
  std::vector<double> w;
  for (const auto& u : inst.offline) w.push_back(u.weight);
  std::sort(w.begin(), w.end());
  return w;
}

TEST(UpperTriangular, SmallCases) {
  const auto one = gen_upper_triangular(1);
  EXPECT_EQ(one.edges, (std::vector<Edge>{{0, 0}}));
  const auto two = gen_upper_triangular(2);
  EXPECT_EQ(two.edges, (std::vector<Edge>{{0, 0}, {1, 0}, {1, 1}}));
  EXPECT_EQ(sorted_weights(two), (std::vector<double>{1.0, 1.0}));
  EXPECT_THROW(gen_upper_triangular(0), std::invalid_argument);
  const auto big = gen_upper_triangular(100);
  EXPECT_TRUE(validate(big).empty());
  EXPECT_EQ(big.edges.size(), 5050u);
}

TEST(GreedyGadget, Ratios) {
  EXPECT_NEAR(greedy_ratio(gen_greedy_gadget(0.01, 1)), 1.01 / 2.01, 1e-12);
  EXPECT_NEAR(greedy_ratio(gen_greedy_gadget(1.0, 1)), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(greedy_ratio(gen_greedy_gadget(0.01, 10)), greedy_ratio(gen_greedy_gadget(0.01, 1)), 1e-12);
  EXPECT_NEAR(greedy_ratio(gen_greedy_gadget(1e-3, 1)), 0.5, 1e-3);
  for (int copies : {1, 3, 7}) {
    EXPECT_NEAR(solve_optimal(Graph(gen_greedy_gadget(0.25, copies))).optimum_value, copies * 2.25, 1e-12);
  }
  EXPECT_THROW(gen_greedy_gadget(0.0, 1), std::invalid_argument);
  EXPECT_THROW(gen_greedy_gadget(0.1, 0), std::invalid_argument);
}

TEST(GreedyGadget, SwapMakesGreedyOptimal) {
  EXPECT_DOUBLE_EQ(greedy_ratio(gen_greedy_gadget(0.1, 2, true)), 1.0);
}

TEST(SkewPair, SameWeightsDifferentWinners) {
  const auto [g1, g2] = gen_skew_pair();
  EXPECT_EQ(sorted_weights(g1), sorted_weights(g2));
  EXPECT_TRUE(validate(g1).empty());
  EXPECT_TRUE(validate(g2).empty());
  EXPECT_DOUBLE_EQ(greedy_ratio(g2), 1.0);

  ExperimentConfig c;
  c.algorithm = Algorithm::kPerturbed;
  c.trials = 10000;
  c.seed = 3;
  const auto pg1 = run_experiment(g1, c);
  const auto pg2 = run_experiment(g2, c);
  EXPECT_LT(run_greedy(Graph(g1)).gain, pg1.mean_gain);
  const double floor = 1.0 - std::exp(-1.0) - 0.02;
  EXPECT_GE(pg1.ratio_mean, floor);
  EXPECT_GE(pg2.ratio_mean, floor);
}

TEST(EdgeWeightHard, SmallCases) {
  const auto one = gen_edge_weight_hard(1, 5.0);
  ASSERT_EQ(one.vectors.size(), 1u);
  EXPECT_EQ(one.vectors[0], (std::vector<double>{5.0}));
  for (const auto& r : stopping_rule_ratios(one)) EXPECT_EQ(r, 1);

  const auto three = gen_edge_weight_hard(3, 10.0);
  ASSERT_EQ(three.vectors.size(), 3u);
  EXPECT_EQ(three.vectors[0], (std::vector<double>{10, 100, 1000}));
  EXPECT_EQ(three.vectors[1], (std::vector<double>{100, 1000, 0}));
  EXPECT_EQ(three.vectors[2], (std::vector<double>{1000, 0, 0}));
  for (const auto& v : three.vectors) EXPECT_EQ(*std::max_element(v.begin(), v.end()), 1000.0);
  for (double p : three.probabilities) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
}

TEST(EdgeWeightHard, EveryStoppingRuleIsPoor) {
  const auto star = gen_edge_weight_hard(10, 100.0);
  const auto ratios = stopping_rule_ratios(star);
  ASSERT_EQ(ratios.size(), 10u);
  for (const auto& r : ratios) EXPECT_LE(r, Rational(3, 10));
  // Rule k earns D^{i+k-1} on vector i while that entry exists: a geometric
  // sum over j = 0..n-k of D^{-j}, divided by n.
  for (int k = 1; k <= 10; ++k) {
    double expected = 0.0;
    for (int j = 0; j <= 10 - k; ++j) expected += std::pow(100.0, -j);
    EXPECT_NEAR(to_double(ratios[k - 1]), expected / 10.0, 1e-12);
  }
  EXPECT_EQ(ratios[9], Rational(1, 10));
}

TEST(RandomBipartite, DeterministicAndComplete) {
  RandomBipartiteSpec spec{5, 4, 0.4, WeightDist::kLogNormal, true};
  EXPECT_EQ(dump(to_json(gen_random_bipartite(spec, 9))), dump(to_json(gen_random_bipartite(spec, 9))));
  spec.edge_prob = 1.0;
  EXPECT_EQ(gen_random_bipartite(spec, 1).edges.size(), 20u);
  spec.edge_prob = 0.0;
  EXPECT_TRUE(gen_random_bipartite(spec, 1).edges.empty());
}

TEST(RandomBipartite, CorpusValidates) {
  const WeightDist dists[] = {WeightDist::kUniform, WeightDist::kUniformInt, WeightDist::kLogNormal,
                              WeightDist::kTwoPoint};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const RandomBipartiteSpec spec{1 + static_cast<int>(seed % 9), 1 + static_cast<int>(seed % 7), 0.5,
                                   dists[seed % 4], seed % 2 == 0};
    const auto inst = gen_random_bipartite(spec, seed);
    EXPECT_TRUE(validate(inst).empty()) << "seed " << seed;
  }
  EXPECT_THROW(parse_weight_dist("gaussian"), std::invalid_argument);
}

TEST(SingleBidAlloc, ValidAndIntegral) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto a = gen_single_bid_alloc({}, seed);
    EXPECT_TRUE(validate(a).empty());
    for (const auto& ag : a.agents) {
      EXPECT_EQ(ag.bid, std::floor(ag.bid));
      EXPECT_EQ(ag.budget, std::floor(ag.budget));
    }
  }
}

TEST(MsvvStress, Shape) {
  const auto a = gen_msvv_stress(3, 0.5, 4);
  EXPECT_EQ(a.item_count(), 12);
  for (const auto& ag : a.agents) EXPECT_EQ(ag.budget, 2.0);
  EXPECT_EQ(a.interest[0].size(), 12u);
  EXPECT_EQ(a.interest[2].size(), 4u);
  EXPECT_EQ(brute_force_optimal(Graph(reduce_single_bid(gen_msvv_stress(2, 1.0, 2)).instance)).optimum_value,
            4.0);
}

TEST(Generate, SpecRoundTripIsByteStable) {
  for (const auto& family : generator_families()) {
    SCOPED_TRACE(family);
    GeneratorSpec s;
    s.family = family;
    s.n = 4;
    s.m = 3;
    s.seed = 17;
    const std::string a = dump(to_json(generate(s)));
    const std::string b = dump(to_json(generate(generator_spec_from_json(to_json(s)))));
    EXPECT_EQ(a, b);
    EXPECT_EQ(dump(to_json(any_from_json(Json::parse(a)))), a);
  }
  GeneratorSpec bad;
  bad.family = "nope";
  EXPECT_THROW(generate(bad), std::invalid_argument);
}

}  // namespace
}  // namespace omlab
