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

#include <vector>

#include <gtest/gtest.h>

#include "naive_sim.hpp"
#include "omlab/generators.hpp"
#include "omlab/oracle.hpp"
#include "random_cases.hpp"

namespace omlab {
namespace {

TEST(Oracle, TwoByTwoUnitWeights) {
  const Graph g(gen_upper_triangular(2));
  EXPECT_EQ(solve_optimal(g).optimum_value, 2.0);
  EXPECT_EQ(brute_force_optimal(g).optimum_value, 2.0);
}

TEST(Oracle, GreedyGadgetOptimum) {
  const Graph g(gen_greedy_gadget(0.01, 1));
  const auto r = solve_optimal(g);
  EXPECT_DOUBLE_EQ(r.optimum_value, 2.01);
  EXPECT_EQ(r.annotation.matching.pairs.size(), 2u);
}

TEST(Oracle, IsolatedHeavyVertexExcluded) {
  const Graph g(make_instance({100.0, 1.0}, 1, {{1, 0}}));
  const auto r = solve_optimal(g);
  EXPECT_EQ(r.optimum_value, 1.0);
  EXPECT_FALSE(r.annotation.is_matched(0));
}

TEST(Oracle, EmptyGraphAndSingleEdge) {
  EXPECT_EQ(brute_force_optimal(Graph(make_instance({3.0, 4.0}, 2, {}))).optimum_value, 0.0);
  EXPECT_EQ(solve_optimal(Graph(make_instance({3.0, 4.0}, 2, {}))).optimum_value, 0.0);
  EXPECT_EQ(brute_force_optimal(Graph(make_instance({6.5}, 1, {{0, 0}}))).optimum_value, 6.5);
}

TEST(Oracle, RejectsCapacities) {
  auto inst = make_instance({1.0}, 2, {{0, 0}, {0, 1}});
  inst.offline[0].capacity = 2;
  EXPECT_THROW(solve_optimal(Graph(inst)), std::invalid_argument);
}

TEST(Oracle, BruteForceGuard) {
  EXPECT_THROW(brute_force_optimal(Graph(gen_upper_triangular(11))), std::length_error);
}

// Tie-heavy integer weights: value and the canonical optimal matching agree
// with a definitional enumeration of every matching.
TEST(Oracle, AgreesWithEnumerationOnTiedWeights) {
  cases::CaseShape shape;
  shape.max_offline = 6;
  shape.max_online = 6;
  shape.weight_pool = {1.0, 2.0, 2.0, 3.0, 0.0};
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    SCOPED_TRACE(cases::trace_label(seed));
    const auto inst = cases::random_instance(seed, shape);
    const Graph g(inst);
    const auto ref = naive::optimum(inst);
    const auto fast = solve_optimal(g);
    const auto brute = brute_force_optimal(g);
    EXPECT_EQ(Rational(fast.optimum_value), ref.value);
    EXPECT_EQ(Rational(brute.optimum_value), ref.value);
    EXPECT_EQ(fast.annotation.partner, ref.first_partner);
    EXPECT_EQ(brute.annotation.partner, ref.first_partner);
    EXPECT_TRUE(check_matching(g, fast.annotation.matching).empty());
    EXPECT_EQ(fast.annotation.matching.gain, fast.optimum_value);
  }
}

TEST(Oracle, AgreesWithBruteForceOnContinuousWeights) {
  cases::CaseShape shape;
  shape.max_offline = 9;
  shape.max_online = 9;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    SCOPED_TRACE(cases::trace_label(seed));
    const Graph g(cases::random_instance(seed, shape));
    EXPECT_NEAR(solve_optimal(g).optimum_value, brute_force_optimal(g).optimum_value, 1e-9);
    EXPECT_NEAR(optimal_value(g), brute_force_optimal(g).optimum_value, 1e-9);
  }
}

TEST(Oracle, LargerInstancesMatchBruteForce) {
  cases::CaseShape shape;
  shape.min_offline = 8;
  shape.max_offline = 10;
  shape.min_online = 8;
  shape.max_online = 10;
  shape.edge_prob = 0.3;
  shape.weight_pool = {1.0, 2.0, 4.0};
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    SCOPED_TRACE(cases::trace_label(seed));
    const auto inst = cases::random_instance(seed, shape);
    const Graph g(inst);
    const auto fast = solve_optimal(g);
    const auto brute = brute_force_optimal(g);
    EXPECT_EQ(fast.optimum_value, brute.optimum_value);
    EXPECT_EQ(fast.annotation.partner, brute.annotation.partner);
  }
}

TEST(Oracle, UpperTriangularHasUniquePerfectMatching) {
  for (int n = 1; n <= 7; ++n) {
    SCOPED_TRACE(n);
    const auto inst = gen_upper_triangular(n);
    int perfect = 0;
    naive::for_each_matching(inst, [&](const std::vector<int>& p) {
      bool full = true;
      for (int v : p) full = full && v != naive::kNone;
      if (full) {
        ++perfect;
        for (int u = 0; u < n; ++u) EXPECT_EQ(p[u], u);
      }
    });
    EXPECT_EQ(perfect, 1);
    const auto r = solve_optimal(Graph(inst));
    EXPECT_EQ(r.optimum_value, n);
    for (int u = 0; u < n; ++u) EXPECT_EQ(r.annotation.partner[u], u);
  }
  const auto r = solve_optimal(Graph(gen_upper_triangular(8)));
  for (int u = 0; u < 8; ++u) EXPECT_EQ(r.annotation.partner[u], u);
}

}  // namespace
}  // namespace omlab
