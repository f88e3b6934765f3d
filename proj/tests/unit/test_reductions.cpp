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
#include "omlab/online.hpp"
#include "omlab/oracle.hpp"
#include "omlab/reductions.hpp"
#include "random_cases.hpp"

namespace omlab {
namespace {

BudgetedAllocationInstance one_agent(double budget, double bid, int items) {
  BudgetedAllocationInstance a;
  a.agents = {{0, budget, bid}};
  a.interest.resize(1);
  for (int j = 0; j < items; ++j) {
    a.items.push_back(j);
    a.interest[0].push_back(j);
  }
  return a;
}

std::vector<double> weights(const ReductionImage& img) {
  std::vector<double> w;
  for (const auto& u : img.instance.offline) w.push_back(u.weight);
  return w;
}

TEST(Reduce, FullCopiesPlusResidual) {
  const auto img = reduce_single_bid(one_agent(10, 3, 4));
  EXPECT_EQ(weights(img), (std::vector<double>{3, 3, 3, 1}));
  EXPECT_EQ(img.counts[0].full_copies, 3);
  EXPECT_EQ(img.counts[0].residual, 1.0);
  EXPECT_EQ(img.origin[3].kind, CopyKind::kResidual);
  EXPECT_EQ(img.instance.edges.size(), 16u);
  EXPECT_TRUE(validate(img.instance).empty());
}

TEST(Reduce, ExactDivisionHasNoResidual) {
  const auto img = reduce_single_bid(one_agent(6, 3, 2));
  EXPECT_EQ(weights(img), (std::vector<double>{3, 3}));
  EXPECT_FALSE(img.counts[0].has_residual());
}

TEST(Reduce, BidAboveBudgetLeavesOnlyResidual) {
  const auto img = reduce_single_bid(one_agent(2, 3, 2));
  EXPECT_EQ(weights(img), (std::vector<double>{2}));
  EXPECT_EQ(img.counts[0].full_copies, 0);
}

TEST(Reduce, CopiesSeeOnlyInterestingItems) {
  BudgetedAllocationInstance a;
  a.agents = {{0, 4, 2}, {1, 3, 3}};
  a.items = {1, 0, 2};
  a.interest = {{0, 2}, {1}};
  const auto img = reduce_single_bid(a);
  EXPECT_EQ(img.instance.arrival, a.items);
  EXPECT_EQ(img.instance.edges, (std::vector<Edge>{{0, 0}, {0, 2}, {1, 0}, {1, 2}, {2, 1}}));
}

TEST(Reduce, RejectsInvalidAllocation) {
  auto a = one_agent(10, 3, 2);
  a.agents[0].bid = 0.0;
  EXPECT_THROW(reduce_single_bid(a), std::invalid_argument);
}

TEST(LiftToAllocation, EmptyMatching) {
  const auto a = one_agent(10, 3, 4);
  const auto img = reduce_single_bid(a);
  const auto r = lift_matching_to_allocation(a, img, Matching{});
  EXPECT_EQ(r.revenue, 0.0);
  EXPECT_EQ(r.agent_of_item, (std::vector<int>(4, kNone)));
}

TEST(LiftToAllocation, AllFourVerticesPayBudget) {
  const auto a = one_agent(10, 3, 4);
  const auto img = reduce_single_bid(a);
  const Graph g(img.instance);
  const auto m = make_matching(g, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  EXPECT_EQ(m.gain, 10.0);
  EXPECT_EQ(lift_matching_to_allocation(a, img, m).revenue, 10.0);
}

TEST(LiftToAllocation, TwoFullCopies) {
  const auto a = one_agent(10, 3, 4);
  const auto img = reduce_single_bid(a);
  const auto m = make_matching(Graph(img.instance), {{0, 2}, {1, 3}});
  EXPECT_EQ(m.gain, 6.0);
  EXPECT_EQ(lift_matching_to_allocation(a, img, m).revenue, 6.0);
}

TEST(LiftToAllocation, ResidualAloneUnderpaysMatchingNever) {
  // Residual and one full copy: gain 4, agent pays min(10, 6) = 6.
  const auto a = one_agent(10, 3, 4);
  const auto img = reduce_single_bid(a);
  const auto m = make_matching(Graph(img.instance), {{0, 0}, {3, 1}});
  EXPECT_EQ(m.gain, 4.0);
  EXPECT_EQ(lift_matching_to_allocation(a, img, m).revenue, 6.0);
}

TEST(LiftToMatching, FewItemsUseFullCopies) {
  const auto a = one_agent(10, 3, 4);
  const auto img = reduce_single_bid(a);
  const auto alloc = evaluate_allocation(a, {0, kNone, 0, kNone});
  const auto m = lift_allocation_to_matching(a, img, alloc);
  EXPECT_EQ(m.pairs, (std::vector<Edge>{{0, 0}, {1, 2}}));
  EXPECT_EQ(m.gain, alloc.revenue);
}

TEST(LiftToMatching, BudgetPayingAgentUsesResidual) {
  const auto a = one_agent(10, 3, 4);
  const auto img = reduce_single_bid(a);
  const auto alloc = evaluate_allocation(a, {0, 0, 0, 0});
  EXPECT_EQ(alloc.revenue, 10.0);
  const auto m = lift_allocation_to_matching(a, img, alloc);
  EXPECT_EQ(m.pairs.size(), 4u);
  EXPECT_EQ(m.gain, 10.0);
}

TEST(LiftToMatching, NothingAllocated) {
  const auto a = one_agent(10, 3, 4);
  const auto img = reduce_single_bid(a);
  const auto m = lift_allocation_to_matching(a, img, evaluate_allocation(a, std::vector<int>(4, kNone)));
  EXPECT_TRUE(m.pairs.empty());
}

TEST(Reduce, AllocationOptimumEqualsMatchingOptimum) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    SCOPED_TRACE(cases::trace_label(seed));
    const auto a = cases::random_allocation(seed);
    const auto img = reduce_single_bid(a);
    const Graph g(img.instance);
    const Rational ref = naive::allocation_optimum(a);
    const auto brute = brute_force_optimal_allocation(a);
    const auto oracle = solve_optimal(g);
    EXPECT_EQ(Rational(brute.revenue), ref);
    EXPECT_EQ(Rational(oracle.optimum_value), ref);

    const auto back = lift_allocation_to_matching(a, img, brute);
    EXPECT_TRUE(check_matching(g, back).empty());
    EXPECT_EQ(back.gain, brute.revenue);

    const auto x = std::get<ContinuousPositions>(sample_assignment(g, ContinuousMode{}, seed)).x;
    const auto pg = run_perturbed_greedy(g, x, DecreasingExp{});
    EXPECT_GE(lift_matching_to_allocation(a, img, pg.matching).revenue, pg.gain);
  }
}

TEST(Reduce, FullCopyCountIsLargestFit) {
  EXPECT_EQ(full_copy_count(10, 3), 3);
  EXPECT_EQ(full_copy_count(0.3, 0.1), 2);  // 3 * 0.1 > 0.3 in binary
  EXPECT_EQ(full_copy_count(1, 0.25), 4);
  EXPECT_THROW(full_copy_count(1e9, 1e-3), std::length_error);
}

}  // namespace
}  // namespace omlab
