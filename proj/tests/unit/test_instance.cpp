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
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "naive_sim.hpp"
#include "omlab/instance.hpp"
#include "random_cases.hpp"

namespace omlab {
namespace {

VertexWeightedInstance two_by_two() { return make_instance({1.0, 1.0}, 2, {{0, 0}, {1, 0}, {0, 1}}); }

bool has_kind(const std::vector<Violation>& v, ViolationKind k) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
}

TEST(Validate, WellFormedTwoByTwoHasNoViolations) { EXPECT_TRUE(validate(two_by_two()).empty()); }

TEST(Validate, DanglingEdgeIsReported) {
  auto inst = two_by_two();
  inst.edges.push_back({5, 0});
  const auto v = validate(inst);
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(has_kind(v, ViolationKind::kDanglingEdge));
  EXPECT_NE(v.front().message.find('5'), std::string::npos);
}

TEST(Validate, NegativeWeightIsReported) {
  auto inst = two_by_two();
  inst.offline[1].weight = -1.0;
  const auto v = validate(inst);
  EXPECT_TRUE(has_kind(v, ViolationKind::kNegativeWeight));
}

TEST(Validate, OtherInvariants) {
  auto cap = two_by_two();
  cap.offline[0].capacity = 0;
  EXPECT_TRUE(has_kind(validate(cap), ViolationKind::kBadCapacity));

  auto dup = two_by_two();
  dup.offline[1].id = 0;
  EXPECT_TRUE(has_kind(validate(dup), ViolationKind::kDuplicateId));

  auto arrival = two_by_two();
  arrival.arrival = {0, 0};
  EXPECT_TRUE(has_kind(validate(arrival), ViolationKind::kArrivalNotPermutation));

  auto edge = two_by_two();
  edge.edges.push_back({0, 0});
  EXPECT_TRUE(has_kind(validate(edge), ViolationKind::kDuplicateEdge));

  auto nan = two_by_two();
  nan.offline[0].weight = std::nan("");
  EXPECT_TRUE(has_kind(validate(nan), ViolationKind::kNonFiniteWeight));
}

TEST(Validate, ZeroWeightIsLegal) {
  auto inst = two_by_two();
  inst.offline[0].weight = 0.0;
  EXPECT_TRUE(validate(inst).empty());
}

TEST(Graph, RejectsInvalidInstance) {
  auto inst = two_by_two();
  inst.edges.push_back({0, 9});
  EXPECT_THROW(Graph{inst}, InvalidInstance);
}

TEST(Matching, GainIsRecomputedAndOrderFree) {
  const Graph g(make_instance({2.0, 3.0}, 2, {{0, 0}, {1, 1}}));
  const Matching a = make_matching(g, {{0, 0}, {1, 1}});
  const Matching b = make_matching(g, {{1, 1}, {0, 0}});
  EXPECT_EQ(a.gain, 5.0);
  EXPECT_EQ(a.gain, b.gain);
  EXPECT_TRUE(check_matching(g, a).empty());
  Matching drifted = a;
  drifted.gain = 4.0;
  EXPECT_FALSE(check_matching(g, drifted).empty());
  EXPECT_FALSE(check_matching(g, make_matching(g, {{0, 1}})).empty());
}

TEST(Matching, CapacityCountsAtMostCuTimes) {
  VertexWeightedInstance inst = make_instance({4.0}, 3, {{0, 0}, {0, 1}, {0, 2}});
  inst.offline[0].capacity = 2;
  const Graph g(inst);
  const Matching m = make_matching(g, {{0, 0}, {0, 1}, {0, 2}});
  EXPECT_EQ(m.gain, 8.0);
  EXPECT_FALSE(check_matching(g, m).empty());
}

TEST(ExpandCapacities, UnitCapacityIsIdentity) {
  const auto inst = two_by_two();
  const auto ex = expand_capacities(inst);
  EXPECT_EQ(ex.instance.offline.size(), inst.offline.size());
  EXPECT_EQ(ex.instance.edges, inst.edges);
  EXPECT_EQ(ex.copy_to_original, (std::vector<int>{0, 1}));
}

TEST(ExpandCapacities, ThreeCopiesOfWeightFive) {
  VertexWeightedInstance inst = make_instance({5.0}, 1, {{0, 0}});
  inst.offline[0].capacity = 3;
  const auto ex = expand_capacities(inst);
  ASSERT_EQ(ex.instance.offline.size(), 3u);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(ex.instance.offline[j].weight, 5.0);
    EXPECT_EQ(ex.instance.offline[j].capacity, 1);
    EXPECT_EQ(ex.copy_index[j], j);
  }
  EXPECT_EQ(ex.instance.edges, (std::vector<Edge>{{0, 0}, {1, 0}, {2, 0}}));
  EXPECT_TRUE(validate(ex.instance).empty());
}

// Every matching of the expanded image of a 2-offline-vertex instance lifts
// to a feasible matching with the same gain.
TEST(ExpandCapacities, LiftOfEveryMatchingIsFeasible) {
  VertexWeightedInstance inst = make_instance({2.0, 3.0}, 4, {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 3}});
  inst.offline[0].capacity = 2;
  inst.offline[1].capacity = 3;
  const Graph g(inst);
  const auto ex = expand_capacities(inst);
  const Graph eg(ex.instance);
  int seen = 0;
  naive::for_each_matching(ex.instance, [&](const std::vector<int>& partner) {
    std::vector<Edge> pairs;
    for (int c = 0; c < static_cast<int>(partner.size()); ++c) {
      if (partner[c] != kNone) pairs.push_back({c, partner[c]});
    }
    const Matching m = make_matching(eg, pairs);
    const Matching lifted = ex.lift(g, m);
    EXPECT_TRUE(check_matching(g, lifted).empty());
    EXPECT_EQ(lifted.gain, m.gain);
    std::vector<int> uses(2, 0);
    for (const auto& e : lifted.pairs) ++uses[e.offline];
    EXPECT_LE(uses[0], 2);
    EXPECT_LE(uses[1], 3);
    ++seen;
  });
  EXPECT_GT(seen, 10);
}

TEST(ExpandCapacities, PreservesValidityOnRandomCases) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    SCOPED_TRACE(cases::trace_label(seed));
    VertexWeightedInstance inst = cases::random_instance(seed);
    std::mt19937_64 rng(seed);
    for (auto& u : inst.offline) u.capacity = cases::uniform_int(rng, 1, 3);
    ASSERT_TRUE(validate(inst).empty());
    const auto ex = expand_capacities(inst);
    EXPECT_TRUE(validate(ex.instance).empty());
    int total = 0;
    for (const auto& u : inst.offline) total += u.capacity;
    EXPECT_EQ(ex.instance.offline_count(), total);
  }
}

}  // namespace
}  // namespace omlab
