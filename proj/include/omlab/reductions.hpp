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

// Reduction from single-bid budgeted allocation to vertex-weighted matching,
// with solution mappings in both directions.
//
// Agent i becomes n_i full copies of weight b_i (n_i = max{n : n b_i <= B_i})
// plus one residual vertex of weight r_i = B_i - n_i b_i when r_i > 0. Every
// copy is adjacent to exactly the items agent i bids on.

#ifndef OMLAB_REDUCTIONS_HPP_
#define OMLAB_REDUCTIONS_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "omlab/allocation.hpp"
#include "omlab/instance.hpp"

namespace omlab {

enum class CopyKind { kFull, kResidual };

inline const char* to_string(CopyKind k) { return k == CopyKind::kFull ? "full" : "residual"; }

struct CopyOrigin {
  int agent = 0;
  CopyKind kind = CopyKind::kFull;
};

struct AgentCounts {
  long long full_copies = 0;  // n_i
  double residual = 0.0;      // r_i
  int first_vertex = 0;       // offline id of the first copy of agent i
  bool has_residual() const { return residual > 0.0; }
};

struct ReductionImage {
  VertexWeightedInstance instance;
  std::vector<CopyOrigin> origin;  // by offline id
  std::vector<AgentCounts> counts; // by agent id
};

inline constexpr long long kMaxCopiesPerAgent = 10'000'000;

// Largest n with n * bid <= budget, computed against the same floating
// products that later define the residual.
inline long long full_copy_count(double budget, double bid) {
  double q = std::floor(budget / bid);
  if (q > static_cast<double>(kMaxCopiesPerAgent)) {
    throw std::length_error("budget/bid ratio too large to expand into copies");
  }
  auto n = static_cast<long long>(q);
  while (static_cast<double>(n + 1) * bid <= budget) ++n;
  while (n > 0 && static_cast<double>(n) * bid > budget) --n;
  return n;
}

inline ReductionImage reduce_single_bid(const BudgetedAllocationInstance& a) {
  require_valid(a);
  ReductionImage img;
  const int n_agents = a.agent_count();
  img.counts.resize(n_agents);
  std::vector<int> item_to_online(a.item_count());
  for (int item = 0; item < a.item_count(); ++item) {
    img.instance.online.push_back(item);
    item_to_online[item] = item;
  }
  img.instance.arrival = a.items;
  int next = 0;
  for (int i = 0; i < n_agents; ++i) {
    const Agent& ag = a.agents[i];
    AgentCounts& c = img.counts[i];
    c.full_copies = full_copy_count(ag.budget, ag.bid);
    c.residual = ag.budget - static_cast<double>(c.full_copies) * ag.bid;
    c.first_vertex = next;
    auto add_vertex = [&](double weight, CopyKind kind) {
      img.instance.offline.push_back({next, weight, 1});
      img.origin.push_back({i, kind});
      for (int item : a.interest[i]) img.instance.edges.push_back({next, item_to_online[item]});
      ++next;
    };
    for (long long j = 0; j < c.full_copies; ++j) add_vertex(ag.bid, CopyKind::kFull);
    if (c.has_residual()) add_vertex(c.residual, CopyKind::kResidual);
  }
  std::sort(img.instance.edges.begin(), img.instance.edges.end());
  img.instance.edges.erase(std::unique(img.instance.edges.begin(), img.instance.edges.end()),
                           img.instance.edges.end());
  return img;
}

// Item v goes to agent i iff v is matched to one of i's copies. Revenue is
// priced on the allocation side, so it dominates the matching gain.
inline AllocationResult lift_matching_to_allocation(const BudgetedAllocationInstance& a,
                                                    const ReductionImage& img, const Matching& m) {
  std::vector<int> agent_of_item(a.item_count(), kNone);
  for (const auto& e : m.pairs) {
    if (e.offline < 0 || e.offline >= static_cast<int>(img.origin.size()) || e.online < 0 ||
        e.online >= a.item_count()) {
      throw std::invalid_argument("matching pair outside the reduction image");
    }
    if (agent_of_item[e.online] != kNone) throw std::invalid_argument("item matched twice");
    agent_of_item[e.online] = img.origin[e.offline].agent;
  }
  return evaluate_allocation(a, std::move(agent_of_item));
}

// Full copies absorb the first items; the residual vertex is used only when
// the agent is charged its whole budget.
inline Matching lift_allocation_to_matching(const BudgetedAllocationInstance& a,
                                            const ReductionImage& img,
                                            const AllocationResult& alloc) {
  // Re-pricing validates interest and shape.
  const AllocationResult priced = evaluate_allocation(a, alloc.agent_of_item);
  const Graph g(img.instance);
  std::vector<Edge> pairs;
  const auto per_agent = priced.items_per_agent(a.agent_count());
  for (int i = 0; i < a.agent_count(); ++i) {
    const auto& items = per_agent[i];
    const AgentCounts& c = img.counts[i];
    const auto size = static_cast<long long>(items.size());
    long long use_full = std::min(size, c.full_copies);
    for (long long j = 0; j < use_full; ++j) {
      pairs.push_back({c.first_vertex + static_cast<int>(j), items[j]});
    }
    if (size > c.full_copies && c.has_residual()) {
      pairs.push_back({c.first_vertex + static_cast<int>(c.full_copies), items[use_full]});
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return make_matching(g, std::move(pairs));
}

}  // namespace omlab

#endif  // OMLAB_REDUCTIONS_HPP_
