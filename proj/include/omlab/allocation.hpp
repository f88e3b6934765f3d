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

// Single-bid online budgeted allocation: agent i has budget B_i and bids either
// b_i or nothing on each item. An agent receiving item set S pays
// min(B_i, |S| * b_i).

#ifndef OMLAB_ALLOCATION_HPP_
#define OMLAB_ALLOCATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omlab/instance.hpp"

namespace omlab {

struct Agent {
  int id = 0;
  double budget = 1.0;
  double bid = 1.0;
};

struct BudgetedAllocationInstance {
  std::vector<Agent> agents;
  std::vector<int> items;                    // item ids in arrival order
  std::vector<std::vector<int>> interest;    // indexed by agent id

  int agent_count() const { return static_cast<int>(agents.size()); }
  int item_count() const { return static_cast<int>(items.size()); }

  const Agent& agent(int id) const { return agents.at(static_cast<std::size_t>(id)); }

  bool interested(int agent_id, int item) const {
    const auto& s = interest.at(agent_id);
    return std::find(s.begin(), s.end(), item) != s.end();
  }
};

inline std::vector<std::string> validate(const BudgetedAllocationInstance& a) {
  std::vector<std::string> out;
  const int n = a.agent_count();
  const int m = a.item_count();
  for (int pos = 0; pos < n; ++pos) {
    const auto& ag = a.agents[pos];
    if (ag.id != pos) out.push_back("agent at position " + std::to_string(pos) + " has id " + std::to_string(ag.id));
    if (!(std::isfinite(ag.budget) && ag.budget > 0)) out.push_back("agent " + std::to_string(ag.id) + ": budget must be > 0");
    if (!(std::isfinite(ag.bid) && ag.bid > 0)) out.push_back("agent " + std::to_string(ag.id) + ": bid must be > 0");
  }
  std::vector<char> seen(m, 0);
  for (int id : a.items) {
    if (id < 0 || id >= m) {
      out.push_back("item id " + std::to_string(id) + " out of range");
    } else if (seen[id]++) {
      out.push_back("item id " + std::to_string(id) + " repeated");
    }
  }
  if (static_cast<int>(a.interest.size()) != n) {
    out.push_back("interest table must have one entry per agent");
  } else {
    for (int i = 0; i < n; ++i) {
      for (int item : a.interest[i]) {
        if (item < 0 || item >= m) {
          out.push_back("agent " + std::to_string(i) + " interested in missing item " + std::to_string(item));
        }
      }
    }
  }
  return out;
}

inline void require_valid(const BudgetedAllocationInstance& a) {
  if (auto v = validate(a); !v.empty()) {
    std::string msg = "invalid allocation instance:";
    for (const auto& s : v) msg += " " + s + ";";
    throw std::invalid_argument(msg);
  }
}

struct AllocationResult {
  std::vector<int> agent_of_item;  // indexed by item id; kNone if unallocated
  std::vector<double> spend;       // per agent, min(B_i, |S_i| b_i)
  double revenue = 0.0;

  std::vector<std::vector<int>> items_per_agent(int agents) const {
    std::vector<std::vector<int>> out(agents);
    for (int item = 0; item < static_cast<int>(agent_of_item.size()); ++item) {
      if (agent_of_item[item] != kNone) out[agent_of_item[item]].push_back(item);
    }
    return out;
  }
};

// Prices an item -> agent assignment. Throws if an item goes to an agent that
// does not bid on it.
inline AllocationResult evaluate_allocation(const BudgetedAllocationInstance& a,
                                            std::vector<int> agent_of_item) {
  const int n = a.agent_count();
  if (static_cast<int>(agent_of_item.size()) != a.item_count()) {
    throw std::invalid_argument("allocation must list one agent (or none) per item");
  }
  std::vector<int> counts(n, 0);
  for (int item = 0; item < a.item_count(); ++item) {
    const int ag = agent_of_item[item];
    if (ag == kNone) continue;
    if (ag < 0 || ag >= n || !a.interested(ag, item)) {
      throw std::invalid_argument("item " + std::to_string(item) +
                                  " allocated to an agent without a bid on it");
    }
    ++counts[ag];
  }
  AllocationResult r;
  r.agent_of_item = std::move(agent_of_item);
  r.spend.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    r.spend[i] = std::min(a.agents[i].budget, counts[i] * a.agents[i].bid);
    r.revenue += r.spend[i];
  }
  return r;
}

inline constexpr int kAllocationBruteForceMaxItems = 6;

// Exhaustive search over every item -> (agent | none) assignment. Among optimal
// assignments the first one in enumeration order is returned.
inline AllocationResult brute_force_optimal_allocation(const BudgetedAllocationInstance& a) {
  require_valid(a);
  const int m = a.item_count();
  if (m > kAllocationBruteForceMaxItems) {
    throw std::length_error("brute-force allocation guard: at most " +
                            std::to_string(kAllocationBruteForceMaxItems) + " items");
  }
  const int n = a.agent_count();
  std::vector<std::vector<int>> bidders(m);
  for (int i = 0; i < n; ++i) {
    for (int item : a.interest[i]) bidders[item].push_back(i);
  }
  for (auto& b : bidders) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  std::vector<int> current(m, kNone), best(m, kNone);
  std::vector<int> counts(n, 0);
  double best_revenue = -1.0;
  std::function<void(int)> rec = [&](int item) {
    if (item == m) {
      double revenue = 0.0;
      for (int i = 0; i < n; ++i) revenue += std::min(a.agents[i].budget, counts[i] * a.agents[i].bid);
      if (revenue > best_revenue) {
        best_revenue = revenue;
        best = current;
      }
      return;
    }
    for (int ag : bidders[item]) {
      current[item] = ag;
      ++counts[ag];
      rec(item + 1);
      --counts[ag];
    }
    current[item] = kNone;
    rec(item + 1);
  };
  rec(0);
  return evaluate_allocation(a, best);
}

}  // namespace omlab

#endif  // OMLAB_ALLOCATION_HPP_
