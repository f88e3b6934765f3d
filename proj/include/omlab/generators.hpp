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

// Seeded generators for the instance families used as evidence or
// counterexamples. Every generator is a pure function of its arguments.

#ifndef OMLAB_GENERATORS_HPP_
#define OMLAB_GENERATORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "omlab/allocation.hpp"
#include "omlab/instance.hpp"
#include "omlab/rational.hpp"

namespace omlab {

// Online v_j is adjacent to offline u_j..u_{n-1}; unit weights. The diagonal
// is the unique perfect matching.
inline VertexWeightedInstance gen_upper_triangular(int n) {
  if (n < 1) throw std::invalid_argument("upper-triangular needs n >= 1");
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) {
    for (int u = v; u < n; ++u) edges.push_back({u, v});
  }
  return make_instance(std::vector<double>(n, 1.0), n, std::move(edges));
}

// Disjoint copies of: u1 (1+eps), u2 (1); v1 ~ {u1, u2} arrives first,
// v2 ~ {u1} second. Greedy takes u1 for v1 and strands v2. With `swap` the
// weights trade places, which hurts Ranking instead.
inline VertexWeightedInstance gen_greedy_gadget(double eps, int copies, bool swap = false) {
  if (!(eps > 0.0)) throw std::invalid_argument("greedy gadget needs eps > 0");
  if (copies < 1) throw std::invalid_argument("greedy gadget needs copies >= 1");
  std::vector<double> w;
  std::vector<Edge> edges;
  for (int c = 0; c < copies; ++c) {
    const int u1 = 2 * c, u2 = 2 * c + 1, v1 = 2 * c, v2 = 2 * c + 1;
    w.push_back(swap ? 1.0 : 1.0 + eps);
    w.push_back(swap ? 1.0 + eps : 1.0);
    edges.push_back({u1, v1});
    edges.push_back({u2, v1});
    edges.push_back({u1, v2});
  }
  return make_instance(std::move(w), 2 * copies, std::move(edges));
}

// The two potentially hard 2x2 instances with b_{u1} = alpha, b_{u2} = 1.
// first: v1 ~ {u1, u2}, v2 ~ {u1}; second: v1 ~ {u1, u2}, v2 ~ {u2}.
inline std::pair<VertexWeightedInstance, VertexWeightedInstance> gen_canonical_2x2(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  auto first = make_instance({alpha, 1.0}, 2, {{0, 0}, {1, 0}, {0, 1}});
  auto second = make_instance({alpha, 1.0}, 2, {{0, 0}, {1, 0}, {1, 1}});
  return {std::move(first), std::move(second)};
}

// Two instances over the same weight multiset {1, 1, heavy, heavy}.
// G1: two equal-weight components shaped like the 2x2 hard instance, where the
// id tie-break walks Greedy into the bad choice.
// G2: two skewed components where the heavy vertex is the right first pick,
// so Greedy is optimal and uniform Ranking is not.
inline std::pair<VertexWeightedInstance, VertexWeightedInstance> gen_skew_pair(double heavy = 10.0) {
  if (!(heavy > 1.0)) throw std::invalid_argument("skew pair needs heavy > 1");
  auto g1 = make_instance({1.0, 1.0, heavy, heavy}, 4,
                          {{0, 0}, {1, 0}, {0, 1}, {2, 2}, {3, 2}, {2, 3}});
  // Components (u0 heavy, u1 light) and (u2 heavy, u3 light); the light vertex
  // is contested by the second arrival of each component.
  auto g2 = make_instance({heavy, 1.0, heavy, 1.0}, 4,
                          {{0, 0}, {1, 0}, {1, 1}, {2, 2}, {3, 2}, {3, 3}});
  return {std::move(g1), std::move(g2)};
}

// Single offline vertex; arrival j carries edge weight vectors[i][j].
struct EdgeWeightedStar {
  int n = 1;
  double base = 2.0;  // D
  std::vector<std::vector<double>> vectors;
  std::vector<double> probabilities;
};

// Vector i (1-based) is (D^i, D^{i+1}, ..., D^n, 0, ..., 0), each with
// probability 1/n. OPT = D^n for every vector.
inline EdgeWeightedStar gen_edge_weight_hard(int n, double base) {
  if (n < 1) throw std::invalid_argument("edge-weight-hard needs n >= 1");
  if (!(base > 1.0)) throw std::invalid_argument("edge-weight-hard needs D > 1");
  EdgeWeightedStar s{n, base, {}, {}};
  for (int i = 1; i <= n; ++i) {
    std::vector<double> v(n, 0.0);
    for (int j = 0; i + j <= n; ++j) v[j] = std::pow(base, i + j);
    s.vectors.push_back(std::move(v));
    s.probabilities.push_back(1.0 / n);
  }
  return s;
}

// Expected value / OPT of the rule "match the k-th arrival" for k = 1..n,
// by exact enumeration of the distribution. A scale-free online algorithm is
// one of these rules.
inline std::vector<Rational> stopping_rule_ratios(const EdgeWeightedStar& s) {
  std::vector<Rational> out;
  for (int k = 1; k <= s.n; ++k) {
    Rational expected = 0;
    for (std::size_t i = 0; i < s.vectors.size(); ++i) {
      const auto& v = s.vectors[i];
      const double best = *std::max_element(v.begin(), v.end());
      if (best > 0.0) expected += exact(s.probabilities[i]) * exact(v[k - 1]) / exact(best);
    }
    Rational mass = 0;
    for (double p : s.probabilities) mass += exact(p);
    out.push_back(expected / mass);
  }
  return out;
}

enum class WeightDist { kUniform, kUniformInt, kLogNormal, kTwoPoint };

inline WeightDist parse_weight_dist(const std::string& s) {
  if (s == "uniform") return WeightDist::kUniform;
  if (s == "uniform-int") return WeightDist::kUniformInt;
  if (s == "lognormal") return WeightDist::kLogNormal;
  if (s == "two-point") return WeightDist::kTwoPoint;
  throw std::invalid_argument("unknown weight distribution: " + s);
}

struct RandomBipartiteSpec {
  int offline = 5;
  int online = 5;
  double edge_prob = 0.5;
  WeightDist weights = WeightDist::kUniform;
  bool shuffle_arrival = true;
};

inline VertexWeightedInstance gen_random_bipartite(const RandomBipartiteSpec& spec,
                                                   std::uint64_t seed) {
  if (spec.offline < 0 || spec.online < 0 || !(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) {
    throw std::invalid_argument("bad random-bipartite parameters");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(spec.offline);
  for (auto& x : w) {
    switch (spec.weights) {
      case WeightDist::kUniform: x = unit(rng); break;
      case WeightDist::kUniformInt: x = static_cast<double>(1 + rng() % 10); break;
      case WeightDist::kLogNormal: x = std::lognormal_distribution<double>(0.0, 1.0)(rng); break;
      case WeightDist::kTwoPoint: x = unit(rng) < 0.8 ? 1.0 : 100.0; break;
    }
  }
  std::vector<Edge> edges;
  for (int u = 0; u < spec.offline; ++u) {
    for (int v = 0; v < spec.online; ++v) {
      if (spec.edge_prob >= 1.0 || unit(rng) < spec.edge_prob) edges.push_back({u, v});
    }
  }
  std::vector<int> arrival(spec.online);
  for (int v = 0; v < spec.online; ++v) arrival[v] = v;
  if (spec.shuffle_arrival) {
    for (int i = spec.online - 1; i > 0; --i) {
      std::swap(arrival[i], arrival[std::uniform_int_distribution<int>(0, i)(rng)]);
    }
  }
  if (spec.online == 0) return make_instance(std::move(w), 0, std::move(edges), {});
  return make_instance(std::move(w), spec.online, std::move(edges), std::move(arrival));
}

struct SingleBidSpec {
  int agents = 3;
  int items = 5;
  int max_bid = 5;      // bids uniform in 1..max_bid
  int max_budget = 12;  // budgets uniform in 1..max_budget
  double interest_prob = 0.5;
};

// Integer-valued bids and budgets, so every revenue is exact in doubles.
inline BudgetedAllocationInstance gen_single_bid_alloc(const SingleBidSpec& spec,
                                                       std::uint64_t seed) {
  if (spec.agents < 1 || spec.items < 0 || spec.max_bid < 1 || spec.max_budget < 1) {
    throw std::invalid_argument("bad single-bid parameters");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BudgetedAllocationInstance a;
  for (int i = 0; i < spec.agents; ++i) {
    const double bid = static_cast<double>(1 + rng() % spec.max_bid);
    const double budget = static_cast<double>(1 + rng() % spec.max_budget);
    a.agents.push_back({i, budget, bid});
  }
  a.interest.assign(spec.agents, {});
  for (int i = 0; i < spec.agents; ++i) {
    for (int item = 0; item < spec.items; ++item) {
      if (unit(rng) < spec.interest_prob) a.interest[i].push_back(item);
    }
  }
  a.items.resize(spec.items);
  for (int item = 0; item < spec.items; ++item) a.items[item] = item;
  for (int i = spec.items - 1; i > 0; --i) {
    std::swap(a.items[i], a.items[std::uniform_int_distribution<int>(0, i)(rng)]);
  }
  return a;
}

// Stress family for the MSVV comparison: `agents` identical agents with
// budget capacity * bid; items arrive in groups j = 0..agents-1 of `capacity`
// items each, group j bidding on agents 0..agents-1-j. Low ids are the ones
// late groups depend on, so the lowest-id tie-break is the wrong default.
inline BudgetedAllocationInstance gen_msvv_stress(int agents, double bid, int capacity) {
  if (agents < 1 || capacity < 1 || !(bid > 0.0)) {
    throw std::invalid_argument("bad msvv stress parameters");
  }
  BudgetedAllocationInstance a;
  for (int i = 0; i < agents; ++i) a.agents.push_back({i, bid * capacity, bid});
  a.interest.assign(agents, {});
  int item = 0;
  for (int j = 0; j < agents; ++j) {
    for (int c = 0; c < capacity; ++c, ++item) {
      a.items.push_back(item);
      for (int i = 0; i < agents - j; ++i) a.interest[i].push_back(item);
    }
  }
  return a;
}

// Family name plus every size parameter; a pure description that `generate`
// turns into an instance. Unused fields are ignored by the chosen family.
struct GeneratorSpec {
  std::string family = "upper-triangular";
  std::uint64_t seed = 1;
  int n = 2;               // upper-triangular, edge-weight-hard, random-bipartite offline side
  int m = 2;               // random-bipartite online side
  double eps = 0.01;       // greedy-gadget
  int copies = 1;          // greedy-gadget
  bool swap = false;       // greedy-gadget
  int which = 1;           // skew-pair (G1 / G2), canonical-2x2 (first / second)
  double heavy = 10.0;     // skew-pair
  double alpha = 1.0;      // canonical-2x2
  double base = 2.0;       // edge-weight-hard D
  double edge_prob = 0.5;  // random-bipartite
  std::string weights = "uniform";
  SingleBidSpec alloc;     // single-bid-alloc
  double bid = 1.0;        // msvv-stress
  int capacity = 1;        // msvv-stress
};

using GeneratedInstance = std::variant<VertexWeightedInstance, BudgetedAllocationInstance, EdgeWeightedStar>;

inline const std::vector<std::string>& generator_families() {
  static const std::vector<std::string> names{
      "upper-triangular", "greedy-gadget",  "skew-pair",        "canonical-2x2",
      "edge-weight-hard", "random-bipartite", "single-bid-alloc", "msvv-stress"};
  return names;
}

inline GeneratedInstance generate(const GeneratorSpec& s) {
  auto pick = [&](auto pair) {
    if (s.which != 1 && s.which != 2) throw std::invalid_argument("which must be 1 or 2");
    return s.which == 1 ? std::move(pair.first) : std::move(pair.second);
  };
  if (s.family == "upper-triangular") return gen_upper_triangular(s.n);
  if (s.family == "greedy-gadget") return gen_greedy_gadget(s.eps, s.copies, s.swap);
  if (s.family == "skew-pair") return pick(gen_skew_pair(s.heavy));
  if (s.family == "canonical-2x2") return pick(gen_canonical_2x2(s.alpha));
  if (s.family == "edge-weight-hard") return gen_edge_weight_hard(s.n, s.base);
  if (s.family == "random-bipartite") {
    return gen_random_bipartite({s.n, s.m, s.edge_prob, parse_weight_dist(s.weights), true}, s.seed);
  }
  if (s.family == "single-bid-alloc") return gen_single_bid_alloc(s.alloc, s.seed);
  if (s.family == "msvv-stress") return gen_msvv_stress(s.n, s.bid, s.capacity);
  throw std::invalid_argument("unknown generator family: " + s.family);
}

}  // namespace omlab

#endif  // OMLAB_GENERATORS_HPP_
