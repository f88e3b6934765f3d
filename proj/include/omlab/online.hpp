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

// Online policies: Greedy, Ranking, Perturbed-Greedy (continuous and discrete)
// and the MSVV budget-scaling rule for budgeted allocation.
//
// Every policy is the same loop: each arriving online vertex takes its most
// preferred unmatched neighbor. Policies differ only in the preference order.
// Neighbors are scanned in ascending id and replaced only on strict
// preference, so equal keys resolve to the lowest id.

#ifndef OMLAB_ONLINE_HPP_
#define OMLAB_ONLINE_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "omlab/allocation.hpp"
#include "omlab/instance.hpp"
#include "omlab/perturbation.hpp"
#include "omlab/rational.hpp"

namespace omlab {

struct TraceEntry {
  int online = 0;
  int offline = kNone;
  double score = 0.0;  // key of the winner (b_u, or b_u * psi for perturbed runs)
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct MatchResult {
  Matching matching;
  std::vector<TraceEntry> trace;
  double gain = 0.0;

  // Offline partner of each online vertex, kNone if unmatched.
  std::vector<int> partner_of_online(int online_count) const {
    std::vector<int> out(online_count, kNone);
    for (const auto& e : matching.pairs) out[e.online] = e.offline;
    return out;
  }
};

// `prefer(a, b)` must be a strict order on offline ids; `score(u)` is only
// recorded in the trace.
template <class Prefer, class Score>
MatchResult match_in_arrival_order(const Graph& g, Prefer&& prefer, Score&& score) {
  require_unit_capacities(g);
  MatchResult r;
  r.trace.reserve(g.online_count());
  std::vector<char> taken(g.offline_count(), 0);
  for (int v : g.arrival()) {
    int best = kNone;
    for (int u : g.neighbors_of_online(v)) {
      if (taken[u]) continue;
      if (best == kNone || prefer(u, best)) best = u;
    }
    if (best == kNone) {
      r.trace.push_back({v, kNone, 0.0});
      continue;
    }
    taken[best] = 1;
    r.matching.pairs.push_back({best, v});
    r.trace.push_back({v, best, static_cast<double>(score(best))});
  }
  r.matching.gain = matching_gain(g, r.matching.pairs);
  r.gain = r.matching.gain;
  return r;
}

inline MatchResult run_greedy(const Graph& g) {
  return match_in_arrival_order(
      g, [&](int a, int b) { return g.weight(a) > g.weight(b); },
      [&](int u) { return g.weight(u); });
}

// `permutation` lists offline ids from highest to lowest rank.
inline MatchResult run_ranking(const Graph& g, std::span<const int> permutation) {
  const int n = g.offline_count();
  if (static_cast<int>(permutation.size()) != n) {
    throw std::invalid_argument("ranking permutation has wrong length");
  }
  std::vector<int> rank(n, -1);
  for (int pos = 0; pos < n; ++pos) {
    const int u = permutation[pos];
    if (u < 0 || u >= n || rank[u] != -1) {
      throw std::invalid_argument("ranking input is not a permutation of the offline ids");
    }
    rank[u] = pos;
  }
  return match_in_arrival_order(
      g, [&](int a, int b) { return rank[a] < rank[b]; }, [&](int u) { return g.weight(u); });
}

struct ContinuousPositions {
  std::vector<double> x;  // x_u in [0, 1]
};

struct DiscretePositions {
  int k = 1;
  std::vector<int> sigma;  // sigma(u) in 1..k
};

using PositionAssignment = std::variant<ContinuousPositions, DiscretePositions>;

inline void check_assignment(const Graph& g, const PositionAssignment& a) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ContinuousPositions>) {
          if (static_cast<int>(p.x.size()) != g.offline_count()) {
            throw std::invalid_argument("assignment does not cover every offline vertex");
          }
          for (double x : p.x) {
            if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("continuous position outside [0, 1]");
          }
        } else {
          if (static_cast<int>(p.sigma.size()) != g.offline_count()) {
            throw std::invalid_argument("assignment does not cover every offline vertex");
          }
          for (int s : p.sigma) {
            if (s < 1 || s > p.k) throw std::invalid_argument("discrete position outside 1..k");
          }
        }
      },
      a);
}

// Exact order of the discrete scores b_u * psi(i) over all (u, i). Two pairs
// get the same rank iff their scores are equal. Up to kExactLimit positions the
// comparison is done in rationals; beyond that in long double.
class DiscreteScoreTable {
 public:
  static constexpr int kExactLimit = 64;

  DiscreteScoreTable(const Graph& g, DiscretePsi psi_fn) : n_(g.offline_count()), k_(psi_fn.k) {
    if (k_ < 1) throw std::invalid_argument("k must be >= 1");
    const std::size_t cells = static_cast<std::size_t>(n_) * k_;
    rank_.assign(cells, 0);
    score_.assign(cells, 0.0);
    std::vector<std::size_t> order(cells);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int u = 0; u < n_; ++u) {
      for (int i = 1; i <= k_; ++i) score_[cell(u, i)] = g.weight(u) * psi(psi_fn, i);
    }
    if (k_ <= kExactLimit) {
      std::vector<Rational> psi_q(k_ + 1);
      for (int i = 1; i <= k_; ++i) psi_q[i] = psi_exact(psi_fn, i);
      std::vector<Rational> key(cells);
      for (int u = 0; u < n_; ++u) {
        const Rational b = exact(g.weight(u));
        for (int i = 1; i <= k_; ++i) key[cell(u, i)] = b * psi_q[i];
      }
      assign_ranks(order, key);
    } else {
      std::vector<long double> key(cells);
      const long double log_q = std::log1p(-1.0L / k_);
      for (int u = 0; u < n_; ++u) {
        for (int i = 1; i <= k_; ++i) {
          key[cell(u, i)] = static_cast<long double>(g.weight(u)) *
                            -std::expm1(static_cast<long double>(k_ - i + 1) * log_q);
        }
      }
      assign_ranks(order, key);
    }
  }

  int k() const { return k_; }
  int offline_count() const { return n_; }
  // Larger rank means larger b_u * psi(i).
  int rank(int u, int i) const { return rank_[cell(u, i)]; }
  double score(int u, int i) const { return score_[cell(u, i)]; }

 private:
  std::size_t cell(int u, int i) const { return static_cast<std::size_t>(u) * k_ + (i - 1); }

  template <class Key>
  void assign_ranks(std::vector<std::size_t>& order, const std::vector<Key>& key) {
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    int r = 0;
    for (std::size_t j = 0; j < order.size(); ++j) {
      if (j > 0 && key[order[j - 1]] < key[order[j]]) ++r;
      rank_[order[j]] = r;
    }
  }

  int n_;
  int k_;
  std::vector<int> rank_;
  std::vector<double> score_;
};

inline MatchResult run_perturbed_greedy(const Graph& g, const DiscreteScoreTable& table,
                                        std::span<const int> sigma) {
  if (table.offline_count() != g.offline_count() ||
      static_cast<int>(sigma.size()) != g.offline_count()) {
    throw std::invalid_argument("score table or assignment does not match the instance");
  }
  return match_in_arrival_order(
      g, [&](int a, int b) { return table.rank(a, sigma[a]) > table.rank(b, sigma[b]); },
      [&](int u) { return table.score(u, sigma[u]); });
}

inline MatchResult run_perturbed_greedy(const Graph& g, std::span<const double> x,
                                        const PerturbationFunction& psi_fn) {
  if (static_cast<int>(x.size()) != g.offline_count()) {
    throw std::invalid_argument("assignment does not cover every offline vertex");
  }
  std::vector<double> key(g.offline_count());
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, DiscretePsi>) {
          throw std::invalid_argument("continuous assignment paired with a discrete psi");
        } else {
          for (int u = 0; u < g.offline_count(); ++u) key[u] = g.weight(u) * psi(f, x[u]);
        }
      },
      psi_fn);
  return match_in_arrival_order(
      g, [&](int a, int b) { return key[a] > key[b]; }, [&](int u) { return key[u]; });
}

// Matches each arrival to the unmatched neighbor maximizing b_u * psi(position).
// Throws if the assignment mode and psi variant disagree.
inline MatchResult run_perturbed_greedy(const Graph& g, const PositionAssignment& assignment,
                                        const PerturbationFunction& psi_fn) {
  check_assignment(g, assignment);
  if (const auto* c = std::get_if<ContinuousPositions>(&assignment)) {
    return run_perturbed_greedy(g, c->x, psi_fn);
  }
  const auto& d = std::get<DiscretePositions>(assignment);
  const auto* dp = std::get_if<DiscretePsi>(&psi_fn);
  if (dp == nullptr) throw std::invalid_argument("discrete assignment paired with a continuous psi");
  if (dp->k != d.k) throw std::invalid_argument("assignment k differs from psi k");
  return run_perturbed_greedy(g, DiscreteScoreTable(g, *dp), d.sigma);
}

struct ContinuousMode {};
struct DiscreteMode {
  int k = 1;
};
using SamplingMode = std::variant<ContinuousMode, DiscreteMode>;

// Uniform on the 2^-53 grid of [0, 1). On this grid 1 - x is exact, so the
// mirrored assignment {1 - x_u} loses nothing.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline PositionAssignment sample_assignment(int offline_count, const SamplingMode& mode,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (const auto* d = std::get_if<DiscreteMode>(&mode)) {
    if (d->k < 1) throw std::invalid_argument("k must be >= 1");
    DiscretePositions p{d->k, std::vector<int>(offline_count)};
    std::uniform_int_distribution<int> pick(1, d->k);
    for (auto& s : p.sigma) s = pick(rng);
    return p;
  }
  ContinuousPositions p{std::vector<double>(offline_count)};
  for (auto& x : p.x) x = uniform_unit(rng);
  return p;
}

inline PositionAssignment sample_assignment(const Graph& g, const SamplingMode& mode,
                                            std::uint64_t seed) {
  return sample_assignment(g.offline_count(), mode, seed);
}

inline std::vector<int> sample_permutation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(p[i], p[pick(rng)]);
  }
  return p;
}

// Offline ids ordered by ascending x (ties by id): the Ranking permutation that
// Perturbed-Greedy reproduces when all weights are equal.
inline std::vector<int> ascending_position_order(std::span<const double> x) {
  std::vector<int> p(x.size());
  std::iota(p.begin(), p.end(), 0);
  std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return x[a] < x[b]; });
  return p;
}

struct MsvvResult {
  AllocationResult allocation;
  // Budget fraction spent by every agent after each arrival.
  std::vector<std::vector<double>> spent_fraction;
};

// Allocates each item to the interested agent maximizing b_i * psi(T_i) where
// T_i is the spent fraction of B_i and psi(T) = 1 - e^{-(1-T)}. Agents with an
// exhausted budget (psi = 0) are skipped; ties go to the lowest agent id.
inline MsvvResult run_msvv(const BudgetedAllocationInstance& a, bool record_trajectory = false) {
  require_valid(a);
  const int n = a.agent_count();
  std::vector<std::vector<int>> bidders(a.item_count());
  for (int i = 0; i < n; ++i) {
    for (int item : a.interest[i]) bidders[item].push_back(i);
  }
  for (auto& b : bidders) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  std::vector<double> spent(n, 0.0);
  std::vector<int> agent_of_item(a.item_count(), kNone);
  MsvvResult out;
  for (int item : a.items) {
    int best = kNone;
    double best_score = 0.0;
    for (int i : bidders[item]) {
      const Agent& ag = a.agents[i];
      if (spent[i] >= ag.budget) continue;
      const double score = ag.bid * psi(DecreasingExp{}, spent[i] / ag.budget);
      if (best == kNone || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    if (best != kNone) {
      agent_of_item[item] = best;
      spent[best] = std::min(a.agents[best].budget, spent[best] + a.agents[best].bid);
    }
    if (record_trajectory) {
      std::vector<double> frac(n);
      for (int i = 0; i < n; ++i) frac[i] = spent[i] / a.agents[i].budget;
      out.spent_fraction.push_back(std::move(frac));
    }
  }
  out.allocation = evaluate_allocation(a, std::move(agent_of_item));
  return out;
}

}  // namespace omlab

#endif  // OMLAB_ONLINE_HPP_
