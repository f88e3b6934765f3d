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

// Exact optimal offline matching M*(G) and OPT(G).
//
// With weights on the offline side only, the sets of simultaneously matchable
// offline vertices form a transversal matroid, so adding vertices in order of
// decreasing weight whenever an augmenting path exists is optimal. Only weight
// comparisons are involved, so the result is exact for any double input.
//
// The canonical M*(G) is the optimal matching whose partner vector
// (partner(u_0), partner(u_1), ...) is lexicographically least, with
// "unmatched" ordered after every online id. It is reached from any optimal
// matching by alternating path/cycle exchanges that keep the gain.

#ifndef OMLAB_ORACLE_HPP_
#define OMLAB_ORACLE_HPP_

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "omlab/instance.hpp"
#include "omlab/rational.hpp"

namespace omlab {

struct OptimalAnnotation {
  Matching matching;
  std::vector<int> partner;  // offline id -> online id (u*), kNone if unmatched

  bool is_matched(int u) const { return partner[u] != kNone; }
};

enum class OracleMethod { kExactSolver, kBruteForce };

struct OracleResult {
  double optimum_value = 0.0;
  OptimalAnnotation annotation;
  OracleMethod method = OracleMethod::kExactSolver;
};

namespace detail {

struct MateArrays {
  std::vector<int> of_offline;
  std::vector<int> of_online;
};

// Kuhn-style augmenting path search from u over unvisited online vertices.
inline bool augment(const Graph& g, int u, MateArrays& mate, std::vector<int>& stamp, int mark) {
  for (int v : g.neighbors_of_offline(u)) {
    if (stamp[v] == mark) continue;
    stamp[v] = mark;
    if (mate.of_online[v] == kNone || augment(g, mate.of_online[v], mate, stamp, mark)) {
      mate.of_online[v] = u;
      mate.of_offline[u] = v;
      return true;
    }
  }
  return false;
}

inline MateArrays greedy_max_weight(const Graph& g) {
  const int n = g.offline_count();
  MateArrays mate{std::vector<int>(n, kNone), std::vector<int>(g.online_count(), kNone)};
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.weight(a) > g.weight(b); });
  std::vector<int> stamp(g.online_count(), -1);
  for (int idx = 0; idx < n; ++idx) augment(g, order[idx], mate, stamp, idx);
  return mate;
}

// Tries to make (u, v) a pair of the current optimal matching while leaving
// every fixed vertex untouched and the gain unchanged. On success the exchange
// is applied to `mate`.
class Exchanger {
 public:
  Exchanger(const Graph& g, MateArrays& mate, const std::vector<char>& fixed_offline,
            const std::vector<char>& fixed_online)
      : g_(g), mate_(mate), fixed_u_(fixed_offline), fixed_v_(fixed_online) {}

  bool try_pair(int u, int v) {
    const int v0 = mate_.of_offline[u];
    const int u0 = mate_.of_online[v];
    // Side A starts from u: drop (u, v0) and optionally pass v0 along an
    // alternating path. Side B starts from v: drop (u0, v) likewise.
    SideA a = explore_a(u, v0, u0);
    if (a.cycle_end != kNone) {
      apply_a_chain(u, a, a.cycle_end, /*stop_online=*/kNone);
      add_pair(u, v);
      rebuild();
      return true;
    }
    SideB b = explore_b(v, u0, v0);
    if (b.cycle_end != kNone) {
      apply_b_chain(v, b, b.cycle_end, /*stop_offline=*/kNone);
      add_pair(u, v);
      rebuild();
      return true;
    }
    // Gain change = (weight gained on side A) - (weight lost on side B); an
    // optimal matching admits no positive change, so feasible iff it is zero.
    const double gain_a = v0 == kNone ? g_.weight(u)
                          : a.best_free_u == kNone ? 0.0
                          : std::max(0.0, g_.weight(a.best_free_u));
    const double loss_b = u0 == kNone || b.free_v_found ? 0.0 : g_.weight(b.cheapest_stop);
    if (gain_a < loss_b) return false;
    if (v0 != kNone) {
      if (a.best_free_u != kNone && g_.weight(a.best_free_u) > 0.0) {
        apply_a_chain(u, a, a.best_free_u, kNone);
      } else {
        apply_a_chain(u, a, kNone, v0);
      }
    }
    if (u0 != kNone) {
      if (b.free_v_found) {
        apply_b_chain(v, b, b.free_v, kNone);
      } else {
        apply_b_chain(v, b, kNone, b.cheapest_stop);
      }
    }
    add_pair(u, v);
    rebuild();
    return true;
  }

 private:
  struct SideA {
    std::vector<int> parent_of_offline;  // online vertex we reached it from
    int cycle_end = kNone;               // == u0 when a cycle closes
    int best_free_u = kNone;
  };
  struct SideB {
    std::vector<int> parent_of_online;  // offline vertex we reached it from
    int cycle_end = kNone;              // == v0 when a cycle closes
    bool free_v_found = false;
    int free_v = kNone;
    int cheapest_stop = kNone;
  };

  SideA explore_a(int u, int v0, int u0) {
    SideA s;
    s.parent_of_offline.assign(g_.offline_count(), kNone);
    if (v0 == kNone) return s;
    std::vector<char> seen_v(g_.online_count(), 0);
    std::deque<int> queue{v0};
    seen_v[v0] = 1;
    while (!queue.empty()) {
      const int y = queue.front();
      queue.pop_front();
      for (int x : g_.neighbors_of_online(y)) {
        if (x == u || fixed_u_[x] || s.parent_of_offline[x] != kNone) continue;
        if (mate_.of_offline[x] == y) continue;
        s.parent_of_offline[x] = y;
        if (x == u0) {
          s.cycle_end = x;
          return s;
        }
        const int next = mate_.of_offline[x];
        if (next == kNone) {
          if (s.best_free_u == kNone || g_.weight(x) > g_.weight(s.best_free_u)) s.best_free_u = x;
          continue;
        }
        if (!seen_v[next]) {
          seen_v[next] = 1;
          queue.push_back(next);
        }
      }
    }
    return s;
  }

  SideB explore_b(int v, int u0, int v0) {
    SideB s;
    s.parent_of_online.assign(g_.online_count(), kNone);
    if (u0 == kNone) return s;
    std::vector<char> seen_u(g_.offline_count(), 0);
    std::deque<int> queue{u0};
    seen_u[u0] = 1;
    s.cheapest_stop = u0;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      if (g_.weight(x) < g_.weight(s.cheapest_stop)) s.cheapest_stop = x;
      for (int y : g_.neighbors_of_offline(x)) {
        if (y == v || fixed_v_[y] || s.parent_of_online[y] != kNone) continue;
        if (mate_.of_online[y] == x) continue;
        s.parent_of_online[y] = x;
        if (y == v0) {
          s.cycle_end = y;
          return s;
        }
        const int next = mate_.of_online[y];
        if (next == kNone) {
          if (!s.free_v_found) {
            s.free_v_found = true;
            s.free_v = y;
          }
          continue;
        }
        if (!seen_u[next]) {
          seen_u[next] = 1;
          queue.push_back(next);
        }
      }
    }
    return s;
  }

  // Walks side A back from its end towards u. Either `end_offline` (a free or
  // cycle-closing offline vertex) takes over its parent online vertex, or
  // `stop_online` is released.
  void apply_a_chain(int u, const SideA& s, int end_offline, int stop_online) {
    int x;
    if (end_offline != kNone) {
      x = end_offline;
    } else {
      x = mate_.of_online[stop_online];
      unmatch_online_.push_back(stop_online);
    }
    while (x != u) {
      const int y = s.parent_of_offline[x];
      new_pairs_.push_back({x, y});
      x = mate_.of_online[y];
    }
  }

  void apply_b_chain(int v, const SideB& s, int end_online, int stop_offline) {
    int y;
    if (end_online != kNone) {
      y = end_online;
    } else {
      y = mate_.of_offline[stop_offline];
      unmatch_offline_.push_back(stop_offline);
    }
    while (y != v) {
      const int x = s.parent_of_online[y];
      new_pairs_.push_back({x, y});
      y = mate_.of_offline[x];
    }
  }

  void add_pair(int u, int v) { new_pairs_.push_back({u, v}); }

  void rebuild() {
    for (int y : unmatch_online_) {
      if (const int x = mate_.of_online[y]; x != kNone && mate_.of_offline[x] == y) {
        mate_.of_offline[x] = kNone;
      }
      mate_.of_online[y] = kNone;
    }
    for (int x : unmatch_offline_) {
      if (const int y = mate_.of_offline[x]; y != kNone && mate_.of_online[y] == x) {
        mate_.of_online[y] = kNone;
      }
      mate_.of_offline[x] = kNone;
    }
    for (const auto& e : new_pairs_) {
      if (const int old_v = mate_.of_offline[e.offline];
          old_v != kNone && mate_.of_online[old_v] == e.offline) {
        mate_.of_online[old_v] = kNone;
      }
      if (const int old_u = mate_.of_online[e.online];
          old_u != kNone && mate_.of_offline[old_u] == e.online) {
        mate_.of_offline[old_u] = kNone;
      }
      mate_.of_offline[e.offline] = e.online;
      mate_.of_online[e.online] = e.offline;
    }
    new_pairs_.clear();
    unmatch_online_.clear();
    unmatch_offline_.clear();
  }

  const Graph& g_;
  MateArrays& mate_;
  const std::vector<char>& fixed_u_;
  const std::vector<char>& fixed_v_;
  std::vector<Edge> new_pairs_;
  std::vector<int> unmatch_online_;
  std::vector<int> unmatch_offline_;
};

inline OptimalAnnotation annotate(const Graph& g, const std::vector<int>& partner) {
  OptimalAnnotation a;
  a.partner = partner;
  std::vector<Edge> pairs;
  for (int u = 0; u < g.offline_count(); ++u) {
    if (partner[u] != kNone) pairs.push_back({u, partner[u]});
  }
  a.matching = make_matching(g, std::move(pairs));
  return a;
}

}  // namespace detail

// OPT(G) only, without canonicalizing the matching.
inline double optimal_value(const Graph& g) {
  require_unit_capacities(g);
  const auto mate = detail::greedy_max_weight(g);
  double total = 0.0;
  for (int u = 0; u < g.offline_count(); ++u) {
    if (mate.of_offline[u] != kNone) total += g.weight(u);
  }
  return total;
}

inline OracleResult solve_optimal(const Graph& g) {
  require_unit_capacities(g);
  auto mate = detail::greedy_max_weight(g);
  const int n = g.offline_count();
  std::vector<char> fixed_u(n, 0), fixed_v(g.online_count(), 0);
  detail::Exchanger exchanger(g, mate, fixed_u, fixed_v);
  for (int u = 0; u < n; ++u) {
    for (int v : g.neighbors_of_offline(u)) {
      if (fixed_v[v]) continue;
      if (mate.of_offline[u] == v || exchanger.try_pair(u, v)) break;
    }
    fixed_u[u] = 1;
    if (mate.of_offline[u] != kNone) fixed_v[mate.of_offline[u]] = 1;
  }
  OracleResult r;
  r.annotation = detail::annotate(g, mate.of_offline);
  r.optimum_value = r.annotation.matching.gain;
  r.method = OracleMethod::kExactSolver;
  return r;
}

inline constexpr int kBruteForceMaxVertices = 20;

// Exhaustive search over (offline prefix, used online set) states with exact
// rational values. Independent of the exchange machinery in solve_optimal.
inline OracleResult brute_force_optimal(const Graph& g) {
  require_unit_capacities(g);
  const int n = g.offline_count();
  const int m = g.online_count();
  if (n + m > kBruteForceMaxVertices) {
    throw std::length_error("brute-force oracle guard: at most 20 vertices");
  }
  const std::size_t masks = std::size_t{1} << m;
  // best[u][mask]: optimum over offline vertices u..n-1 with `mask` used.
  std::vector<std::vector<std::optional<Rational>>> best(n + 1,
                                                         std::vector<std::optional<Rational>>(masks));
  std::vector<Rational> w(n);
  for (int u = 0; u < n; ++u) w[u] = exact(g.weight(u));
  auto solve = [&](auto&& self, int u, std::size_t mask) -> const Rational& {
    auto& slot = best[u][mask];
    if (slot) return *slot;
    if (u == n) {
      slot = Rational(0);
      return *slot;
    }
    Rational value = self(self, u + 1, mask);
    for (int v : g.neighbors_of_offline(u)) {
      if (mask & (std::size_t{1} << v)) continue;
      Rational with = w[u] + self(self, u + 1, mask | (std::size_t{1} << v));
      if (with > value) value = with;
    }
    slot = value;
    return *slot;
  };
  std::vector<int> partner(n, kNone);
  std::size_t mask = 0;
  for (int u = 0; u < n; ++u) {
    const Rational target = solve(solve, u, mask);
    for (int v : g.neighbors_of_offline(u)) {
      if (mask & (std::size_t{1} << v)) continue;
      if (w[u] + solve(solve, u + 1, mask | (std::size_t{1} << v)) == target) {
        partner[u] = v;
        break;
      }
    }
    if (partner[u] != kNone) mask |= std::size_t{1} << partner[u];
  }
  OracleResult r;
  r.annotation = detail::annotate(g, partner);
  r.optimum_value = r.annotation.matching.gain;
  r.method = OracleMethod::kBruteForce;
  return r;
}

}  // namespace omlab

#endif  // OMLAB_ORACLE_HPP_
