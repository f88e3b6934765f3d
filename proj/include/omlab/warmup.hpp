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

// Exhaustive checker for Ranking on unit weights over all n! permutations.

#ifndef OMLAB_WARMUP_HPP_
#define OMLAB_WARMUP_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "omlab/instance.hpp"
#include "omlab/oracle.hpp"
#include "omlab/parallel.hpp"
#include "omlab/rational.hpp"
#include "omlab/verifier.hpp"

namespace omlab {

// Permutations of 0..n-1 in lexicographic order, indexed by Lehmer code.
class PermutationSpace {
 public:
  explicit PermutationSpace(int n) : n_(n), fact_(n + 1, 1) {
    for (int i = 1; i <= n; ++i) fact_[i] = fact_[i - 1] * static_cast<std::uint64_t>(i);
  }
  std::uint64_t size() const { return fact_[n_]; }

  void unrank(std::uint64_t idx, std::vector<int>& perm) const {
    std::vector<int> pool(n_);
    std::iota(pool.begin(), pool.end(), 0);
    perm.resize(n_);
    for (int i = 0; i < n_; ++i) {
      const std::uint64_t f = fact_[n_ - 1 - i];
      const auto c = static_cast<std::size_t>(idx / f);
      idx %= f;
      perm[i] = pool[c];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(c));
    }
  }
  std::uint64_t rank(const std::vector<int>& perm) const {
    std::uint64_t idx = 0;
    for (int i = 0; i < n_; ++i) {
      std::uint64_t smaller = 0;
      for (int j = i + 1; j < n_; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
      idx += smaller * fact_[n_ - 1 - i];
    }
    return idx;
  }

 private:
  int n_;
  std::vector<std::uint64_t> fact_;
};

// perm lists offline ids from rank 1 to rank n. Moves u to rank i (1-based).
inline std::vector<int> move_to_rank(const std::vector<int>& perm, int u, int i) {
  std::vector<int> out;
  out.reserve(perm.size());
  for (int w : perm) {
    if (w != u) out.push_back(w);
  }
  out.insert(out.begin() + (i - 1), u);
  return out;
}

struct WarmupTables {
  int n = 0;
  bool perfect = false;
  std::vector<std::uint64_t> q_count, r_count;  // index t in 1..n
  std::vector<Rational> x;                      // |Q_t| / n!
};

struct WarmupReport {
  VerifierReport report;
  WarmupTables tables;
};

inline WarmupReport verify_ranking_warmup(const Graph& g, const VerifierOptions& opt = {}) {
  require_unit_capacities(g);
  const int n = g.offline_count();
  if (n < 1) throw std::invalid_argument("warm-up needs at least one offline vertex");
  if (g.online_count() >= 0xFF) throw std::invalid_argument("warm-up supports fewer than 255 online vertices");
  std::uint64_t states = 1;
  for (int i = 2; i <= n; ++i) {
    states *= static_cast<std::uint64_t>(i);
    if (states > opt.guard) throw std::length_error("n! exceeds the enumeration guard");
  }
  const PermutationSpace space(n);

  // Unit-weight optimum decides which vertices count as bad when unmatched.
  VertexWeightedInstance unit;
  for (int u = 0; u < n; ++u) unit.offline.push_back({u, 1.0, 1});
  for (int v = 0; v < g.online_count(); ++v) unit.online.push_back(v);
  for (int v = 0; v < g.online_count(); ++v) {
    for (int u : g.neighbors_of_online(v)) unit.edges.push_back({u, v});
  }
  unit.arrival.assign(g.arrival().begin(), g.arrival().end());
  const Graph ug(unit);
  const OptimalAnnotation ann = solve_optimal(ug).annotation;

  // match[p * n + u]: online partner of u, 0xFF if free.
  std::vector<std::uint8_t> match(states * n, 0xFF);
  const int workers = opt.threads > 0 ? opt.threads : thread_count();
  parallel_for(0, states, workers, [&](std::uint64_t lo, std::uint64_t hi, int) {
    std::vector<int> perm, rank(n);
    std::vector<char> taken(n);
    for (std::uint64_t p = lo; p < hi; ++p) {
      space.unrank(p, perm);
      for (int r = 0; r < n; ++r) rank[perm[r]] = r;
      std::fill(taken.begin(), taken.end(), 0);
      for (int v : g.arrival()) {
        int best = kNone;
        for (int u : g.neighbors_of_online(v)) {
          if (taken[u]) continue;
          const bool better = best == kNone || (opt.mutant ? rank[u] > rank[best] : rank[u] < rank[best]);
          if (better) best = u;
        }
        if (best != kNone) {
          taken[best] = 1;
          match[p * n + best] = static_cast<std::uint8_t>(v);
        }
      }
    }
  });
  auto offline_of = [&](std::uint64_t p, int v) {
    for (int u = 0; u < n; ++u) {
      if (match[p * n + u] == v) return u;
    }
    return kNone;
  };

  WarmupReport out;
  auto& tb = out.tables;
  tb.n = n;
  tb.perfect = std::all_of(ann.partner.begin(), ann.partner.end(), [](int p) { return p != kNone; });
  tb.q_count.assign(n + 1, 0);
  tb.r_count.assign(n + 1, 0);

  detail::Tally displacement, fixed_disjoint;
  detail::AtomicBitmap bits(states * n);
  std::vector<int> perm;
  for (int t = 1; t <= n; ++t) {
    bits.clear();
    for (std::uint64_t p = 0; p < states; ++p) {
      space.unrank(p, perm);
      const int u = perm[t - 1];
      if (match[p * n + u] != 0xFF) {
        ++tb.q_count[t];
        continue;
      }
      if (!ann.is_matched(u)) continue;
      ++tb.r_count[t];
      for (int i = 1; i <= n; ++i) {
        const auto moved = move_to_rank(perm, u, i);
        const std::uint64_t q = space.rank(moved);
        const int up = offline_of(q, ann.partner[u]);
        ++displacement.checked;
        int s = 0;
        if (up != kNone) s = static_cast<int>(std::find(moved.begin(), moved.end(), up) - moved.begin()) + 1;
        if (up == kNone || s > t) {
          ++displacement.violations;
          displacement.witness.offer(p, u, i, [&] {
            return nlohmann::json{{"permutation", perm}, {"t", t}, {"u", u}, {"i", i},
                                  {"moved", moved}, {"u_prime", up}, {"rank_of_u_prime", s}};
          });
          continue;
        }
        ++fixed_disjoint.checked;
        if (bits.test_and_set(q * n + (s - 1))) {
          ++fixed_disjoint.violations;
          fixed_disjoint.witness.offer(p, u, i, [&] {
            return nlohmann::json{{"permutation", perm}, {"t", t}, {"target", moved}, {"s", s}};
          });
        }
      }
    }
  }
  const Rational space_size = Rational(BigInt(states));
  tb.x.assign(n + 1, 0);
  for (int t = 1; t <= n; ++t) tb.x[t] = Rational(BigInt(tb.q_count[t])) / space_size;

  auto& rep = out.report;
  rep.mode = VerifierMode::kWarmup;
  rep.k = n;
  rep.n = n;
  rep.perfect = tb.perfect;
  rep.states = states;
  rep.checks.push_back(displacement.result("rank_displacement"));
  rep.checks.push_back(fixed_disjoint.result("ranking_charging_disjoint"));
  {
    CheckResult c = detail::relation_check("x1_equals_one", tb.x[1] == 1, tb.x[1], Rational(1), "==");
    if (!tb.perfect) detail::skip(c, "needs every offline vertex optimally matched");
    rep.checks.push_back(c);
  }
  {
    CheckResult c = detail::make_check("warmup_inequality", n, 0);
    Rational run = 0;
    for (int t = 1; t <= n; ++t) {
      run += tb.x[t];
      if (1 - tb.x[t] > run / n) {
        ++c.violations;
        if (c.counterexample.is_null()) {
          c.counterexample = {{"t", t}, {"lhs", to_string(1 - tb.x[t])}, {"rhs", to_string(run / n)}};
        }
      }
    }
    c.status = c.violations ? CheckStatus::kFail : CheckStatus::kPass;
    if (!tb.perfect) detail::skip(c, "needs every offline vertex optimally matched");
    rep.checks.push_back(c);
  }
  return out;
}

}  // namespace omlab

#endif  // OMLAB_WARMUP_HPP_
