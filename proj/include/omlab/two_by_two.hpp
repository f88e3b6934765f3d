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

// Optimal mixing of the two Ranking permutations on 2x2 graphs with weights
// (alpha, 1): closed form plus a brute-force search over distributions.

#ifndef OMLAB_TWO_BY_TWO_HPP_
#define OMLAB_TWO_BY_TWO_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "omlab/generators.hpp"
#include "omlab/instance.hpp"
#include "omlab/online.hpp"
#include "omlab/oracle.hpp"
#include "omlab/rational.hpp"

namespace omlab {

struct TwoByTwoResult {
  double alpha = 1.0;
  // Probability of ranking u1 (weight alpha) first, and of u2 first.
  double p_heavy_first = 0.5;
  double p_light_first = 0.5;
  Rational closed_form;            // (alpha^2 + alpha + 1) / (alpha + 1)^2
  double closed_form_value = 0.0;
  double canonical_factor = 0.0;   // grid search over the two canonical graphs
  double all_graphs_factor = 0.0;  // grid search over every 2x2 graph
  double grid_step = 1e-4;
};

// Expected ratio is linear in p: ratio(p) = p * a + (1 - p) * b.
struct TwoPointRatio {
  double heavy_first = 1.0;
  double light_first = 1.0;
  double at(double p) const { return p * heavy_first + (1.0 - p) * light_first; }
};

inline TwoPointRatio ranking_ratios(const VertexWeightedInstance& inst) {
  const Graph g(inst);
  const double opt = optimal_value(g);
  if (opt == 0.0) return {};
  const std::array<int, 2> heavy{0, 1};
  const std::array<int, 2> light{1, 0};
  return {run_ranking(g, heavy).gain / opt, run_ranking(g, light).gain / opt};
}

inline Rational two_by_two_closed_form(double alpha) {
  const Rational a = exact(alpha);
  return (a * a + a + 1) / ((a + 1) * (a + 1));
}

inline TwoByTwoResult analyze_2x2(double alpha, double grid_step = 1e-4) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be >= 1");
  if (!(grid_step > 0.0 && grid_step <= 0.5)) throw std::invalid_argument("bad grid step");
  TwoByTwoResult r;
  r.alpha = alpha;
  r.grid_step = grid_step;
  r.closed_form = two_by_two_closed_form(alpha);
  r.closed_form_value = to_double(r.closed_form);

  const auto [h1, h2] = gen_canonical_2x2(alpha);
  const std::vector<TwoPointRatio> canonical{ranking_ratios(h1), ranking_ratios(h2)};
  std::vector<TwoPointRatio> all;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<Edge> edges;
    for (int b = 0; b < 4; ++b) {
      if (mask & (1 << b)) edges.push_back({b / 2, b % 2});
    }
    for (const auto& arrival : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
      all.push_back(ranking_ratios(make_instance({alpha, 1.0}, 2, edges, arrival)));
    }
  }

  const long steps = std::lround(1.0 / grid_step);
  double best_canon = -1.0, best_all = -1.0, best_p = 0.0;
  for (long j = 0; j <= steps; ++j) {
    const double p = static_cast<double>(j) / static_cast<double>(steps);
    double worst_canon = 1.0, worst_all = 1.0;
    for (const auto& c : canonical) worst_canon = std::min(worst_canon, c.at(p));
    for (const auto& c : all) worst_all = std::min(worst_all, c.at(p));
    if (worst_canon > best_canon) {
      best_canon = worst_canon;
      best_p = p;
    }
    best_all = std::max(best_all, worst_all);
  }
  r.canonical_factor = best_canon;
  r.all_graphs_factor = best_all;
  r.p_heavy_first = best_p;
  r.p_light_first = 1.0 - best_p;
  return r;
}

}  // namespace omlab

#endif  // OMLAB_TWO_BY_TWO_HPP_
