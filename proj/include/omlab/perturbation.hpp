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

// Perturbation functions that scale offline weights before the greedy choice.

#ifndef OMLAB_PERTURBATION_HPP_
#define OMLAB_PERTURBATION_HPP_

#include <cmath>
#include <stdexcept>
#include <variant>

#include "omlab/rational.hpp"

namespace omlab {

// psi(x) = 1 - e^{-(1-x)}: strictly decreasing on [0, 1], psi(0) = 1 - 1/e.
struct DecreasingExp {};
// psi(x) = 1 - e^{-x}; mirror image of DecreasingExp under x -> 1 - x.
struct IncreasingExp {};
// psi(i) = 1 - (1 - 1/k)^{k-i+1} for positions i in 1..k; psi(k) = 1/k.
struct DiscretePsi {
  int k = 1;
};

using PerturbationFunction = std::variant<DecreasingExp, IncreasingExp, DiscretePsi>;

inline double psi(DecreasingExp, double x) { return -std::expm1(-(1.0 - x)); }
inline double psi(IncreasingExp, double x) { return -std::expm1(-x); }

inline double psi(DiscretePsi p, int i) {
  if (p.k < 1 || i < 1 || i > p.k) throw std::out_of_range("discrete position out of range");
  if (p.k == 1) return 1.0;
  const double log_q = std::log1p(-1.0 / p.k);
  return -std::expm1(static_cast<double>(p.k - i + 1) * log_q);
}

inline Rational psi_exact(DiscretePsi p, int i) {
  if (p.k < 1 || i < 1 || i > p.k) throw std::out_of_range("discrete position out of range");
  const Rational q = Rational(p.k - 1) / p.k;
  return 1 - pow_int(q, p.k - i + 1);
}

// psi(k + 1) = 0 closes telescoping sums over positions.
inline Rational psi_exact_or_zero(DiscretePsi p, int i) {
  return i == p.k + 1 ? Rational(0) : psi_exact(p, i);
}

// (1/k) sum_{t=1..k} psi(t) in closed form; tends to 1/e.
inline long double discrete_psi_mean(int k) {
  if (k < 1) throw std::out_of_range("k must be >= 1");
  const long double q = 1.0L - 1.0L / k;
  // sum_{j=1..k} q^j = q (1 - q^k) / (1 - q) = (k - 1)(1 - q^k).
  return 1.0L - static_cast<long double>(k - 1) * (1.0L - std::pow(q, static_cast<long double>(k))) / k;
}

// CDF of the multiplier y = psi(x) for x ~ U[0, 1] under DecreasingExp:
// F(y) = -ln(1 - y) on [0, 1 - 1/e].
inline double multiplier_cdf(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0 - std::exp(-1.0)) return 1.0;
  return -std::log1p(-y);
}

}  // namespace omlab

#endif  // OMLAB_PERTURBATION_HPP_
