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

// Data model for online vertex-weighted bipartite matching instances.
//
// Offline vertices (the U side) carry a weight and a capacity and are known up
// front. Online vertices (the V side) arrive in a fixed order. Ids are dense
// integers 0..n-1 per side; human-readable names live in optional side tables.

#ifndef OMLAB_INSTANCE_HPP_
#define OMLAB_INSTANCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace omlab {

inline constexpr int kNone = -1;

struct OfflineVertex {
  int id = 0;
  double weight = 0.0;
  int capacity = 1;
};

struct Edge {
  int offline = 0;
  int online = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct VertexWeightedInstance {
  std::vector<OfflineVertex> offline;
  std::vector<int> online;
  std::vector<Edge> edges;
  std::vector<int> arrival;
  std::vector<std::string> offline_names;
  std::vector<std::string> online_names;

  int offline_count() const { return static_cast<int>(offline.size()); }
  int online_count() const { return static_cast<int>(online.size()); }
};

enum class ViolationKind {
  kNegativeWeight,
  kNonFiniteWeight,
  kBadCapacity,
  kDuplicateId,
  kIdOutOfRange,
  kDanglingEdge,
  kDuplicateEdge,
  kArrivalNotPermutation,
  kNameTableSize,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNegativeWeight: return "negative-weight";
    case ViolationKind::kNonFiniteWeight: return "non-finite-weight";
    case ViolationKind::kBadCapacity: return "bad-capacity";
    case ViolationKind::kDuplicateId: return "duplicate-id";
    case ViolationKind::kIdOutOfRange: return "id-out-of-range";
    case ViolationKind::kDanglingEdge: return "dangling-edge";
    case ViolationKind::kDuplicateEdge: return "duplicate-edge";
    case ViolationKind::kArrivalNotPermutation: return "arrival-not-permutation";
    case ViolationKind::kNameTableSize: return "name-table-size";
  }
  return "unknown";
}

namespace detail {

// Marks ids into `seen`, reporting duplicates and out-of-range values.
inline void check_dense_ids(std::span<const int> ids, const char* side,
                            std::vector<Violation>& out) {
  const std::size_t n = ids.size();
  std::vector<char> seen(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const int id = ids[pos];
    if (id < 0 || static_cast<std::size_t>(id) >= n) {
      out.push_back({ViolationKind::kIdOutOfRange,
                     std::string(side) + " id " + std::to_string(id) +
                         " outside 0.." + std::to_string(n ? n - 1 : 0)});
      continue;
    }
    if (seen[id]) {
      out.push_back({ViolationKind::kDuplicateId,
                     std::string(side) + " id " + std::to_string(id) +
                         " appears more than once"});
    }
    seen[id] = 1;
  }
}

}  // namespace detail

// Returns every invariant violation; an empty result means the instance is
// well-formed. Never throws.
inline std::vector<Violation> validate(const VertexWeightedInstance& inst) {
  std::vector<Violation> out;
  std::vector<int> offline_ids;
  offline_ids.reserve(inst.offline.size());
  for (const auto& u : inst.offline) {
    offline_ids.push_back(u.id);
    if (!std::isfinite(u.weight)) {
      out.push_back({ViolationKind::kNonFiniteWeight,
                     "offline " + std::to_string(u.id) + " has non-finite weight"});
    } else if (u.weight < 0.0) {
      out.push_back({ViolationKind::kNegativeWeight,
                     "offline " + std::to_string(u.id) + " has weight " +
                         std::to_string(u.weight)});
    }
    if (u.capacity < 1) {
      out.push_back({ViolationKind::kBadCapacity,
                     "offline " + std::to_string(u.id) + " has capacity " +
                         std::to_string(u.capacity)});
    }
  }
  detail::check_dense_ids(offline_ids, "offline", out);
  detail::check_dense_ids(inst.online, "online", out);

  const int n = inst.offline_count();
  const int m = inst.online_count();
  std::vector<Edge> sorted;
  sorted.reserve(inst.edges.size());
  for (const auto& e : inst.edges) {
    if (e.offline < 0 || e.offline >= n || e.online < 0 || e.online >= m) {
      out.push_back({ViolationKind::kDanglingEdge,
                     "edge (" + std::to_string(e.offline) + ", " +
                         std::to_string(e.online) + ") references a missing vertex"});
      continue;
    }
    sorted.push_back(e);
  }
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) {
      out.push_back({ViolationKind::kDuplicateEdge,
                     "edge (" + std::to_string(sorted[i].offline) + ", " +
                         std::to_string(sorted[i].online) + ") listed twice"});
    }
  }

  bool arrival_ok = inst.arrival.size() == inst.online.size();
  if (arrival_ok) {
    std::vector<char> seen(inst.arrival.size(), 0);
    for (int v : inst.arrival) {
      if (v < 0 || v >= m || seen[v]) {
        arrival_ok = false;
        break;
      }
      seen[v] = 1;
    }
  }
  if (!arrival_ok) {
    out.push_back({ViolationKind::kArrivalNotPermutation,
                   "arrival order is not a permutation of the online ids"});
  }
  if (!inst.offline_names.empty() && inst.offline_names.size() != inst.offline.size()) {
    out.push_back({ViolationKind::kNameTableSize, "offline name table size mismatch"});
  }
  if (!inst.online_names.empty() && inst.online_names.size() != inst.online.size()) {
    out.push_back({ViolationKind::kNameTableSize, "online name table size mismatch"});
  }
  return out;
}

class InvalidInstance : public std::invalid_argument {
 public:
  explicit InvalidInstance(std::vector<Violation> violations)
      : std::invalid_argument(summarize(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

  static std::string summarize(const std::vector<Violation>& v) {
    std::string s = "invalid instance:";
    for (const auto& x : v) s += std::string(" [") + to_string(x.kind) + "] " + x.message + ";";
    return s;
  }

 private:
  std::vector<Violation> violations_;
};

// Immutable, index-friendly view of a validated instance. Adjacency lists are
// sorted by ascending id, which is what the id tie-break relies on.
class Graph {
 public:
  Graph() = default;

  explicit Graph(const VertexWeightedInstance& inst) {
    if (auto v = validate(inst); !v.empty()) throw InvalidInstance(std::move(v));
    const int n = inst.offline_count();
    const int m = inst.online_count();
    weights_.assign(n, 0.0);
    capacities_.assign(n, 1);
    for (const auto& u : inst.offline) {
      weights_[u.id] = u.weight;
      capacities_[u.id] = u.capacity;
    }
    of_online_.assign(m, {});
    of_offline_.assign(n, {});
    for (const auto& e : inst.edges) {
      of_online_[e.online].push_back(e.offline);
      of_offline_[e.offline].push_back(e.online);
    }
    for (auto& l : of_online_) std::sort(l.begin(), l.end());
    for (auto& l : of_offline_) std::sort(l.begin(), l.end());
    arrival_ = inst.arrival;
    edge_count_ = static_cast<int>(inst.edges.size());
  }

  int offline_count() const { return static_cast<int>(weights_.size()); }
  int online_count() const { return static_cast<int>(of_online_.size()); }
  int edge_count() const { return edge_count_; }

  double weight(int u) const { return weights_[u]; }
  int capacity(int u) const { return capacities_[u]; }
  std::span<const double> weights() const { return weights_; }

  std::span<const int> neighbors_of_online(int v) const { return of_online_[v]; }
  std::span<const int> neighbors_of_offline(int u) const { return of_offline_[u]; }
  std::span<const int> arrival() const { return arrival_; }

  bool has_edge(int u, int v) const {
    const auto& l = of_online_[v];
    return std::binary_search(l.begin(), l.end(), u);
  }

  bool unit_capacities() const {
    return std::all_of(capacities_.begin(), capacities_.end(), [](int c) { return c == 1; });
  }

 private:
  std::vector<double> weights_;
  std::vector<int> capacities_;
  std::vector<std::vector<int>> of_online_;
  std::vector<std::vector<int>> of_offline_;
  std::vector<int> arrival_;
  int edge_count_ = 0;
};

inline void require_unit_capacities(const Graph& g) {
  if (!g.unit_capacities()) {
    throw std::invalid_argument("instance has capacities > 1; call expand_capacities first");
  }
}

// A set of (offline, online) pairs plus the gain it was built with.
struct Matching {
  std::vector<Edge> pairs;
  double gain = 0.0;

  std::vector<Edge> sorted_pairs() const {
    auto p = pairs;
    std::sort(p.begin(), p.end());
    return p;
  }
};

inline double matching_gain(const Graph& g, std::span<const Edge> pairs) {
  std::vector<int> uses(g.offline_count(), 0);
  double gain = 0.0;
  for (const auto& e : pairs) {
    if (e.offline < 0 || e.offline >= g.offline_count()) continue;
    if (uses[e.offline]++ < g.capacity(e.offline)) gain += g.weight(e.offline);
  }
  return gain;
}

inline Matching make_matching(const Graph& g, std::vector<Edge> pairs) {
  Matching m{std::move(pairs), 0.0};
  m.gain = matching_gain(g, m.pairs);
  return m;
}

// Empty iff every pair is an edge, capacities and the one-match-per-online
// rule hold, and the stored gain equals the recomputed one.
inline std::vector<std::string> check_matching(const Graph& g, const Matching& m) {
  std::vector<std::string> problems;
  std::vector<int> uses(g.offline_count(), 0);
  std::vector<char> online_used(g.online_count(), 0);
  for (const auto& e : m.pairs) {
    if (e.offline < 0 || e.offline >= g.offline_count() || e.online < 0 ||
        e.online >= g.online_count() || !g.has_edge(e.offline, e.online)) {
      problems.push_back("pair (" + std::to_string(e.offline) + ", " +
                         std::to_string(e.online) + ") is not an edge");
      continue;
    }
    if (online_used[e.online]++) {
      problems.push_back("online " + std::to_string(e.online) + " matched twice");
    }
    if (++uses[e.offline] > g.capacity(e.offline)) {
      problems.push_back("offline " + std::to_string(e.offline) + " over capacity");
    }
  }
  const double recomputed = matching_gain(g, m.pairs);
  if (recomputed != m.gain) {
    problems.push_back("stored gain " + std::to_string(m.gain) + " != recomputed " +
                       std::to_string(recomputed));
  }
  return problems;
}

// Unit-capacity image of an instance. Copy (u, j) for j = 0..c_u-1 gets the
// id offset(u) + j, so lower copy index means lower id.
struct ExpandedInstance {
  VertexWeightedInstance instance;
  std::vector<int> copy_to_original;
  std::vector<int> copy_index;

  Matching lift(const Graph& original, const Matching& m) const {
    std::vector<Edge> pairs;
    pairs.reserve(m.pairs.size());
    for (const auto& e : m.pairs) pairs.push_back({copy_to_original.at(e.offline), e.online});
    return make_matching(original, std::move(pairs));
  }
};

inline ExpandedInstance expand_capacities(const VertexWeightedInstance& inst) {
  const Graph g(inst);
  ExpandedInstance out;
  std::vector<std::string> name_by_id;
  if (!inst.offline_names.empty()) {
    name_by_id.resize(inst.offline.size());
    for (std::size_t p = 0; p < inst.offline.size(); ++p) {
      name_by_id[inst.offline[p].id] = inst.offline_names[p];
    }
  }
  std::vector<int> first_copy(g.offline_count(), 0);
  int next = 0;
  for (int u = 0; u < g.offline_count(); ++u) {
    first_copy[u] = next;
    for (int j = 0; j < g.capacity(u); ++j) {
      out.instance.offline.push_back({next, g.weight(u), 1});
      out.copy_to_original.push_back(u);
      out.copy_index.push_back(j);
      if (!name_by_id.empty()) {
        out.instance.offline_names.push_back(name_by_id[u] + "#" + std::to_string(j));
      }
      ++next;
    }
  }
  out.instance.online = inst.online;
  out.instance.arrival = inst.arrival;
  out.instance.online_names = inst.online_names;
  for (const auto& e : inst.edges) {
    for (int j = 0; j < g.capacity(e.offline); ++j) {
      out.instance.edges.push_back({first_copy[e.offline] + j, e.online});
    }
  }
  std::sort(out.instance.edges.begin(), out.instance.edges.end());
  return out;
}

// Convenience builder used by generators and tests: ids are assigned in order
// and the arrival order defaults to 0..m-1.
inline VertexWeightedInstance make_instance(std::vector<double> weights, int online_count,
                                            std::vector<Edge> edges,
                                            std::vector<int> arrival = {}) {
  VertexWeightedInstance inst;
  for (int u = 0; u < static_cast<int>(weights.size()); ++u) {
    inst.offline.push_back({u, weights[u], 1});
  }
  for (int v = 0; v < online_count; ++v) inst.online.push_back(v);
  inst.edges = std::move(edges);
  std::sort(inst.edges.begin(), inst.edges.end());
  if (arrival.empty()) {
    inst.arrival = inst.online;
  } else {
    inst.arrival = std::move(arrival);
  }
  return inst;
}

}  // namespace omlab

#endif  // OMLAB_INSTANCE_HPP_
