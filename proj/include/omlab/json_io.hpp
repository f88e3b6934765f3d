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

// JSON file formats for instances, allocation inputs, edge-weighted stars,
// reduction maps and verifier reports. Objects are written with sorted keys
// and shortest round-trip doubles, so equal inputs give byte-identical files.

#ifndef OMLAB_JSON_IO_HPP_
#define OMLAB_JSON_IO_HPP_

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "omlab/allocation.hpp"
#include "omlab/generators.hpp"
#include "omlab/instance.hpp"
#include "omlab/reductions.hpp"
#include "omlab/verifier.hpp"

namespace omlab {

using Json = nlohmann::json;

inline constexpr const char* kInstanceSchema = "omlab.instance/1";
inline constexpr const char* kAllocationSchema = "omlab.allocation/1";
inline constexpr const char* kStarSchema = "omlab.star/1";
inline constexpr const char* kReductionMapSchema = "omlab.reduction-map/1";
inline constexpr const char* kVerifierSchema = "omlab.verifier/1";

// Malformed or unreadable input; the CLI maps it to exit status 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ---- vertex-weighted instances ----

inline Json to_json(const VertexWeightedInstance& inst) {
  Json off = Json::array();
  for (std::size_t p = 0; p < inst.offline.size(); ++p) {
    const auto& u = inst.offline[p];
    Json o = {{"id", u.id}, {"weight", u.weight}, {"capacity", u.capacity}};
    if (!inst.offline_names.empty()) o["name"] = inst.offline_names[p];
    off.push_back(std::move(o));
  }
  Json on = Json::array();
  for (std::size_t p = 0; p < inst.online.size(); ++p) {
    Json o = {{"id", inst.online[p]}};
    if (!inst.online_names.empty()) o["name"] = inst.online_names[p];
    on.push_back(std::move(o));
  }
  Json edges = Json::array();
  for (const auto& e : inst.edges) edges.push_back({e.offline, e.online});
  return {{"schema", kInstanceSchema}, {"offline", off}, {"online", on},
          {"edges", edges}, {"arrival", inst.arrival}};
}

inline VertexWeightedInstance instance_from_json(const Json& j) {
  try {
    if (j.value("schema", std::string()) != kInstanceSchema) {
      throw InputError("not an instance file (schema " + std::string(kInstanceSchema) + " expected)");
    }
    VertexWeightedInstance inst;
    bool any_off_name = false, any_on_name = false;
    for (const auto& o : j.at("offline")) {
      inst.offline.push_back({o.at("id").get<int>(), o.at("weight").get<double>(),
                              o.value("capacity", 1)});
      any_off_name = any_off_name || o.contains("name");
    }
    for (const auto& o : j.at("online")) {
      inst.online.push_back(o.at("id").get<int>());
      any_on_name = any_on_name || o.contains("name");
    }
    if (any_off_name) {
      for (const auto& o : j.at("offline")) inst.offline_names.push_back(o.value("name", std::string()));
    }
    if (any_on_name) {
      for (const auto& o : j.at("online")) inst.online_names.push_back(o.value("name", std::string()));
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InputError("edge must be [offline, online]");
      inst.edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    inst.arrival = j.at("arrival").get<std::vector<int>>();
    if (auto v = validate(inst); !v.empty()) throw InputError(InvalidInstance::summarize(v));
    return inst;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed instance: ") + e.what());
  }
}

// Hash of the canonical compact serialization.
inline std::string instance_hash(const VertexWeightedInstance& inst) {
  return hex64(fnv1a64(to_json(inst).dump()));
}

// ---- budgeted allocation ----

inline Json to_json(const BudgetedAllocationInstance& a) {
  Json agents = Json::array();
  for (const auto& ag : a.agents) {
    agents.push_back({{"id", ag.id}, {"budget", ag.budget}, {"bid", ag.bid},
                      {"interest", a.interest.at(ag.id)}});
  }
  return {{"schema", kAllocationSchema}, {"agents", agents}, {"items", a.items}};
}

inline BudgetedAllocationInstance allocation_from_json(const Json& j) {
  try {
    if (j.value("schema", std::string()) != kAllocationSchema) {
      throw InputError("not an allocation file (schema " + std::string(kAllocationSchema) + " expected)");
    }
    BudgetedAllocationInstance a;
    for (const auto& ag : j.at("agents")) {
      a.agents.push_back({ag.at("id").get<int>(), ag.at("budget").get<double>(), ag.at("bid").get<double>()});
    }
    a.interest.assign(a.agents.size(), {});
    for (const auto& ag : j.at("agents")) {
      const int id = ag.at("id").get<int>();
      if (id < 0 || id >= static_cast<int>(a.agents.size())) throw InputError("agent id out of range");
      a.interest[id] = ag.at("interest").get<std::vector<int>>();
    }
    a.items = j.at("items").get<std::vector<int>>();
    if (auto v = validate(a); !v.empty()) throw InputError("invalid allocation instance: " + v.front());
    return a;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed allocation file: ") + e.what());
  }
}

inline std::string allocation_hash(const BudgetedAllocationInstance& a) {
  return hex64(fnv1a64(to_json(a).dump()));
}

// ---- edge-weighted star ----

inline Json to_json(const EdgeWeightedStar& s) {
  return {{"schema", kStarSchema}, {"n", s.n}, {"D", s.base}, {"vectors", s.vectors},
          {"probabilities", s.probabilities}};
}

inline EdgeWeightedStar star_from_json(const Json& j) {
  try {
    EdgeWeightedStar s;
    s.n = j.at("n").get<int>();
    s.base = j.at("D").get<double>();
    s.vectors = j.at("vectors").get<std::vector<std::vector<double>>>();
    s.probabilities = j.at("probabilities").get<std::vector<double>>();
    if (s.n < 1 || s.vectors.size() != s.probabilities.size()) throw InputError("inconsistent star file");
    for (const auto& v : s.vectors) {
      if (static_cast<int>(v.size()) != s.n) throw InputError("star vector length differs from n");
    }
    return s;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed star file: ") + e.what());
  }
}

// ---- generator specs ----

inline Json to_json(const GeneratorSpec& s) {
  return {{"family", s.family}, {"seed", s.seed}, {"n", s.n}, {"m", s.m}, {"eps", s.eps},
          {"copies", s.copies}, {"swap", s.swap}, {"which", s.which}, {"heavy", s.heavy},
          {"alpha", s.alpha}, {"D", s.base}, {"edge_prob", s.edge_prob}, {"weights", s.weights},
          {"agents", s.alloc.agents}, {"items", s.alloc.items}, {"max_bid", s.alloc.max_bid},
          {"max_budget", s.alloc.max_budget}, {"interest_prob", s.alloc.interest_prob},
          {"bid", s.bid}, {"capacity", s.capacity}};
}

inline GeneratorSpec generator_spec_from_json(const Json& j) {
  try {
    GeneratorSpec s;
    s.family = j.value("family", s.family);
    s.seed = j.value("seed", s.seed);
    s.n = j.value("n", s.n);
    s.m = j.value("m", s.m);
    s.eps = j.value("eps", s.eps);
    s.copies = j.value("copies", s.copies);
    s.swap = j.value("swap", s.swap);
    s.which = j.value("which", s.which);
    s.heavy = j.value("heavy", s.heavy);
    s.alpha = j.value("alpha", s.alpha);
    s.base = j.value("D", s.base);
    s.edge_prob = j.value("edge_prob", s.edge_prob);
    s.weights = j.value("weights", s.weights);
    s.alloc.agents = j.value("agents", s.alloc.agents);
    s.alloc.items = j.value("items", s.alloc.items);
    s.alloc.max_bid = j.value("max_bid", s.alloc.max_bid);
    s.alloc.max_budget = j.value("max_budget", s.alloc.max_budget);
    s.alloc.interest_prob = j.value("interest_prob", s.alloc.interest_prob);
    s.bid = j.value("bid", s.bid);
    s.capacity = j.value("capacity", s.capacity);
    return s;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed generator spec: ") + e.what());
  }
}

inline Json to_json(const GeneratedInstance& g) {
  return std::visit([](const auto& x) { return to_json(x); }, g);
}

// Reads any of the three input kinds by schema tag.
inline GeneratedInstance any_from_json(const Json& j) {
  const std::string schema = j.is_object() ? j.value("schema", std::string()) : std::string();
  if (schema == kInstanceSchema) return instance_from_json(j);
  if (schema == kAllocationSchema) return allocation_from_json(j);
  if (schema == kStarSchema) return star_from_json(j);
  throw InputError("unknown input schema '" + schema + "'");
}

// ---- reduction map ----

inline Json reduction_map_json(const ReductionImage& img) {
  Json origin = Json::array();
  for (std::size_t u = 0; u < img.origin.size(); ++u) {
    origin.push_back({{"vertex", static_cast<int>(u)}, {"agent", img.origin[u].agent},
                      {"kind", to_string(img.origin[u].kind)}});
  }
  Json agents = Json::array();
  for (std::size_t i = 0; i < img.counts.size(); ++i) {
    const auto& c = img.counts[i];
    agents.push_back({{"agent", static_cast<int>(i)}, {"full_copies", c.full_copies},
                      {"residual", c.residual}, {"first_vertex", c.first_vertex}});
  }
  return {{"schema", kReductionMapSchema}, {"origin", origin}, {"agents", agents}};
}

// ---- verifier report ----

inline Json to_json(const CheckResult& c) {
  Json j = {{"name", c.name}, {"status", to_string(c.status)}, {"checked", c.checked},
            {"violations", c.violations}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  if (!c.counterexample.is_null()) j["counterexample"] = c.counterexample;
  return j;
}

inline Json to_json(const VerifierReport& r, const std::string& instance_hash_hex) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  Json j = {{"schema", kVerifierSchema}, {"instance_hash", instance_hash_hex}, {"k", r.k},
            {"n", r.n}, {"mode", to_string(r.mode)}, {"perfect", r.perfect},
            {"states", r.states}, {"passed", r.passed()}, {"checks", checks}};
  if (!r.note.empty()) j["note"] = r.note;
  if (r.tables) {
    Json x = Json::array(), xe = Json::array(), a = Json::array(), ae = Json::array();
    for (int t = 1; t <= r.tables->k; ++t) {
      x.push_back(to_double(r.tables->x[t]));
      xe.push_back(to_string(r.tables->x[t]));
      a.push_back(to_double(r.tables->alpha[t]));
      ae.push_back(to_string(r.tables->alpha[t]));
    }
    j["tables"] = {{"x_t", x}, {"x_t_exact", xe}, {"alpha_t", a}, {"alpha_t_exact", ae},
                   {"B", to_string(r.tables->B)}};
  }
  if (!r.x_estimate.empty()) j["tables"] = {{"x_t", r.x_estimate}, {"x_t_stderr", r.x_stderr}};
  return j;
}

}  // namespace omlab

#endif  // OMLAB_JSON_IO_HPP_
