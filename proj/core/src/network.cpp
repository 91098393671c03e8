/*
 * Copyright 2026 The tvopf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tvopf/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "tvopf/error.hpp"

namespace tvopf {

using nlohmann::json;

namespace {

std::string location_of(std::string_view text, size_t byte) {
  size_t line = 1;
  size_t col = 1;
  for (size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + "/" + key + ": missing field");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw ParseError(where + "/" + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  return number(obj, key, where);
}

int integer(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) throw ParseError(where + "/" + key + ": expected an integer");
  return v.get<int>();
}

const json& array(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_array()) throw ParseError(where + "/" + key + ": expected an array");
  return v;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::optional<int> NetworkModel::bus_index(int id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  return std::nullopt;
}

int NetworkModel::generator_at(int bus) const {
  for (size_t g = 0; g < generators.size(); ++g)
    if (generators[g].bus == bus) return static_cast<int>(g);
  return -1;
}

NetworkModel parse_case(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open case file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_case_text(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

NetworkModel parse_case_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(location_of(text, e.byte) + ": " + e.what());
  }

  NetworkModel model;
  model.base_mva = number(doc, "baseMVA", "");
  if (!(model.base_mva > 0)) throw ValidationError("/baseMVA: must be positive");
  const double base = model.base_mva;

  const json& buses = array(doc, "buses", "");
  std::map<int, int> index_of;
  for (size_t k = 0; k < buses.size(); ++k) {
    const std::string where = "/buses/" + std::to_string(k);
    Bus b;
    b.id = integer(buses[k], "id", where);
    b.vmin = number(buses[k], "vmin", where);
    b.vmax = number(buses[k], "vmax", where);
    if (buses[k].contains("regulated")) {
      const json& r = buses[k]["regulated"];
      if (!r.is_boolean()) throw ParseError(where + "/regulated: expected true or false");
      b.regulated = r.get<bool>();
    }
    b.pd = number_or(buses[k], "pd", where, 0.0) / base;
    b.qd = number_or(buses[k], "qd", where, 0.0) / base;
    if (!index_of.emplace(b.id, static_cast<int>(k)).second)
      throw ValidationError(where + "/id: duplicate bus id " + std::to_string(b.id));
    model.buses.push_back(b);
  }
  if (model.buses.empty()) throw ValidationError("/buses: at least one bus is required");

  auto resolve = [&](int id, const std::string& where) {
    auto it = index_of.find(id);
    if (it == index_of.end())
      throw ValidationError(where + ": references unknown bus " + std::to_string(id) + " (case has " +
                            std::to_string(model.buses.size()) + " buses)");
    return it->second;
  };

  const json& slack = field(doc, "slack", "");
  model.slack.rho0 = number(slack, "rho0", "/slack");
  model.slack.theta0 = number(slack, "theta0", "/slack");
  model.slack.bus = slack.contains("bus") ? resolve(integer(slack, "bus", "/slack"), "/slack/bus") : 0;

  const json& lines = array(doc, "lines", "");
  for (size_t k = 0; k < lines.size(); ++k) {
    const std::string where = "/lines/" + std::to_string(k);
    Line l;
    l.from = resolve(integer(lines[k], "from", where), where + "/from");
    l.to = resolve(integer(lines[k], "to", where), where + "/to");
    l.r = number(lines[k], "r", where);
    l.x = number(lines[k], "x", where);
    l.b_shunt = number_or(lines[k], "b_shunt", where, 0.0);
    model.lines.push_back(l);
  }

  const json& gens = array(doc, "generators", "");
  for (size_t k = 0; k < gens.size(); ++k) {
    const std::string where = "/generators/" + std::to_string(k);
    Generator g;
    g.bus = resolve(integer(gens[k], "bus", where), where + "/bus");
    g.c = number(gens[k], "c", where);
    g.d = number(gens[k], "d", where);
    g.s_rating = number(gens[k], "s_rating", where) / base;
    g.p_av_max = number(gens[k], "p_av_max", where) / base;
    model.generators.push_back(g);
  }

  auto violations = validate_network(model);
  if (!violations.empty()) {
    std::string msg = violations.front();
    for (size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i];
    throw ValidationError(msg);
  }
  return model;
}

std::string write_case_text(const NetworkModel& model) {
  const double base = model.base_mva;
  json doc;
  doc["baseMVA"] = base;
  doc["slack"] = {{"bus", model.buses.at(model.slack.bus).id},
                  {"rho0", model.slack.rho0},
                  {"theta0", model.slack.theta0}};
  json buses = json::array();
  for (const auto& b : model.buses)
    buses.push_back({{"id", b.id},
                     {"vmin", b.vmin},
                     {"vmax", b.vmax},
                     {"regulated", b.regulated},
                     {"pd", b.pd * base},
                     {"qd", b.qd * base}});
  doc["buses"] = std::move(buses);
  json lines = json::array();
  for (const auto& l : model.lines)
    lines.push_back({{"from", model.buses[l.from].id},
                     {"to", model.buses[l.to].id},
                     {"r", l.r},
                     {"x", l.x},
                     {"b_shunt", l.b_shunt}});
  doc["lines"] = std::move(lines);
  json gens = json::array();
  for (const auto& g : model.generators)
    gens.push_back({{"bus", model.buses[g.bus].id},
                    {"c", g.c},
                    {"d", g.d},
                    {"s_rating", g.s_rating * base},
                    {"p_av_max", g.p_av_max * base}});
  doc["generators"] = std::move(gens);
  return doc.dump(2) + "\n";
}

std::vector<std::string> validate_network(const NetworkModel& model) {
  std::vector<std::string> out;
  const int n = model.bus_count();
  auto valid = [n](int b) { return b >= 0 && b < n; };

  if (n == 0) out.emplace_back("network has no buses");
  if (!valid(model.slack.bus)) out.emplace_back("slack bus out of range");
  if (!(model.slack.rho0 > 0)) out.emplace_back("slack rho0 must be positive");

  for (size_t k = 0; k < model.buses.size(); ++k) {
    const Bus& b = model.buses[k];
    if (!(b.vmin > 0 && b.vmin < b.vmax))
      out.push_back("bus " + std::to_string(b.id) + ": voltage bounds need 0 < vmin < vmax");
    if (!std::isfinite(b.pd) || !std::isfinite(b.qd))
      out.push_back("bus " + std::to_string(b.id) + ": loads must be finite");
  }

  for (size_t k = 0; k < model.lines.size(); ++k) {
    const Line& l = model.lines[k];
    const std::string name = "line " + std::to_string(k);
    if (!valid(l.from) || !valid(l.to)) {
      out.push_back(name + ": references a bus out of range");
      continue;
    }
    if (l.from == l.to) out.push_back(name + ": connects a bus to itself");
    if (l.r == 0.0 && l.x == 0.0) out.push_back(name + ": zero series impedance");
  }

  std::set<int> gen_buses;
  for (size_t k = 0; k < model.generators.size(); ++k) {
    const Generator& g = model.generators[k];
    const std::string name = "generator " + std::to_string(k);
    if (!valid(g.bus)) {
      out.push_back(name + ": references a bus out of range");
      continue;
    }
    if (!gen_buses.insert(g.bus).second)
      out.push_back(name + ": more than one generator at bus " + std::to_string(model.buses[g.bus].id));
    if (!(g.s_rating > 0)) out.push_back(name + ": rating S_i must be positive");
    if (!(g.p_av_max >= 0)) out.push_back(name + ": p_av_max must be non-negative");
    if (!(g.c >= 0) || !(g.d >= 0)) out.push_back(name + ": cost weights must be non-negative");
  }

  if (n > 0) {
    // Union-find over valid lines.
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (const Line& l : model.lines)
      if (valid(l.from) && valid(l.to)) parent[find(l.from)] = find(l.to);
    int roots = 0;
    for (int i = 0; i < n; ++i) roots += (find(i) == i);
    if (roots != 1) out.emplace_back("graph not connected");
  }
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

NetworkModel make_synthetic_case(const SyntheticCaseOptions& o) {
  if (o.buses < 2) throw ValidationError("synthetic case needs at least 2 buses");
  if (o.generators < 1 || o.generators > o.buses)
    throw ValidationError("synthetic case needs 1 <= generators <= buses");
  if (o.buses > 2 && o.max_degree < 2) throw ValidationError("max_degree must be >= 2 for a ring");

  std::mt19937_64 rng(o.seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); };

  NetworkModel m;
  m.base_mva = 100.0;
  m.slack = Slack{0, 1.0, 0.0};
  for (int i = 0; i < o.buses; ++i) m.buses.push_back(Bus{i + 1, o.vmin, o.vmax, true, 0.0, 0.0});

  std::vector<int> degree(static_cast<size_t>(o.buses), 0);
  std::set<std::pair<int, int>> edges;
  auto add_line = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    if (a == b || !edges.insert({a, b}).second) return false;
    ++degree[a];
    ++degree[b];
    m.lines.push_back(Line{a, b, uniform(0.01, 0.03), uniform(0.05, 0.15), uniform(0.0, 0.04)});
    return true;
  };
  for (int i = 0; i + 1 < o.buses; ++i) add_line(i, i + 1);
  if (o.buses > 2) add_line(o.buses - 1, 0);

  const int chords = o.extra_lines >= 0 ? o.extra_lines : o.buses / 4;
  int attempts = 0;
  for (int added = 0; added < chords && attempts < 100 * (chords + 1); ++attempts) {
    const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(o.buses));
    const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(o.buses));
    if (degree[a] >= o.max_degree || degree[b] >= o.max_degree) continue;
    if (add_line(a, b)) ++added;
  }

  std::vector<int> gen_buses;
  int rest = o.generators;
  if (o.slack_is_generator) {
    gen_buses.push_back(0);
    --rest;
  }
  if (rest > o.buses - 1) throw ValidationError("too many generators for the non-slack buses");
  for (int k = 0; k < rest; ++k)
    gen_buses.push_back(1 + static_cast<int>((static_cast<long>(k) * (o.buses - 1)) / rest));
  for (int b : gen_buses)
    m.generators.push_back(
        Generator{b, uniform(0.5, 2.0), uniform(0.1, 0.5), o.s_rating, o.p_av_max});

  std::vector<int> candidates;
  for (int i = 1; i < o.buses; ++i)
    if (m.generator_at(i) < 0) candidates.push_back(i);
  for (int i = 1; i < o.buses; ++i)
    if (m.generator_at(i) >= 0) candidates.push_back(i);
  const int loaded = o.loaded_buses >= 0
                         ? std::min<int>(o.loaded_buses, static_cast<int>(candidates.size()))
                         : static_cast<int>(std::count_if(candidates.begin(), candidates.end(),
                                                          [&](int i) { return m.generator_at(i) < 0; }));
  for (int k = 0; k < loaded; ++k) {
    Bus& b = m.buses[candidates[k]];
    b.pd = uniform(o.load_min, o.load_max);
    b.qd = 0.3 * b.pd;
  }

  auto violations = validate_network(m);
  if (!violations.empty()) throw ValidationError("synthetic case invalid: " + violations.front());
  return m;
}

}  // namespace tvopf
