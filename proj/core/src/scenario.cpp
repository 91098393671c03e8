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

#include "tvopf/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tvopf/error.hpp"
#include "tvopf/report.hpp"

namespace tvopf {

namespace {

enum class Column { time, pl, ql, pav };

struct ColumnSpec {
  Column kind;
  int index;  // bus or generator index
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
      cell.remove_suffix(1);
    cells.push_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

ColumnSpec parse_column(std::string_view name, const NetworkModel& model, int line, int col) {
  if (name == "t") return {Column::time, 0};
  auto fail = [&](const std::string& why) {
    return ParseError("scenario line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + why);
  };
  Column kind;
  std::string_view rest;
  if (name.starts_with("Pl_")) {
    kind = Column::pl;
    rest = name.substr(3);
  } else if (name.starts_with("Ql_")) {
    kind = Column::ql;
    rest = name.substr(3);
  } else if (name.starts_with("Pav_")) {
    kind = Column::pav;
    rest = name.substr(4);
  } else {
    throw fail("unknown column '" + std::string(name) + "'");
  }
  int id = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), id);
  if (ec != std::errc() || ptr != rest.data() + rest.size())
    throw fail("bad bus id in column '" + std::string(name) + "'");
  const auto bus = model.bus_index(id);
  if (!bus) throw ValidationError("scenario column '" + std::string(name) + "' names unknown bus " + std::to_string(id));
  if (kind != Column::pav) return {kind, *bus};
  const int g = model.generator_at(*bus);
  if (g < 0)
    throw ValidationError("scenario column '" + std::string(name) + "': bus " + std::to_string(id) +
                          " has no generator");
  return {kind, g};
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - unit_uniform(rng);
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

Scenario load_scenario_text(std::string_view text, const NetworkModel& model) {
  Scenario out;
  std::optional<double> declared_hz;
  std::vector<ColumnSpec> columns;
  std::map<std::pair<int, int>, bool> seen;
  bool has_header = false;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# data_hz=";
      if (line.starts_with(key)) {
        declared_hz = parse_number(line.substr(key.size()));
        if (!declared_hz || !(*declared_hz > 0.0))
          throw ParseError("scenario line " + std::to_string(line_no) + ": bad data_hz");
      }
      continue;
    }
    const auto cells = split(line);
    if (!has_header) {
      if (cells.empty() || cells.front() != "t")
        throw ParseError("scenario line " + std::to_string(line_no) + ": header must start with 't'");
      for (size_t c = 0; c < cells.size(); ++c) {
        const ColumnSpec spec = parse_column(cells[c], model, line_no, static_cast<int>(c + 1));
        if (c > 0 && spec.kind == Column::time)
          throw ParseError("scenario line " + std::to_string(line_no) + ": duplicate 't' column");
        if (c > 0 && seen[{static_cast<int>(spec.kind), spec.index}])
          throw ParseError("scenario line " + std::to_string(line_no) + ": duplicate column '" +
                           std::string(cells[c]) + "'");
        seen[{static_cast<int>(spec.kind), spec.index}] = true;
        columns.push_back(spec);
      }
      for (int g = 0; g < model.generator_count(); ++g)
        if (!seen[{static_cast<int>(Column::pav), g}])
          throw ValidationError("scenario is missing column Pav_" +
                                std::to_string(model.buses[model.generators[g].bus].id));
      has_header = true;
      continue;
    }
    if (cells.size() != columns.size())
      throw ParseError("scenario line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns.size()) + " values, found " + std::to_string(cells.size()));
    ScenarioStep step;
    for (const Bus& b : model.buses) {
      step.pl.push_back(b.pd);
      step.ql.push_back(b.qd);
    }
    step.pav.assign(static_cast<size_t>(model.generator_count()), 0.0);
    for (size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_number(cells[c]);
      if (!v || !std::isfinite(*v))
        throw ParseError("scenario line " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 1) + ": not a finite number: '" + std::string(cells[c]) + "'");
      switch (columns[c].kind) {
        case Column::time:
          step.time = *v;
          break;
        case Column::pl:
          step.pl[columns[c].index] = *v;
          break;
        case Column::ql:
          step.ql[columns[c].index] = *v;
          break;
        case Column::pav:
          if (*v < 0.0)
            throw ValidationError("scenario line " + std::to_string(line_no) + ": negative P_av");
          step.pav[columns[c].index] = *v;
          break;
      }
    }
    out.steps.push_back(std::move(step));
  }
  if (!has_header) throw ParseError("scenario has no header row");
  if (out.steps.empty()) throw ValidationError("scenario has no data rows");

  if (declared_hz) {
    out.data_hz = *declared_hz;
  } else if (out.steps.size() >= 2) {
    const double dt = out.steps[1].time - out.steps[0].time;
    if (!(dt > 0.0)) throw ValidationError("scenario timestamps must increase");
    out.data_hz = 1.0 / dt;
  }
  const double dt = 1.0 / out.data_hz;
  for (size_t k = 0; k < out.steps.size(); ++k) {
    const double expect = out.steps[0].time + static_cast<double>(k) * dt;
    if (std::abs(out.steps[k].time - expect) > 1e-6 * std::max(1.0, std::abs(expect)))
      throw ValidationError("scenario timestamps are not uniformly spaced at row " + std::to_string(k + 1));
  }
  return out;
}

Scenario load_scenario(const std::filesystem::path& path, const NetworkModel& model) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario s = load_scenario_text(buf.str(), model);
  s.source = path.string();
  return s;
}

std::string write_scenario_text(const Scenario& scenario, const NetworkModel& model) {
  std::string out = "# data_hz=" + format_double(scenario.data_hz) + "\nt";
  for (const Bus& b : model.buses) out += ",Pl_" + std::to_string(b.id);
  for (const Bus& b : model.buses) out += ",Ql_" + std::to_string(b.id);
  for (const Generator& g : model.generators) out += ",Pav_" + std::to_string(model.buses[g.bus].id);
  out += '\n';
  for (const ScenarioStep& s : scenario.steps) {
    out += format_double(s.time);
    for (double v : s.pl) out += ',' + format_double(v);
    for (double v : s.ql) out += ',' + format_double(v);
    for (double v : s.pav) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

Scenario synth_scenario(const NetworkModel& model, const SynthSpec& spec) {
  if (!(spec.duration > 0.0)) throw ValidationError("synth: duration must be positive");
  if (!(spec.data_hz > 0.0)) throw ValidationError("synth: data_hz must be positive");
  if (!(spec.amplitude >= 0.0 && spec.amplitude < 1.0))
    throw ValidationError("synth: amplitude must lie in [0, 1)");
  if (!(spec.period > 0.0)) throw ValidationError("synth: period must be positive");
  if (!(spec.noise >= 0.0)) throw ValidationError("synth: noise must be non-negative");
  const double pv_amp = spec.pv_amplitude < 0.0 ? spec.amplitude : spec.pv_amplitude;
  if (pv_amp > 1.0) throw ValidationError("synth: pv_amplitude must be at most 1");

  std::mt19937_64 rng(spec.seed);
  std::vector<double> phase;
  for (int b = 0; b < model.bus_count(); ++b) phase.push_back(2.0 * std::numbers::pi * unit_uniform(rng));

  Scenario out;
  out.data_hz = spec.data_hz;
  out.source = "synth";
  const auto steps = static_cast<std::int64_t>(std::llround(spec.duration * spec.data_hz));
  const double omega = 2.0 * std::numbers::pi / (spec.period * spec.data_hz);
  for (std::int64_t k = 0; k < std::max<std::int64_t>(steps, 1); ++k) {
    ScenarioStep s;
    s.time = static_cast<double>(k) / spec.data_hz;
    for (int b = 0; b < model.bus_count(); ++b) {
      const double factor = 1.0 + spec.amplitude * std::sin(omega * static_cast<double>(k) + phase[b]);
      double pl = model.buses[b].pd * factor;
      double ql = model.buses[b].qd * factor;
      if (spec.noise > 0.0) {
        pl += spec.noise * standard_normal(rng);
        ql += spec.noise * standard_normal(rng);
      }
      s.pl.push_back(pl);
      s.ql.push_back(ql);
    }
    const double bump = std::max(0.0, std::sin(omega * static_cast<double>(k)));
    for (const Generator& g : model.generators) s.pav.push_back(g.p_av_max * (1.0 - pv_amp + pv_amp * bump));
    out.steps.push_back(std::move(s));
  }
  return out;
}

std::int64_t step_count(const Scenario& scenario, double solver_hz) {
  if (!(solver_hz > 0.0)) throw ValidationError("solver_hz must be positive");
  return static_cast<std::int64_t>(std::floor(scenario.duration() * solver_hz + 1e-9));
}

std::int64_t sample_index(const Scenario& scenario, std::int64_t k, double solver_hz) {
  if (k < 0 || k >= step_count(scenario, solver_hz))
    throw std::out_of_range("solver step " + std::to_string(k) + " outside the scenario");
  const auto idx = static_cast<std::int64_t>(
      std::floor(static_cast<double>(k) * scenario.data_hz / solver_hz + 1e-9));
  return std::min<std::int64_t>(idx, static_cast<std::int64_t>(scenario.steps.size()) - 1);
}

ProblemInstance instance_at(const Scenario& scenario, std::shared_ptr<const Formulation> f,
                            std::int64_t k, double solver_hz) {
  const ScenarioStep& s = scenario.steps[static_cast<size_t>(sample_index(scenario, k, solver_hz))];
  return make_instance(std::move(f), s.pl, s.ql, s.pav, static_cast<double>(k) / solver_hz);
}

}  // namespace tvopf
