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

#include "tvopf/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "tvopf/error.hpp"

namespace tvopf {

namespace {

using nlohmann::json;

constexpr const char* kColumns = "k,timestamp,cost,T,Tprime,L,flops,drift";

double parse_double(std::string_view s, std::string_view what) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("report: bad number '" + std::string(s) + "' in " + std::string(what));
  return v;
}

template <class Int>
Int parse_int(std::string_view s, std::string_view what) {
  Int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("report: bad integer '" + std::string(s) + "' in " + std::string(what));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t at = s.find(sep, start);
    out.push_back(s.substr(start, at == s.npos ? s.npos : at - start));
    if (at == s.npos) return out;
    start = at + 1;
  }
}

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) out += (i ? ";" : "") + std::to_string(ids[i]);
  return out;
}

std::vector<std::pair<std::string, std::string>> header_fields(const RunHeader& h) {
  return {{"command", h.command},
          {"mode", h.mode},
          {"dual", h.dual},
          {"slack_mode", h.slack_mode},
          {"L", h.lipschitz},
          {"mu", format_double(h.mu)},
          {"budget", std::to_string(h.budget)},
          {"seed", std::to_string(h.seed)},
          {"solver_hz", format_double(h.solver_hz)},
          {"data_hz", format_double(h.data_hz)},
          {"N", std::to_string(h.n)},
          {"NG", std::to_string(h.ng)},
          {"p", std::to_string(h.p)},
          {"vmin", format_double(h.vmin)},
          {"vmax", format_double(h.vmax)},
          {"case_hash", h.case_hash},
          {"scenario_hash", h.scenario_hash},
          {"report_buses", join_ids(h.reported_buses)}};
}

void set_header_field(RunHeader& h, std::string_view key, std::string_view v) {
  const std::string value(v);
  if (key == "command") h.command = value;
  else if (key == "mode") h.mode = value;
  else if (key == "dual") h.dual = value;
  else if (key == "slack_mode") h.slack_mode = value;
  else if (key == "L") h.lipschitz = value;
  else if (key == "mu") h.mu = parse_double(v, key);
  else if (key == "budget") h.budget = parse_int<std::int64_t>(v, key);
  else if (key == "seed") h.seed = parse_int<std::uint64_t>(v, key);
  else if (key == "solver_hz") h.solver_hz = parse_double(v, key);
  else if (key == "data_hz") h.data_hz = parse_double(v, key);
  else if (key == "N") h.n = parse_int<std::int64_t>(v, key);
  else if (key == "NG") h.ng = parse_int<std::int64_t>(v, key);
  else if (key == "p") h.p = parse_int<std::int64_t>(v, key);
  else if (key == "vmin") h.vmin = parse_double(v, key);
  else if (key == "vmax") h.vmax = parse_double(v, key);
  else if (key == "case_hash") h.case_hash = value;
  else if (key == "scenario_hash") h.scenario_hash = value;
  else if (key == "report_buses") {
    h.reported_buses.clear();
    if (!v.empty())
      for (auto id : split(v, ';')) h.reported_buses.push_back(parse_int<int>(id, key));
  } else {
    throw ParseError("report: unknown header key '" + std::string(key) + "'");
  }
}

// Non-finite doubles are not JSON numbers; they travel as strings.
json to_json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double from_json_number(const json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>(), "json");
  return j.get<double>();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::logic_error("format_double failed");
  return std::string(buf, ptr);
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw ValidationError("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

std::string report_to_csv(const TrackingReport& report) {
  std::string out = "# tvopf tracking report\n";
  for (const auto& [k, v] : header_fields(report.header)) out += "# " + k + "=" + v + "\n";
  for (const StepFailure& f : report.failures) {
    std::string msg = f.message;
    for (char& c : msg)
      if (c == '\n' || c == '\r') c = ' ';
    out += "# failure " + std::to_string(f.k) + "=" + msg + "\n";
  }
  out += kColumns;
  for (int id : report.header.reported_buses) out += ",V_" + std::to_string(id);
  out += '\n';
  for (const StepRecord& r : report.records) {
    out += std::to_string(r.k) + ',' + format_double(r.timestamp) + ',' + format_double(r.cost) + ',' +
           format_double(r.infeasibility) + ',' + format_double(r.infeasibility_lower) + ',' +
           format_double(r.lagrangian) + ',' + std::to_string(r.flops) + ',' + format_double(r.drift);
    for (double v : r.vmag) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

TrackingReport report_from_csv(std::string_view text) {
  TrackingReport rep;
  bool columns_seen = false;
  size_t width = 0;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      const size_t eq = line.find('=');
      if (eq == line.npos) continue;
      const std::string_view key = line.substr(0, eq);
      const std::string_view value = line.substr(eq + 1);
      if (key.starts_with("failure "))
        rep.failures.push_back({parse_int<std::int64_t>(key.substr(8), "failure"), std::string(value)});
      else
        set_header_field(rep.header, key, value);
      continue;
    }
    const auto cells = split(line, ',');
    if (!columns_seen) {
      if (!line.starts_with(kColumns)) throw ParseError("report: unexpected column header");
      width = cells.size();
      if (width != 8 + rep.header.reported_buses.size())
        throw ParseError("report: column count does not match report_buses");
      columns_seen = true;
      continue;
    }
    if (cells.size() != width) throw ParseError("report: row has wrong number of cells");
    StepRecord r;
    r.k = parse_int<std::int64_t>(cells[0], "k");
    r.timestamp = parse_double(cells[1], "timestamp");
    r.cost = parse_double(cells[2], "cost");
    r.infeasibility = parse_double(cells[3], "T");
    r.infeasibility_lower = parse_double(cells[4], "Tprime");
    r.lagrangian = parse_double(cells[5], "L");
    r.flops = parse_int<std::int64_t>(cells[6], "flops");
    r.drift = parse_double(cells[7], "drift");
    for (size_t c = 8; c < cells.size(); ++c) r.vmag.push_back(parse_double(cells[c], "V"));
    rep.records.push_back(std::move(r));
  }
  if (!columns_seen) throw ParseError("report: missing column header");
  return rep;
}

std::string report_to_json(const TrackingReport& report) {
  json header = json::object();
  const RunHeader& h = report.header;
  header["command"] = h.command;
  header["mode"] = h.mode;
  header["dual"] = h.dual;
  header["slack_mode"] = h.slack_mode;
  header["L"] = h.lipschitz;
  header["mu"] = to_json_number(h.mu);
  header["budget"] = h.budget;
  header["seed"] = h.seed;
  header["solver_hz"] = to_json_number(h.solver_hz);
  header["data_hz"] = to_json_number(h.data_hz);
  header["N"] = h.n;
  header["NG"] = h.ng;
  header["p"] = h.p;
  header["vmin"] = to_json_number(h.vmin);
  header["vmax"] = to_json_number(h.vmax);
  header["case_hash"] = h.case_hash;
  header["scenario_hash"] = h.scenario_hash;
  header["report_buses"] = h.reported_buses;

  json records = json::array();
  for (const StepRecord& r : report.records) {
    json v = json::array();
    for (double m : r.vmag) v.push_back(to_json_number(m));
    records.push_back({{"k", r.k},
                       {"timestamp", to_json_number(r.timestamp)},
                       {"cost", to_json_number(r.cost)},
                       {"T", to_json_number(r.infeasibility)},
                       {"Tprime", to_json_number(r.infeasibility_lower)},
                       {"L", to_json_number(r.lagrangian)},
                       {"flops", r.flops},
                       {"drift", to_json_number(r.drift)},
                       {"V", v}});
  }
  json failures = json::array();
  for (const StepFailure& f : report.failures) failures.push_back({{"k", f.k}, {"message", f.message}});
  return json{{"header", header}, {"records", records}, {"failures", failures}}.dump(2) + "\n";
}

TrackingReport report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  try {
    TrackingReport rep;
    const json& h = j.at("header");
    RunHeader& out = rep.header;
    out.command = h.at("command").get<std::string>();
    out.mode = h.at("mode").get<std::string>();
    out.dual = h.at("dual").get<std::string>();
    out.slack_mode = h.at("slack_mode").get<std::string>();
    out.lipschitz = h.at("L").get<std::string>();
    out.mu = from_json_number(h.at("mu"));
    out.budget = h.at("budget").get<std::int64_t>();
    out.seed = h.at("seed").get<std::uint64_t>();
    out.solver_hz = from_json_number(h.at("solver_hz"));
    out.data_hz = from_json_number(h.at("data_hz"));
    out.n = h.at("N").get<std::int64_t>();
    out.ng = h.at("NG").get<std::int64_t>();
    out.p = h.at("p").get<std::int64_t>();
    out.vmin = from_json_number(h.at("vmin"));
    out.vmax = from_json_number(h.at("vmax"));
    out.case_hash = h.at("case_hash").get<std::string>();
    out.scenario_hash = h.at("scenario_hash").get<std::string>();
    out.reported_buses = h.at("report_buses").get<std::vector<int>>();
    for (const json& r : j.at("records")) {
      StepRecord s;
      s.k = r.at("k").get<std::int64_t>();
      s.timestamp = from_json_number(r.at("timestamp"));
      s.cost = from_json_number(r.at("cost"));
      s.infeasibility = from_json_number(r.at("T"));
      s.infeasibility_lower = from_json_number(r.at("Tprime"));
      s.lagrangian = from_json_number(r.at("L"));
      s.flops = r.at("flops").get<std::int64_t>();
      s.drift = from_json_number(r.at("drift"));
      for (const json& v : r.at("V")) s.vmag.push_back(from_json_number(v));
      rep.records.push_back(std::move(s));
    }
    for (const json& f : j.at("failures"))
      rep.failures.push_back({f.at("k").get<std::int64_t>(), f.at("message").get<std::string>()});
    return rep;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

void emit_outputs(const TrackingReport& report, ReportFormat format, const std::filesystem::path& path) {
  const std::string text = format == ReportFormat::csv ? report_to_csv(report) : report_to_json(report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace tvopf
