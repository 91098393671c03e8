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

#include "tvopf_cli/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tvopf/error.hpp"
#include "tvopf/flops.hpp"
#include "tvopf/network.hpp"
#include "tvopf/report.hpp"
#include "tvopf/scenario.hpp"
#include "tvopf/solver.hpp"
#include "tvopf/tracking.hpp"

namespace tvopf::cli {

namespace {

struct SolverFlags {
  std::string case_path;
  double mu = 1.0;
  std::string mode = "exact";
  std::string dual = "ascent";
  std::string slack_mode = "embedded";
  std::int64_t budget = 100;
  std::uint64_t seed = 0;
  std::string lipschitz = "auto";
  std::string out;
  std::string format = "csv";
  std::vector<int> report_buses;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string hex_hash(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

void add_solver_flags(CLI::App& app, SolverFlags& f) {
  app.add_option("--case", f.case_path, "Case file (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--mu", f.mu, "Penalty parameter")->capture_default_str();
  app.add_option("--mode", f.mode, "Coordinate update")
      ->check(CLI::IsMember({"exact", "prox"}))
      ->capture_default_str();
  app.add_option("--dual", f.dual, "Multiplier step")
      ->check(CLI::IsMember({"ascent", "literal"}))
      ->capture_default_str();
  app.add_option("--slack-mode", f.slack_mode, "Slack treatment")
      ->check(CLI::IsMember({"embedded", "folded"}))
      ->capture_default_str();
  app.add_option("--budget", f.budget, "Coordinate updates (per step when tracking)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  app.add_option("--L", f.lipschitz, "Coordinate Lipschitz constant or 'auto'")->capture_default_str();
  app.add_option("--out", f.out, "Report path (stdout if omitted)");
  app.add_option("--format", f.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--report-buses", f.report_buses, "Bus ids to report |V| for")->delimiter(',');
}

SolverConfig to_config(const SolverFlags& f) {
  SolverConfig c;
  c.mu = f.mu;
  c.mode = f.mode == "prox" ? UpdateMode::prox : UpdateMode::exact;
  c.dual = f.dual == "literal" ? DualStep::literal : DualStep::ascent;
  c.budget = f.budget;
  c.seed = f.seed;
  if (f.lipschitz != "auto") {
    double v = 0.0;
    try {
      size_t used = 0;
      v = std::stod(f.lipschitz, &used);
      if (used != f.lipschitz.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("--L expects a positive number or 'auto', got '" + f.lipschitz + "'");
    }
    c.lipschitz = v;
  }
  c.validate();
  return c;
}

void write_report(const TrackingReport& rep, const SolverFlags& f, std::ostream& out) {
  const ReportFormat fmt = parse_report_format(f.format);
  if (f.out.empty())
    out << (fmt == ReportFormat::csv ? report_to_csv(rep) : report_to_json(rep));
  else
    emit_outputs(rep, fmt, f.out);
}

SlackMode slack_mode(const SolverFlags& f) {
  return f.slack_mode == "folded" ? SlackMode::folded : SlackMode::embedded;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const NetworkModel m = parse_case(path);
  const auto f = make_formulation(m, SlackMode::embedded);
  out << "ok: " << m.bus_count() << " buses, " << m.lines.size() << " lines, " << m.generator_count()
      << " generators, p=" << f->matrices.p << ", d=" << f->layout.size() << "\n";
  return ExitCode::ok;
}

int cmd_solve(const SolverFlags& flags, std::ostream& out) {
  const std::string text = read_file(flags.case_path);
  const SolverConfig config = to_config(flags);
  const auto f = make_formulation(parse_case_text(text), slack_mode(flags));
  const ProblemInstance inst = static_instance(f);

  // A one-step constant scenario reuses the tracking report machinery.
  Scenario s;
  s.data_hz = 1.0;
  ScenarioStep step;
  for (const Bus& b : f->model.buses) {
    step.pl.push_back(b.pd);
    step.ql.push_back(b.qd);
  }
  for (const Generator& g : f->model.generators) step.pav.push_back(g.p_av_max);
  s.steps.push_back(step);
  TrackOptions opts;
  opts.reported_buses = flags.report_buses;
  opts.case_hash = hex_hash(text);
  opts.scenario_hash = "static";
  TrackingReport rep = track(s, f, config, opts);
  rep.header.command = "solve";
  write_report(rep, flags, out);
  return rep.failures.empty() ? ExitCode::ok : ExitCode::numeric;
}

int cmd_track(const SolverFlags& flags, const std::string& scenario_path, double solver_hz,
              std::ostream& out, std::ostream& err) {
  const std::string case_text = read_file(flags.case_path);
  const std::string scenario_text = read_file(scenario_path);
  const SolverConfig config = to_config(flags);
  const NetworkModel model = parse_case_text(case_text);
  const Scenario scenario = load_scenario_text(scenario_text, model);
  const auto f = make_formulation(model, slack_mode(flags));
  TrackOptions opts;
  opts.solver_hz = solver_hz;
  opts.reported_buses = flags.report_buses;
  opts.case_hash = hex_hash(case_text);
  opts.scenario_hash = hex_hash(scenario_text);
  const TrackingReport rep = track(scenario, f, config, opts);
  write_report(rep, flags, out);
  for (const StepFailure& fail : rep.failures) err << "step " << fail.k << ": " << fail.message << "\n";
  return rep.failures.empty() ? ExitCode::ok : ExitCode::numeric;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-varying ACOPF tracking by randomized coordinate descent", "tvopf"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option defaults (command line wins)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a case file");
  validate->add_option("case", validate_path, "Case file")->required();

  SolverFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "Static solve on the case's nominal data");
  add_solver_flags(*solve, solve_flags);

  SolverFlags track_flags;
  std::string scenario_path;
  double solver_hz = 1.0;
  auto* trackc = app.add_subcommand("track", "Track a scenario and write a report");
  add_solver_flags(*trackc, track_flags);
  trackc->add_option("--scenario", scenario_path, "Scenario CSV")->required()->check(CLI::ExistingFile);
  trackc->add_option("--solver-hz", solver_hz, "Solver step frequency")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::int64_t fn = 0, fng = 0, fp = 1;
  std::optional<double> sigma_l, sigma_p, drift, target;
  auto* flops = app.add_subcommand("flops", "Per-epoch operation counts and budget bound");
  flops->add_option("--N", fn, "Buses")->required();
  flops->add_option("--NG", fng, "Generators")->required();
  flops->add_option("--p", fp, "Max row nonzeros of the bus admittance")->required();
  flops->add_option("--sigma-l", sigma_l, "Initial suboptimality sigma_L");
  flops->add_option("--sigma-p", sigma_p, "sigma_P");
  flops->add_option("--drift", drift, "Drift constant e");
  flops->add_option("--error", target, "Target error E_k");

  std::string synth_case, synth_out;
  SynthSpec spec;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario CSV");
  synth->add_option("--case", synth_case, "Case file")->required()->check(CLI::ExistingFile);
  synth->add_option("--duration", spec.duration, "Seconds")->capture_default_str();
  synth->add_option("--data-hz", spec.data_hz, "Sample rate")->capture_default_str();
  synth->add_option("--amplitude", spec.amplitude, "Relative load swing")->capture_default_str();
  synth->add_option("--pv-amplitude", spec.pv_amplitude, "Relative availability swing (<0: amplitude)")
      ->capture_default_str();
  synth->add_option("--period", spec.period, "Seconds")->capture_default_str();
  synth->add_option("--noise", spec.noise, "Load noise std-dev, pu")->capture_default_str();
  synth->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output path (stdout if omitted)");

  std::vector<std::string> argv_storage{"tvopf"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return ExitCode::usage;
  }

  try {
    if (*validate) return cmd_validate(validate_path, out);
    if (*solve) return cmd_solve(solve_flags, out);
    if (*trackc) return cmd_track(track_flags, scenario_path, solver_hz, out, err);
    if (*flops) {
      const FlopCounts c = flop_counts(fn, fng, fp);
      out << "per_epoch " << c.per_epoch << "\n"
          << "cubic_root_evaluations " << c.root_evaluations << "\n"
          << "cubic_root_flops " << c.cubic_root_flops << "\n"
          << "per_coordinate_max " << c.per_coordinate_max << "\n";
      if (sigma_l || sigma_p || drift || target) {
        if (!(sigma_l && sigma_p && drift && target))
          throw ValidationError("budget bound needs --sigma-l, --sigma-p, --drift and --error together");
        const BudgetResult b = budget_for_error({*sigma_l, *sigma_p, *drift, *target, fn, fng, fp});
        out << "budget_flops " << format_double(b.flops) << "\n";
        if (b.non_positive) out << "budget_non_positive 1\n";
      }
      return ExitCode::ok;
    }
    if (*synth) {
      const NetworkModel m = parse_case(synth_case);
      const std::string text = write_scenario_text(synth_scenario(m, spec), m);
      if (synth_out.empty()) {
        out << text;
      } else {
        std::ofstream f(synth_out, std::ios::binary | std::ios::trunc);
        if (!(f << text)) throw std::runtime_error("cannot write " + synth_out);
      }
      return ExitCode::ok;
    }
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return ExitCode::numeric;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return ExitCode::domain;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return ExitCode::domain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::domain;
  }
  return ExitCode::usage;
}

}  // namespace tvopf::cli
