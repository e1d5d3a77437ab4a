// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.
//
// gridshift: simulates CO2 emissions of EV charging (direct vs
// emission-oriented) on top of a merit-order dispatch model.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gridshift/errors.hpp"
#include "gridshift/simulate.hpp"

namespace fs = std::filesystem;
using namespace gridshift;

namespace {

struct Flags {
  std::string config_path;
  std::string scenario;
  std::string scheme;
  std::string backend;
  double delta_mwh = -1.0;
  double threshold_mw = -1.0;
  std::int64_t seed = -1;
  std::string out;
};

RunConfig build_config(const Flags& flags) {
  RunConfig cfg;
  std::string path = flags.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("GRIDSHIFT_CONFIG")) path = env;
  }
  if (!path.empty()) load_config_file(cfg, path);
  if (!flags.scenario.empty()) {
    cfg.scenarios = {parse_scenario(flags.scenario)};
  }
  if (!flags.scheme.empty()) cfg.schemes = {parse_scheme(flags.scheme)};
  if (!flags.backend.empty()) cfg.backend = parse_backend(flags.backend);
  if (flags.delta_mwh > 0.0) cfg.delta_mwh = flags.delta_mwh;
  if (flags.threshold_mw > 0.0) cfg.threshold_mw = flags.threshold_mw;
  if (flags.seed >= 0) cfg.seed = static_cast<std::uint64_t>(flags.seed);
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  return cfg;
}

void write_run_files(const RunConfig& cfg, const RunOutput& run) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir);
  atomic_write(fs::path(cfg.output_dir) / "daily_results.csv",
               daily_results_csv(run.results));
  write_profiles_csv(run.results, fs::path(cfg.output_dir) / "profiles.csv");
  std::string jsonl;
  for (const auto& r : run.results) {
    if (r.scheme == Scheme::emission) {
      jsonl += green_run_record(r, cfg.backend, cfg.delta_mwh);
    }
  }
  atomic_write(fs::path(cfg.output_dir) / "runs.jsonl", jsonl);
  for (const auto& note : run.skipped) {
    std::cerr << "skipped: " << note << "\n";
  }
}

int cmd_gen_sessions(const Flags& flags) {
  RunConfig cfg = build_config(flags);
  if (cfg.catalog_path.empty() || !fs::exists(cfg.catalog_path)) {
    throw ValidationError("catalog_path missing or not found: " +
                          cfg.catalog_path);
  }
  const auto catalog = read_catalog(cfg.catalog_path);
  const ScenarioKind kind =
      flags.scenario.empty() ? ScenarioKind::day : parse_scenario(flags.scenario);
  const ScenarioSpec spec =
      kind == ScenarioKind::day
          ? ScenarioSpec::commuter_day(cfg.n_vehicles, cfg.seed)
          : ScenarioSpec::commuter_night(cfg.n_vehicles, cfg.seed);
  const auto sessions = sample_sessions(catalog, spec);
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir);
  const fs::path out = fs::path(cfg.output_dir) /
                       ("sessions_" + std::string(scenario_name(kind)) + ".csv");
  write_sessions(sessions, out);
  std::cout << "wrote " << sessions.size() << " sessions to " << out.string()
            << "\n";
  return kExitOk;
}

int cmd_analyze_load(const Flags& flags) {
  RunConfig cfg = build_config(flags);
  if (cfg.load_path.empty() || !fs::exists(cfg.load_path)) {
    throw ValidationError("load_path missing or not found: " + cfg.load_path);
  }
  const LoadSeries series = load_series(cfg.load_path);
  const ThresholdReport rep =
      low_generation_stats(series, cfg.threshold_mw, cfg.day_window);
  const std::string json = threshold_report_json(rep, cfg.day_window);
  std::cout << json;
  if (!flags.out.empty()) {
    std::error_code ec;
    fs::create_directories(flags.out, ec);
    if (ec) throw IoError("cannot create " + flags.out);
    atomic_write(fs::path(flags.out) / "threshold_report.json", json);
  }
  return kExitOk;
}

int cmd_simulate(const Flags& flags) {
  RunConfig cfg = build_config(flags);
  const RunOutput run = run_year(cfg);
  write_run_files(cfg, run);
  std::cout << "wrote " << run.results.size() << " result rows to "
            << cfg.output_dir << "\n";
  return kExitOk;
}

int cmd_compare(const Flags& flags) {
  RunConfig cfg = build_config(flags);
  cfg.schemes = {Scheme::direct, Scheme::emission};
  const RunOutput run = run_year(cfg);
  write_run_files(cfg, run);
  const ComparisonSummary summary =
      summarize(run.results, 0.01, cfg.histogram_bin_pct);
  emit_reports(summary, run.results, cfg.output_dir);
  std::cout << summary_json(summary);
  return kExitOk;
}

int cmd_report(const Flags& flags) {
  RunConfig cfg = build_config(flags);
  const fs::path dir = cfg.output_dir;
  const auto results =
      read_daily_results(dir / "daily_results.csv", dir / "profiles.csv");
  const ComparisonSummary summary =
      summarize(results, 0.01, cfg.histogram_bin_pct);
  emit_reports(summary, results, dir);
  std::cout << summary_json(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "EV charging CO2 simulator: merit-order dispatch with direct vs "
      "emission-oriented charging"};
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--config", flags.config_path,
                 "key=value config file (or set GRIDSHIFT_CONFIG)");

  auto add_common = [&](CLI::App* sub, bool with_seed = true) {
    sub->add_option("--out", flags.out, "output directory");
    if (with_seed) sub->add_option("--seed", flags.seed, "RNG seed");
  };

  CLI::App* gen = app.add_subcommand("gen-sessions",
                                     "sample charging sessions to CSV");
  gen->add_option("--scenario", flags.scenario, "day|night");
  add_common(gen);

  CLI::App* analyze = app.add_subcommand(
      "analyze-load", "below-threshold statistics of the net-load series");
  analyze->add_option("--threshold-mw", flags.threshold_mw,
                      "low-generation threshold, MW");
  add_common(analyze, false);

  CLI::App* simulate =
      app.add_subcommand("simulate", "run the configured scenario sweep");
  simulate->add_option("--scenario", flags.scenario, "day|night");
  simulate->add_option("--scheme", flags.scheme, "direct|emission");
  simulate->add_option("--backend", flags.backend, "dp|exact");
  simulate->add_option("--delta-mwh", flags.delta_mwh,
                       "aggregate discretization step, MWh");
  add_common(simulate);

  CLI::App* compare = app.add_subcommand(
      "compare", "run both schemes and write the comparison report");
  compare->add_option("--scenario", flags.scenario, "day|night");
  compare->add_option("--backend", flags.backend, "dp|exact");
  compare->add_option("--delta-mwh", flags.delta_mwh,
                      "aggregate discretization step, MWh");
  add_common(compare);

  CLI::App* report = app.add_subcommand(
      "report", "rebuild the report from existing result files");
  add_common(report, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (gen->parsed()) return cmd_gen_sessions(flags);
    if (analyze->parsed()) return cmd_analyze_load(flags);
    if (simulate->parsed()) return cmd_simulate(flags);
    if (compare->parsed()) return cmd_compare(flags);
    if (report->parsed()) return cmd_report(flags);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
