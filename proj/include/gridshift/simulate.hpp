// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridshift/calendar.hpp"
#include "gridshift/csv.hpp"
#include "gridshift/direct.hpp"
#include "gridshift/errors.hpp"
#include "gridshift/fleet.hpp"
#include "gridshift/green.hpp"
#include "gridshift/load_series.hpp"
#include "gridshift/sessions.hpp"
#include "gridshift/svg.hpp"

namespace gridshift {

enum class Scheme { direct, emission };

inline const char* scheme_name(Scheme s) {
  return s == Scheme::direct ? "direct" : "emission";
}

inline Scheme parse_scheme(const std::string& s) {
  if (s == "direct") return Scheme::direct;
  if (s == "emission") return Scheme::emission;
  throw ValidationError("unknown scheme '" + s + "' (direct|emission)");
}

inline ScenarioKind parse_scenario(const std::string& s) {
  if (s == "day") return ScenarioKind::day;
  if (s == "night") return ScenarioKind::night;
  throw ValidationError("unknown scenario '" + s + "' (day|night)");
}

inline Backend parse_backend(const std::string& s) {
  if (s == "dp") return Backend::dp;
  if (s == "exact") return Backend::exact;
  throw ValidationError("unknown backend '" + s + "' (dp|exact)");
}

/// Everything a scenario sweep needs. Values come from built-in defaults,
/// then an optional key=value config file, then CLI flags.
struct RunConfig {
  std::string fleet_path;
  std::string load_path;
  std::string catalog_path;
  std::size_t n_vehicles = 25000;
  std::uint64_t seed = 1;
  std::vector<ScenarioKind> scenarios{ScenarioKind::day, ScenarioKind::night};
  std::vector<Scheme> schemes{Scheme::direct, Scheme::emission};
  double delta_mwh = 1.0;
  Backend backend = Backend::dp;
  HourWindow day_window{7, 19};
  double threshold_mw = 20000.0;
  std::string output_dir = "out";
  bool weekdays_only = true;
  double histogram_bin_pct = 1.0;

  void validate() const {
    namespace fs = std::filesystem;
    if (fleet_path.empty() || !fs::exists(fleet_path)) {
      throw ValidationError("fleet_path missing or not found: " + fleet_path);
    }
    if (load_path.empty() || !fs::exists(load_path)) {
      throw ValidationError("load_path missing or not found: " + load_path);
    }
    if (catalog_path.empty() || !fs::exists(catalog_path)) {
      throw ValidationError("catalog_path missing or not found: " +
                            catalog_path);
    }
    if (delta_mwh <= 0.0) throw ValidationError("delta_mwh must be positive");
    if (threshold_mw <= 0.0) {
      throw ValidationError("threshold_mw must be positive");
    }
    if (histogram_bin_pct <= 0.0) {
      throw ValidationError("histogram_bin_pct must be positive");
    }
    if (scenarios.empty()) throw ValidationError("no scenarios selected");
    if (schemes.empty()) throw ValidationError("no schemes selected");
  }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty() || out.empty()) out.push_back(trim(cur));
  return out;
}

inline HourWindow parse_hour_window(const std::string& s) {
  const auto dash = s.find('-');
  if (dash == std::string::npos) {
    throw ParseError("bad hour window '" + s + "' (expected H-H)");
  }
  HourWindow w;
  w.begin = static_cast<int>(parse_csv_int(s.substr(0, dash), "window", 0));
  w.end = static_cast<int>(parse_csv_int(s.substr(dash + 1), "window", 0));
  if (w.begin < 0 || w.begin > 23 || w.end < 0 || w.end > 24 ||
      w.begin == w.end) {
    throw ParseError("hour window '" + s + "' out of range");
  }
  return w;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParseError("bad boolean '" + s + "'");
}

}  // namespace detail

/// Applies one config key. Shared by the file parser and the CLI overrides.
inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
  if (key == "fleet_path") {
    cfg.fleet_path = value;
  } else if (key == "load_path") {
    cfg.load_path = value;
  } else if (key == "catalog_path") {
    cfg.catalog_path = value;
  } else if (key == "n_vehicles") {
    cfg.n_vehicles = static_cast<std::size_t>(
        parse_csv_int(value, "n_vehicles", 0));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_csv_int(value, "seed", 0));
  } else if (key == "scenarios") {
    cfg.scenarios.clear();
    for (const auto& part : detail::split_list(value)) {
      cfg.scenarios.push_back(parse_scenario(part));
    }
  } else if (key == "schemes") {
    cfg.schemes.clear();
    for (const auto& part : detail::split_list(value)) {
      cfg.schemes.push_back(parse_scheme(part));
    }
  } else if (key == "delta_mwh") {
    cfg.delta_mwh = parse_csv_double(value, "delta_mwh", 0);
  } else if (key == "backend") {
    cfg.backend = parse_backend(value);
  } else if (key == "day_window") {
    cfg.day_window = detail::parse_hour_window(value);
  } else if (key == "threshold_mw") {
    cfg.threshold_mw = parse_csv_double(value, "threshold_mw", 0);
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "weekdays_only") {
    cfg.weekdays_only = detail::parse_bool(value);
  } else if (key == "histogram_bin_pct") {
    cfg.histogram_bin_pct = parse_csv_double(value, "histogram_bin_pct", 0);
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

/// Flat key=value config file; '#' starts a comment line.
inline void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected key=value");
    }
    try {
      apply_config_entry(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const Error& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " +
                       e.what());
    }
  }
}

/// One scenario-scheme run for one date.
struct DailyResult {
  std::string date;  // YYYY-MM-DD
  ScenarioKind scenario = ScenarioKind::day;
  Scheme scheme = Scheme::direct;
  double emissions_ton = 0.0;
  double cost = 0.0;
  double residual_mwh = 0.0;  // dispersal deviation; 0 for direct
  std::vector<double> aggregate_profile;  // charging MWh per horizon hour
};

struct RunOutput {
  std::vector<DailyResult> results;
  std::vector<std::string> skipped;  // date/scenario and reason
};

/// Sweeps every (qualifying) day covered by the load series. Day scenarios
/// use the civil day; night scenarios the noon-to-noon horizon starting that
/// day. Within a date, both scenarios share one sampled vehicle population
/// and both schemes consume identical sessions. Days whose runs fail are
/// recorded and skipped.
inline RunOutput run_year(const RunConfig& config) {
  config.validate();
  const Fleet fleet = load_fleet(config.fleet_path);
  const LoadSeries series = load_series(config.load_path);
  const auto catalog = read_catalog(config.catalog_path);

  RunOutput out;
  const std::int64_t first_day = day_of(series.start());
  const std::int64_t last_day =
      day_of(series.start() + static_cast<HourStamp>(series.size()) - 1);
  bool attempted_any = false;
  for (std::int64_t d = first_day; d <= last_day; ++d) {
    if (config.weekdays_only && is_weekend(d)) continue;
    const std::string date = format_date(d);
    std::optional<SessionPair> pair;
    for (ScenarioKind scenario : config.scenarios) {
      const HourStamp h0 = d * 24 + horizon_start_hod(scenario);
      if (!series.covers(h0, kScenarioHorizonHours)) continue;
      attempted_any = true;
      try {
        if (!pair) {
          pair = sample_paired_sessions(
              catalog, config.n_vehicles,
              derive_seed(config.seed, static_cast<std::uint64_t>(d)));
        }
        const auto& sessions =
            scenario == ScenarioKind::day ? pair->day : pair->night;
        const LoadSeries day_load = series.slice(h0, kScenarioHorizonHours);
        std::vector<DailyResult> rows;
        for (Scheme scheme : config.schemes) {
          DailyResult r;
          r.date = date;
          r.scenario = scenario;
          r.scheme = scheme;
          if (scheme == Scheme::direct) {
            auto [sched, profile] = direct_run(fleet, day_load, sessions);
            r.emissions_ton = sched.total_emissions;
            r.cost = sched.total_cost;
            r.residual_mwh = 0.0;
            r.aggregate_profile = profile.aggregate;
          } else {
            GreenSolution sol = green_run(fleet, day_load, sessions,
                                          config.backend, config.delta_mwh);
            r.emissions_ton = sol.schedule.total_emissions;
            r.cost = sol.schedule.total_cost;
            r.residual_mwh = sol.dispersal_residual_mwh;
            r.aggregate_profile = sol.aggregate;
          }
          rows.push_back(std::move(r));
        }
        for (auto& r : rows) out.results.push_back(std::move(r));
      } catch (const Error& e) {
        out.skipped.push_back(date + " " + scenario_name(scenario) + ": " +
                              e.what());
      }
    }
  }
  if (attempted_any && out.results.empty()) {
    throw InfeasibleError("every day failed; first: " +
                          (out.skipped.empty() ? std::string("?")
                                               : out.skipped.front()));
  }
  if (!attempted_any) {
    throw ValidationError("load series covers no full scenario horizon");
  }
  return out;
}

struct HistogramBin {
  double left_pct = 0.0;
  double right_pct = 0.0;
  std::size_t count = 0;
  ScenarioKind scenario = ScenarioKind::day;
};

struct MeanProfile {
  std::vector<double> mean_mwh;
  std::size_t n_days = 0;
};

/// Year-level comparison of the two schemes.
struct ComparisonSummary {
  double mean_savings_pct_day = 0.0;    // mean over significant day pairs
  double mean_savings_pct_night = 0.0;  // mean over significant night pairs
  double significant_fraction = 0.0;    // |delta| > threshold_ton, all pairs
  std::size_t n_days = 0;               // compared (date, scenario) pairs
  double threshold_ton = 0.01;
  double bin_width_pct = 1.0;
  std::vector<HistogramBin> histogram;
  // key "<scenario>_<scheme>" -> mean charging profile over that key's days
  std::map<std::string, MeanProfile> mean_profiles;
};

/// Pairs direct/emission rows per (date, scenario) and reduces them to the
/// summary statistics. Savings are (emission - direct) / direct in percent,
/// so negative values are savings.
inline ComparisonSummary summarize(const std::vector<DailyResult>& results,
                                   double threshold_ton = 0.01,
                                   double bin_width_pct = 1.0) {
  ComparisonSummary sum;
  sum.threshold_ton = threshold_ton;
  sum.bin_width_pct = bin_width_pct;

  std::map<std::pair<std::string, ScenarioKind>,
           std::pair<std::optional<double>, std::optional<double>>>
      pairs;  // (date, scenario) -> (direct, emission)
  for (const auto& r : results) {
    auto& slot = pairs[{r.date, r.scenario}];
    if (r.scheme == Scheme::direct) {
      slot.first = r.emissions_ton;
    } else {
      slot.second = r.emissions_ton;
    }
    const std::string key =
        std::string(scenario_name(r.scenario)) + "_" + scheme_name(r.scheme);
    auto& mp = sum.mean_profiles[key];
    if (mp.mean_mwh.size() < r.aggregate_profile.size()) {
      mp.mean_mwh.resize(r.aggregate_profile.size(), 0.0);
    }
    for (std::size_t t = 0; t < r.aggregate_profile.size(); ++t) {
      mp.mean_mwh[t] += r.aggregate_profile[t];
    }
    ++mp.n_days;
  }
  for (auto& [key, mp] : sum.mean_profiles) {
    for (double& v : mp.mean_mwh) v /= static_cast<double>(mp.n_days);
  }

  double sum_day = 0.0, sum_night = 0.0;
  std::size_t n_sig_day = 0, n_sig_night = 0, n_sig = 0;
  std::map<std::pair<int, long long>, std::size_t> bins;  // (scenario, bin)
  for (const auto& [key, slot] : pairs) {
    if (!slot.second.has_value()) continue;  // direct-only rows: nothing to compare
    if (!slot.first.has_value()) {
      throw ValidationError("emission run without matching direct run on " +
                            key.first + " (" + scenario_name(key.second) + ")");
    }
    const double direct = *slot.first;
    const double emission = *slot.second;
    const double savings_pct =
        direct == 0.0 ? 0.0 : 100.0 * (emission - direct) / direct;
    ++sum.n_days;
    const bool significant = std::abs(emission - direct) > threshold_ton;
    if (significant) {
      ++n_sig;
      if (key.second == ScenarioKind::day) {
        sum_day += savings_pct;
        ++n_sig_day;
      } else {
        sum_night += savings_pct;
        ++n_sig_night;
      }
    }
    const long long bin =
        static_cast<long long>(std::floor(savings_pct / bin_width_pct));
    ++bins[{key.second == ScenarioKind::day ? 0 : 1, bin}];
  }
  sum.mean_savings_pct_day =
      n_sig_day ? sum_day / static_cast<double>(n_sig_day) : 0.0;
  sum.mean_savings_pct_night =
      n_sig_night ? sum_night / static_cast<double>(n_sig_night) : 0.0;
  sum.significant_fraction =
      sum.n_days ? static_cast<double>(n_sig) / static_cast<double>(sum.n_days)
                 : 0.0;
  for (const auto& [key, count] : bins) {
    HistogramBin b;
    b.scenario = key.first == 0 ? ScenarioKind::day : ScenarioKind::night;
    b.left_pct = static_cast<double>(key.second) * bin_width_pct;
    b.right_pct = b.left_pct + bin_width_pct;
    b.count = count;
    sum.histogram.push_back(b);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Result file IO

inline constexpr const char* kDailyResultsHeader =
    "date,scenario,scheme,emissions_ton,cost,residual_mwh";
inline constexpr const char* kProfilesHeader =
    "date,scenario,scheme,hour,aggregate_mwh";

inline std::string daily_results_csv(const std::vector<DailyResult>& results) {
  std::string out(kDailyResultsHeader);
  out += "\n";
  for (const auto& r : results) {
    out += r.date + "," + scenario_name(r.scenario) + "," +
           scheme_name(r.scheme) + "," + fmt_double(r.emissions_ton) + "," +
           fmt_double(r.cost) + "," + fmt_double(r.residual_mwh) + "\n";
  }
  return out;
}

inline void write_profiles_csv(const std::vector<DailyResult>& results,
                               const std::filesystem::path& path) {
  std::string out(kProfilesHeader);
  out += "\n";
  for (const auto& r : results) {
    for (std::size_t t = 0; t < r.aggregate_profile.size(); ++t) {
      out += r.date + "," + scenario_name(r.scenario) + "," +
             scheme_name(r.scheme) + "," + std::to_string(t) + "," +
             fmt_double(r.aggregate_profile[t]) + "\n";
    }
  }
  atomic_write(path, out);
}

inline std::vector<DailyResult> read_daily_results(
    const std::filesystem::path& results_path,
    const std::filesystem::path& profiles_path) {
  CsvTable table(results_path, kDailyResultsHeader);
  std::vector<DailyResult> results;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.row(i);
    const std::size_t line = table.line_of(i);
    DailyResult d;
    d.date = r[0];
    d.scenario = parse_scenario(r[1]);
    d.scheme = parse_scheme(r[2]);
    d.emissions_ton = parse_csv_double(r[3], "emissions_ton", line);
    d.cost = parse_csv_double(r[4], "cost", line);
    d.residual_mwh = parse_csv_double(r[5], "residual_mwh", line);
    index[d.date + "|" + r[1] + "|" + r[2]] = results.size();
    results.push_back(std::move(d));
  }
  CsvTable prof(profiles_path, kProfilesHeader);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const auto& r = prof.row(i);
    const std::size_t line = prof.line_of(i);
    const auto it = index.find(r[0] + "|" + r[1] + "|" + r[2]);
    if (it == index.end()) {
      throw ValidationError(profiles_path.string() + ": row " +
                            std::to_string(line) +
                            ": profile without matching result row");
    }
    auto& d = results[it->second];
    const auto hour = static_cast<std::size_t>(parse_csv_int(r[3], "hour", line));
    if (d.aggregate_profile.size() <= hour) d.aggregate_profile.resize(hour + 1, 0.0);
    d.aggregate_profile[hour] = parse_csv_double(r[4], "aggregate_mwh", line);
  }
  return results;
}

inline std::string summary_json(const ComparisonSummary& sum) {
  std::string out = "{\n";
  out += "  \"mean_savings_pct_day\": " + fmt_double(sum.mean_savings_pct_day) +
         ",\n";
  out += "  \"mean_savings_pct_night\": " +
         fmt_double(sum.mean_savings_pct_night) + ",\n";
  out += "  \"significant_fraction\": " + fmt_double(sum.significant_fraction) +
         ",\n";
  out += "  \"n_days\": " + std::to_string(sum.n_days) + ",\n";
  out += "  \"threshold_ton\": " + fmt_double(sum.threshold_ton) + "\n";
  out += "}\n";
  return out;
}

/// Writes the full report set: daily results, summary, histogram, mean
/// profiles, and an SVG render of each. All writes are atomic.
inline void emit_reports(const ComparisonSummary& summary,
                         const std::vector<DailyResult>& results,
                         const std::filesystem::path& output_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create " + output_dir.string());

  atomic_write(output_dir / "daily_results.csv", daily_results_csv(results));
  atomic_write(output_dir / "summary.json", summary_json(summary));

  std::string hist(
      "bin_left_pct,bin_right_pct,count,scenario");
  hist += "\n";
  for (const auto& b : summary.histogram) {
    hist += fmt_double(b.left_pct) + "," + fmt_double(b.right_pct) + "," +
            std::to_string(b.count) + "," + scenario_name(b.scenario) + "\n";
  }
  atomic_write(output_dir / "savings_histogram.csv", hist);

  for (const auto& [key, mp] : summary.mean_profiles) {
    std::string csv = "hour,mean_mwh\n";
    for (std::size_t t = 0; t < mp.mean_mwh.size(); ++t) {
      csv += std::to_string(t) + "," + fmt_double(mp.mean_mwh[t]) + "\n";
    }
    atomic_write(output_dir / ("mean_profile_" + key + ".csv"), csv);
    atomic_write(
        output_dir / ("mean_profile_" + key + ".svg"),
        render_line_chart("Mean charging profile: " + key, "horizon hour",
                          "MWh", {{key, mp.mean_mwh}}));
  }

  // Daily emission traces, one series per (scenario, scheme).
  std::map<std::string, SvgSeries> traces;
  for (const auto& r : results) {
    const std::string key =
        std::string(scenario_name(r.scenario)) + "_" + scheme_name(r.scheme);
    auto& s = traces[key];
    s.label = key;
    s.ys.push_back(r.emissions_ton);
  }
  std::vector<SvgSeries> series;
  for (auto& [key, s] : traces) series.push_back(std::move(s));
  atomic_write(output_dir / "daily_results.svg",
               render_line_chart("Daily emissions", "day number", "ton CO2",
                                 series));

  std::vector<SvgBar> bars;
  for (const auto& b : summary.histogram) {
    bars.push_back(
        {b.left_pct, b.right_pct, static_cast<double>(b.count),
         scenario_name(b.scenario)});
  }
  atomic_write(output_dir / "savings_histogram.svg",
               render_bar_chart("Emission-oriented vs direct savings",
                                "(emission - direct) / direct, %", "days",
                                bars));
}

/// JSON-lines record for one emission-oriented run.
inline std::string green_run_record(const DailyResult& r, Backend backend,
                                    double delta_mwh) {
  return std::string("{\"day\": \"") + r.date + "\", \"scheme\": \"" +
         scheme_name(r.scheme) + "\", \"scenario\": \"" +
         scenario_name(r.scenario) + "\", \"emissions_ton\": " +
         fmt_double(r.emissions_ton) + ", \"cost\": " + fmt_double(r.cost) +
         ", \"residual_mwh\": " + fmt_double(r.residual_mwh) +
         ", \"backend\": \"" + backend_name(backend) +
         "\", \"delta_mwh\": " + fmt_double(delta_mwh) + "}\n";
}

inline std::string threshold_report_json(const ThresholdReport& rep,
                                         const HourWindow& window) {
  std::string out = "{\n";
  out += "  \"threshold_mw\": " + fmt_double(rep.threshold_mw) + ",\n";
  out += "  \"total_hours\": " + std::to_string(rep.total_hours) + ",\n";
  out += "  \"hours_below\": " + std::to_string(rep.hours_below) + ",\n";
  out += "  \"fraction_below\": " + fmt_double(rep.fraction_below) + ",\n";
  out += "  \"day_window\": \"" + std::to_string(window.begin) + "-" +
         std::to_string(window.end) + "\",\n";
  out += "  \"below_in_window\": " + std::to_string(rep.below_in_window) +
         ",\n";
  out += "  \"below_out_window\": " + std::to_string(rep.below_out_window) +
         ",\n";
  out += "  \"mean_in_window_mw\": " + fmt_double(rep.mean_in_window_mw) +
         ",\n";
  out += "  \"mean_out_window_mw\": " + fmt_double(rep.mean_out_window_mw) +
         "\n";
  out += "}\n";
  return out;
}

}  // namespace gridshift
