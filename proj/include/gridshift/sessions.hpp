// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "gridshift/csv.hpp"
#include "gridshift/errors.hpp"
#include "gridshift/rng.hpp"

namespace gridshift {

/// One vehicle's charging task: present during [arrival, departure) hour
/// slots; wants energy_mwh delivered at up to max_rate_mw per hour.
struct ChargingSession {
  std::string vehicle_id;
  int arrival = 0;      // hour index into the simulation horizon
  int departure = 0;    // exclusive
  double energy_mwh = 0.0;
  double max_rate_mw = 0.0;

  int window_hours() const { return departure - arrival; }

  void validate() const {
    if (arrival < 0 || arrival >= departure) {
      throw ValidationError("session " + vehicle_id +
                            ": requires 0 <= arrival < departure");
    }
    if (max_rate_mw <= 0.0) {
      throw ValidationError("session " + vehicle_id + ": max rate must be > 0");
    }
    if (energy_mwh <= 0.0 ||
        energy_mwh > window_hours() * max_rate_mw + 1e-9) {
      throw ValidationError(
          "session " + vehicle_id +
          ": energy must be in (0, window_hours * max_rate]");
    }
  }
};

/// Catalog entry: a vehicle model with its share of the sampled population.
struct VehicleModel {
  std::string name;
  double battery_capacity_kwh = 0.0;
  double max_rate_kw = 0.0;
  double market_share = 0.0;
};

inline void validate_catalog(const std::vector<VehicleModel>& catalog) {
  if (catalog.empty()) throw ValidationError("vehicle catalog is empty");
  double sum = 0.0;
  for (const auto& m : catalog) {
    if (m.battery_capacity_kwh <= 0.0 || m.max_rate_kw <= 0.0) {
      throw ValidationError("vehicle model " + m.name +
                            ": capacity and rate must be positive");
    }
    if (m.market_share < 0.0) {
      throw ValidationError("vehicle model " + m.name + ": negative share");
    }
    sum += m.market_share;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("catalog market shares sum to " + fmt_double(sum) +
                          ", expected 1");
  }
}

inline constexpr const char* kCatalogCsvHeader =
    "name,battery_kwh,max_rate_kw,market_share";

inline std::vector<VehicleModel> read_catalog(
    const std::filesystem::path& path) {
  CsvTable table(path, kCatalogCsvHeader);
  std::vector<VehicleModel> catalog;
  catalog.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.row(i);
    const std::size_t line = table.line_of(i);
    VehicleModel m;
    m.name = r[0];
    m.battery_capacity_kwh = parse_csv_double(r[1], "battery_kwh", line);
    m.max_rate_kw = parse_csv_double(r[2], "max_rate_kw", line);
    m.market_share = parse_csv_double(r[3], "market_share", line);
    catalog.push_back(std::move(m));
  }
  validate_catalog(catalog);
  return catalog;
}

enum class ScenarioKind { day, night };

inline const char* scenario_name(ScenarioKind k) {
  return k == ScenarioKind::day ? "day" : "night";
}

/// Wall-clock hour at which the scenario's 24-hour horizon starts. Night
/// horizons run noon-to-noon so that overnight stays cross no index
/// boundary.
inline int horizon_start_hod(ScenarioKind k) {
  return k == ScenarioKind::day ? 0 : 12;
}

inline constexpr int kScenarioHorizonHours = 24;

/// Population spec for one sampled scenario. Windows are inclusive
/// hour-of-day ranges the continuous arrival/departure instants are drawn
/// from before rounding to the nearest hour.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::day;
  std::size_t n_vehicles = 0;
  double arrival_lo = 7.0, arrival_hi = 10.0;
  double departure_lo = 16.0, departure_hi = 20.0;
  std::uint64_t seed = 0;

  static ScenarioSpec commuter_day(std::size_t n, std::uint64_t seed) {
    return ScenarioSpec{ScenarioKind::day, n, 7.0, 10.0, 16.0, 20.0, seed};
  }
  // Overnight stay: arrive in the evening, leave the next morning.
  static ScenarioSpec commuter_night(std::size_t n, std::uint64_t seed) {
    return ScenarioSpec{ScenarioKind::night, n, 16.0, 20.0, 7.0, 10.0, seed};
  }

  void validate() const {
    auto check = [](double lo, double hi, const char* which) {
      if (lo > hi || lo < 0.0 || hi >= 24.0) {
        throw ValidationError(std::string("scenario ") + which +
                              " window must satisfy 0 <= lo <= hi < 24");
      }
    };
    check(arrival_lo, arrival_hi, "arrival");
    check(departure_lo, departure_hi, "departure");
  }
};

namespace detail {

inline std::string vehicle_id_of(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "v%05zu", index + 1);
  return buf;
}

inline std::vector<double> cumulative_shares(
    const std::vector<VehicleModel>& catalog) {
  std::vector<double> cum;
  cum.reserve(catalog.size());
  double s = 0.0;
  for (const auto& m : catalog) {
    s += m.market_share;
    cum.push_back(s);
  }
  return cum;
}

/// Draws one (arrival, departure) pair of horizon indices for the spec,
/// retrying when hour rounding collapses the window.
inline std::pair<int, int> draw_window(const ScenarioSpec& spec, Rng& rng) {
  const int start = horizon_start_hod(spec.kind);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const long a_hod = std::lround(rng.uniform(spec.arrival_lo, spec.arrival_hi));
    const long d_hod =
        std::lround(rng.uniform(spec.departure_lo, spec.departure_hi));
    const int a = static_cast<int>((a_hod - start + 24) % 24);
    const int d = static_cast<int>((d_hod - start + 24) % 24);
    if (a < d) return {a, d};
  }
  throw ValidationError(
      "scenario windows collapse after rounding; no valid stay found in 100 "
      "draws");
}

}  // namespace detail

/// Samples n_vehicles sessions: model by market-share multinomial, stay by
/// uniform draws over the windows rounded to the nearest hour. The energy
/// request is the most that can be delivered during the stay, capped by the
/// battery. Deterministic in (catalog, spec).
inline std::vector<ChargingSession> sample_sessions(
    const std::vector<VehicleModel>& catalog, const ScenarioSpec& spec) {
  validate_catalog(catalog);
  spec.validate();
  const auto cum = detail::cumulative_shares(catalog);
  Rng rng(spec.seed);
  std::vector<ChargingSession> sessions;
  sessions.reserve(spec.n_vehicles);
  for (std::size_t i = 0; i < spec.n_vehicles; ++i) {
    const auto& model = catalog[rng.pick_weighted(cum)];
    const auto [a, d] = detail::draw_window(spec, rng);
    ChargingSession s;
    s.vehicle_id = detail::vehicle_id_of(i);
    s.arrival = a;
    s.departure = d;
    s.max_rate_mw = model.max_rate_kw / 1000.0;
    s.energy_mwh =
        std::min(model.battery_capacity_kwh / 1000.0, (d - a) * s.max_rate_mw);
    s.validate();
    sessions.push_back(std::move(s));
  }
  return sessions;
}

/// A day and a night population over the same vehicles: identical models and
/// identical energy requests, only the stay windows differ, so the two
/// scenarios carry the same total charging demand.
struct SessionPair {
  std::vector<ChargingSession> day;
  std::vector<ChargingSession> night;
};

inline SessionPair sample_paired_sessions(
    const std::vector<VehicleModel>& catalog, std::size_t n_vehicles,
    std::uint64_t seed) {
  validate_catalog(catalog);
  const auto day_spec = ScenarioSpec::commuter_day(n_vehicles, seed);
  const auto night_spec = ScenarioSpec::commuter_night(n_vehicles, seed);
  const auto cum = detail::cumulative_shares(catalog);
  Rng rng(seed);
  SessionPair pair;
  pair.day.reserve(n_vehicles);
  pair.night.reserve(n_vehicles);
  for (std::size_t i = 0; i < n_vehicles; ++i) {
    const auto& model = catalog[rng.pick_weighted(cum)];
    const auto [da, dd] = detail::draw_window(day_spec, rng);
    const auto [na, nd] = detail::draw_window(night_spec, rng);
    const double rate_mw = model.max_rate_kw / 1000.0;
    // Shared request: deliverable in both stays, capped by the battery.
    const double energy =
        std::min(model.battery_capacity_kwh / 1000.0,
                 std::min((dd - da) * rate_mw, (nd - na) * rate_mw));
    const std::string id = detail::vehicle_id_of(i);
    pair.day.push_back({id, da, dd, energy, rate_mw});
    pair.night.push_back({id, na, nd, energy, rate_mw});
    pair.day.back().validate();
    pair.night.back().validate();
  }
  return pair;
}

inline constexpr const char* kSessionsCsvHeader =
    "vehicle_id,arrival_hour,departure_hour,energy_mwh,max_rate_mw";

inline void write_sessions(const std::vector<ChargingSession>& sessions,
                           const std::filesystem::path& path) {
  std::string out(kSessionsCsvHeader);
  out += "\n";
  for (const auto& s : sessions) {
    out += s.vehicle_id + "," + std::to_string(s.arrival) + "," +
           std::to_string(s.departure) + "," + fmt_double(s.energy_mwh) + "," +
           fmt_double(s.max_rate_mw) + "\n";
  }
  atomic_write(path, out);
}

inline std::vector<ChargingSession> read_sessions(
    const std::filesystem::path& path) {
  CsvTable table(path, kSessionsCsvHeader);
  std::vector<ChargingSession> sessions;
  sessions.reserve(table.size());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.row(i);
    const std::size_t line = table.line_of(i);
    ChargingSession s;
    s.vehicle_id = r[0];
    s.arrival = static_cast<int>(parse_csv_int(r[1], "arrival_hour", line));
    s.departure = static_cast<int>(parse_csv_int(r[2], "departure_hour", line));
    s.energy_mwh = parse_csv_double(r[3], "energy_mwh", line);
    s.max_rate_mw = parse_csv_double(r[4], "max_rate_mw", line);
    try {
      s.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ": row " + std::to_string(line) +
                            ": " + e.what());
    }
    if (!seen.insert(s.vehicle_id).second) {
      throw ValidationError(path.string() + ": row " + std::to_string(line) +
                            ": duplicate vehicle_id " + s.vehicle_id);
    }
    sessions.push_back(std::move(s));
  }
  return sessions;
}

/// Total requested energy of a session list, MWh.
inline double total_energy_mwh(const std::vector<ChargingSession>& sessions) {
  double s = 0.0;
  for (const auto& c : sessions) s += c.energy_mwh;
  return s;
}

}  // namespace gridshift
