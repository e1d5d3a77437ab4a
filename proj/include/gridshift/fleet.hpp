// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "gridshift/csv.hpp"
#include "gridshift/errors.hpp"

namespace gridshift {

enum class Fuel { coal, gas, nuclear, hydro, other };

inline Fuel parse_fuel(const std::string& s, std::size_t row) {
  if (s == "coal") return Fuel::coal;
  if (s == "gas") return Fuel::gas;
  if (s == "nuclear") return Fuel::nuclear;
  if (s == "hydro") return Fuel::hydro;
  if (s == "other") return Fuel::other;
  throw ParseError("row " + std::to_string(row) + ": unknown fuel '" + s + "'");
}

inline const char* fuel_name(Fuel f) {
  switch (f) {
    case Fuel::coal: return "coal";
    case Fuel::gas: return "gas";
    case Fuel::nuclear: return "nuclear";
    case Fuel::hydro: return "hydro";
    case Fuel::other: return "other";
  }
  return "other";
}

/// One dispatchable plant. All energy quantities are per 1-hour step, so
/// MW and MWh are numerically interchangeable throughout.
struct Generator {
  std::string id;
  Fuel fuel = Fuel::other;
  double capacity_mw = 0.0;       // P_j
  double marginal_cost = 0.0;     // currency per MWh
  double emission_rate = 0.0;     // ton CO2 per MWh
  double ramp_limit_mw = 0.0;     // max |output change| per hour

  /// Hourly ramp default: 60% of capacity for coal, full capacity otherwise.
  static double default_ramp(Fuel fuel, double capacity_mw) {
    return fuel == Fuel::coal ? 0.6 * capacity_mw : capacity_mw;
  }

  void validate() const {
    if (capacity_mw <= 0.0) {
      throw ValidationError("generator " + id + ": capacity must be positive");
    }
    if (marginal_cost < 0.0) {
      throw ValidationError("generator " + id + ": negative marginal cost");
    }
    if (emission_rate < 0.0) {
      throw ValidationError("generator " + id + ": negative emission rate");
    }
    if (ramp_limit_mw <= 0.0 || ramp_limit_mw > capacity_mw + 1e-9) {
      throw ValidationError("generator " + id +
                            ": ramp limit must be in (0, capacity]");
    }
  }
};

/// Generator fleet in merit order: ascending marginal cost, ties broken by
/// lower emission rate, then id. The order fixes the dispatch stacking.
class Fleet {
 public:
  Fleet() = default;

  explicit Fleet(std::vector<Generator> generators)
      : generators_(std::move(generators)) {
    std::set<std::string> ids;
    for (const auto& g : generators_) {
      g.validate();
      if (!ids.insert(g.id).second) {
        throw ValidationError("duplicate generator id '" + g.id + "'");
      }
    }
    std::stable_sort(generators_.begin(), generators_.end(),
                     [](const Generator& a, const Generator& b) {
                       if (a.marginal_cost != b.marginal_cost)
                         return a.marginal_cost < b.marginal_cost;
                       if (a.emission_rate != b.emission_rate)
                         return a.emission_rate < b.emission_rate;
                       return a.id < b.id;
                     });
  }

  std::size_t size() const { return generators_.size(); }
  bool empty() const { return generators_.empty(); }
  const Generator& operator[](std::size_t j) const { return generators_[j]; }
  const std::vector<Generator>& generators() const { return generators_; }

  double total_capacity_mw() const {
    double s = 0.0;
    for (const auto& g : generators_) s += g.capacity_mw;
    return s;
  }

  double max_emission_rate() const {
    double m = 0.0;
    for (const auto& g : generators_) m = std::max(m, g.emission_rate);
    return m;
  }

 private:
  std::vector<Generator> generators_;
};

inline constexpr const char* kGeneratorsCsvHeader =
    "id,fuel,capacity_mw,marginal_cost_usd_per_mwh,emission_ton_per_mwh,"
    "ramp_mw_per_h";

/// Loads a generators CSV. An empty ramp field gets the fuel default.
inline Fleet load_fleet(const std::filesystem::path& path) {
  CsvTable table(path, kGeneratorsCsvHeader);
  std::vector<Generator> gens;
  gens.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.row(i);
    const std::size_t line = table.line_of(i);
    Generator g;
    g.id = r[0];
    if (g.id.empty()) {
      throw ParseError("row " + std::to_string(line) + ": empty generator id");
    }
    g.fuel = parse_fuel(r[1], line);
    g.capacity_mw = parse_csv_double(r[2], "capacity_mw", line);
    g.marginal_cost = parse_csv_double(r[3], "marginal_cost_usd_per_mwh", line);
    g.emission_rate = parse_csv_double(r[4], "emission_ton_per_mwh", line);
    g.ramp_limit_mw = trim(r[5]).empty()
                          ? Generator::default_ramp(g.fuel, g.capacity_mw)
                          : parse_csv_double(r[5], "ramp_mw_per_h", line);
    gens.push_back(std::move(g));
  }
  return Fleet(std::move(gens));
}

inline void write_fleet_csv(const Fleet& fleet,
                            const std::filesystem::path& path) {
  std::string out(kGeneratorsCsvHeader);
  out += "\n";
  for (const auto& g : fleet.generators()) {
    out += g.id;
    out += ",";
    out += fuel_name(g.fuel);
    out += "," + fmt_double(g.capacity_mw) + "," + fmt_double(g.marginal_cost) +
           "," + fmt_double(g.emission_rate) + "," +
           fmt_double(g.ramp_limit_mw) + "\n";
  }
  atomic_write(path, out);
}

/// One step of the system marginal emission curve: every MWh demanded in
/// (previous cumulative capacity, cumulative_capacity_mw] is served at
/// marginal_emission_rate.
struct EmissionCurvePoint {
  double cumulative_capacity_mw = 0.0;
  double marginal_emission_rate = 0.0;
};

/// Builds the merit-order step curve of marginal emission rates.
inline std::vector<EmissionCurvePoint> marginal_emission_curve(
    const Fleet& fleet) {
  if (fleet.empty()) {
    throw ValidationError("marginal_emission_curve: empty fleet");
  }
  std::vector<EmissionCurvePoint> curve;
  curve.reserve(fleet.size());
  double cum = 0.0;
  for (const auto& g : fleet.generators()) {
    cum += g.capacity_mw;
    curve.push_back({cum, g.emission_rate});
  }
  return curve;
}

/// Marginal emission rate of the generator serving the last MWh at demand d.
/// Valid for d in (0, total capacity].
inline double marginal_rate_at(const std::vector<EmissionCurvePoint>& curve,
                               double demand_mw) {
  if (curve.empty()) throw ValidationError("marginal_rate_at: empty curve");
  if (demand_mw <= 0.0 ||
      demand_mw > curve.back().cumulative_capacity_mw + 1e-9) {
    throw ValidationError("marginal_rate_at: demand " + fmt_double(demand_mw) +
                          " outside (0, total capacity]");
  }
  for (const auto& p : curve) {
    if (p.cumulative_capacity_mw >= demand_mw) return p.marginal_emission_rate;
  }
  return curve.back().marginal_emission_rate;
}

}  // namespace gridshift
