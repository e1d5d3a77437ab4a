// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gridshift/csv.hpp"
#include "gridshift/dispatch.hpp"
#include "gridshift/errors.hpp"
#include "gridshift/load_series.hpp"
#include "gridshift/sessions.hpp"

namespace gridshift {

/// Per-vehicle hourly charging energy plus its aggregate. The aggregate is
/// always the per-vehicle sum taken in vehicle-id order, so floating-point
/// summation is reproducible.
struct ChargingProfile {
  std::map<std::string, std::vector<double>> per_vehicle;  // id -> g_i(t)
  std::vector<double> aggregate;                           // G(t)

  void rebuild_aggregate(std::size_t horizon) {
    aggregate.assign(horizon, 0.0);
    for (const auto& [id, g] : per_vehicle) {
      for (std::size_t t = 0; t < horizon; ++t) aggregate[t] += g[t];
    }
  }
};

namespace detail {

inline void check_sessions_in_horizon(
    const std::vector<ChargingSession>& sessions, std::size_t horizon) {
  for (const auto& s : sessions) {
    s.validate();
    if (s.departure > static_cast<int>(horizon)) {
      throw ValidationError("session " + s.vehicle_id +
                            " extends past the horizon (departure " +
                            std::to_string(s.departure) + " > " +
                            std::to_string(horizon) + ")");
    }
  }
}

}  // namespace detail

/// Uncontrolled charging: each vehicle charges at its maximum rate from
/// arrival until the request is met or it departs. Hour t inside the stay
/// delivers min(max(E - (t - a) * m, 0), m); the last partial hour carries
/// the fractional remainder.
inline ChargingProfile direct_profile(
    const std::vector<ChargingSession>& sessions, std::size_t horizon) {
  detail::check_sessions_in_horizon(sessions, horizon);
  ChargingProfile profile;
  for (const auto& s : sessions) {
    auto [it, inserted] =
        profile.per_vehicle.emplace(s.vehicle_id, std::vector<double>(horizon, 0.0));
    if (!inserted) {
      throw ValidationError("duplicate vehicle_id " + s.vehicle_id);
    }
    auto& g = it->second;
    for (int t = s.arrival; t < s.departure; ++t) {
      const double left = s.energy_mwh - (t - s.arrival) * s.max_rate_mw;
      g[t] = std::min(std::max(left, 0.0), s.max_rate_mw);
    }
  }
  profile.rebuild_aggregate(horizon);
  return profile;
}

/// Dispatches exogenous load plus the uncontrolled charging profile.
inline std::pair<DispatchSchedule, ChargingProfile> direct_run(
    const Fleet& fleet, const LoadSeries& load,
    const std::vector<ChargingSession>& sessions) {
  ChargingProfile profile = direct_profile(sessions, load.size());
  DemandSeries demand;
  demand.values.resize(load.size());
  for (std::size_t t = 0; t < load.size(); ++t) {
    demand.values[t] = load[t] + profile.aggregate[t];
  }
  return {dispatch(fleet, demand), std::move(profile)};
}

/// Per-vehicle profile export; zero entries are omitted.
inline void write_profile_csv(const ChargingProfile& profile,
                              const std::filesystem::path& path) {
  std::string out = "hour,vehicle_id,charge_mwh\n";
  const std::size_t horizon = profile.aggregate.size();
  for (std::size_t t = 0; t < horizon; ++t) {
    for (const auto& [id, g] : profile.per_vehicle) {
      if (g[t] != 0.0) {
        out += std::to_string(t) + "," + id + "," + fmt_double(g[t]) + "\n";
      }
    }
  }
  atomic_write(path, out);
}

inline void write_aggregate_csv(const std::vector<double>& aggregate,
                                const std::string& column,
                                const std::filesystem::path& path) {
  std::string out = "hour," + column + "\n";
  for (std::size_t t = 0; t < aggregate.size(); ++t) {
    out += std::to_string(t) + "," + fmt_double(aggregate[t]) + "\n";
  }
  atomic_write(path, out);
}

}  // namespace gridshift
