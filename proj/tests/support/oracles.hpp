// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.
//
// Test-only oracles: small brute-force solvers kept independent of the
// library code paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gridshift/dispatch.hpp"
#include "gridshift/fleet.hpp"
#include "gridshift/rng.hpp"
#include "gridshift/sessions.hpp"

namespace oracle {

/// A tiny dispatch instance for exhaustive search: at most 2 generators and
/// 3 hours. Generators are given in merit order.
struct TinyInstance {
  std::vector<double> capacity;   // P_j
  std::vector<double> cost;       // c_j
  std::vector<double> emission;   // theta_j
  std::vector<double> ramp;       // r_j
  std::vector<double> demand;     // D(t)
};

/// Exhaustively enumerates grid-quantized generation schedules satisfying
/// balance, capacity and ramp constraints (first hour unconstrained by
/// ramping), optionally also the merit-order stacking discipline, and
/// returns the minimum of the chosen objective. Balance holds exactly on the
/// grid: q of the last generator is implied by the demand.
inline std::optional<double> tiny_search(const TinyInstance& in, double step,
                                         bool enforce_stacking,
                                         bool minimize_cost) {
  const std::size_t J = in.capacity.size();
  const std::size_t T = in.demand.size();
  if (J == 0 || J > 2 || T == 0 || T > 3) return std::nullopt;

  // Per hour: feasible (q_0[, q_1]) pairs on the grid.
  std::vector<std::vector<std::vector<double>>> hour_options(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double d = in.demand[t];
    if (J == 1) {
      if (d <= in.capacity[0] + 1e-9) hour_options[t].push_back({d});
    } else {
      const auto n0 = static_cast<long long>(std::floor(in.capacity[0] / step + 1e-9));
      for (long long i = 0; i <= n0; ++i) {
        const double q0 = static_cast<double>(i) * step;
        const double q1 = d - q0;
        if (q1 < -1e-9 || q1 > in.capacity[1] + 1e-9) continue;
        hour_options[t].push_back({q0, std::max(q1, 0.0)});
      }
      // Demand may not be representable as (grid q0, remainder q1) when it
      // is off-grid; also allow q0 taking the remainder against grid q1.
      const auto n1 = static_cast<long long>(std::floor(in.capacity[1] / step + 1e-9));
      for (long long i = 0; i <= n1; ++i) {
        const double q1 = static_cast<double>(i) * step;
        const double q0 = d - q1;
        if (q0 < -1e-9 || q0 > in.capacity[0] + 1e-9) continue;
        hour_options[t].push_back({std::max(q0, 0.0), q1});
      }
    }
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<const std::vector<double>*> pick(T);
  std::function<void(std::size_t)> rec = [&](std::size_t t) {
    if (t == T) {
      double obj = 0.0;
      for (std::size_t tt = 0; tt < T; ++tt) {
        for (std::size_t j = 0; j < J; ++j) {
          obj += (minimize_cost ? in.cost[j] : in.emission[j]) * (*pick[tt])[j];
        }
      }
      best = std::min(best, obj);
      return;
    }
    for (const auto& opt : hour_options[t]) {
      bool ok = true;
      if (t > 0) {
        for (std::size_t j = 0; j < J && ok; ++j) {
          if (std::abs(opt[j] - (*pick[t - 1])[j]) > in.ramp[j] + 1e-9) ok = false;
        }
      }
      if (ok && enforce_stacking && J == 2 && opt[1] > 1e-9) {
        const double eff_cap =
            t == 0 ? in.capacity[0]
                   : std::min(in.capacity[0], (*pick[t - 1])[0] + in.ramp[0]);
        if (std::abs(opt[0] - eff_cap) > 1e-6) ok = false;
      }
      if (!ok) continue;
      pick[t] = &opt;
      rec(t + 1);
    }
  };
  rec(0);
  if (best == std::numeric_limits<double>::infinity()) return std::nullopt;
  return best;
}

/// Brute-force dispersal optimum: enumerates integer per-vehicle allocations
/// and minimizes the summed absolute deviation from the target aggregate.
/// Only for tiny instances (<=3 vehicles, <=4 hours, small integer data).
inline double dispersal_optimum(
    const std::vector<gridshift::ChargingSession>& sessions,
    const std::vector<double>& target) {
  const std::size_t T = target.size();
  std::vector<std::vector<std::vector<int>>> per_vehicle;
  for (const auto& s : sessions) {
    std::vector<std::vector<int>> plans;
    std::vector<int> g(T, 0);
    const int e = static_cast<int>(std::llround(s.energy_mwh));
    const int m = static_cast<int>(std::llround(s.max_rate_mw));
    std::function<void(int, int)> rec = [&](int t, int left) {
      if (t == s.departure) {
        if (left == 0) plans.push_back(g);
        return;
      }
      for (int v = 0; v <= std::min(m, left); ++v) {
        g[static_cast<std::size_t>(t)] = v;
        rec(t + 1, left - v);
      }
      g[static_cast<std::size_t>(t)] = 0;
    };
    rec(s.arrival, e);
    per_vehicle.push_back(std::move(plans));
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> agg(T, 0.0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == per_vehicle.size()) {
      double dev = 0.0;
      for (std::size_t t = 0; t < T; ++t) dev += std::abs(agg[t] - target[t]);
      best = std::min(best, dev);
      return;
    }
    for (const auto& plan : per_vehicle[i]) {
      for (std::size_t t = 0; t < T; ++t) agg[t] += plan[t];
      rec(i + 1);
      for (std::size_t t = 0; t < T; ++t) agg[t] -= plan[t];
    }
  };
  rec(0);
  return best;
}

/// Independent re-check of every schedule invariant. Returns human-readable
/// violations; empty means the schedule is valid for (fleet, demand).
inline std::vector<std::string> validate_schedule(
    const gridshift::Fleet& fleet, const std::vector<double>& demand,
    const gridshift::DispatchSchedule& sched) {
  using gridshift::fmt_double;
  std::vector<std::string> bad;
  const std::size_t J = fleet.size();
  const std::size_t T = demand.size();
  if (sched.horizon != T || sched.output.size() != J) {
    bad.push_back("shape mismatch");
    return bad;
  }
  double total_cost = 0.0, total_emis = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    double sum = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      const double q = sched.output[j][t];
      sum += q;
      total_cost += fleet[j].marginal_cost * q;
      total_emis += fleet[j].emission_rate * q;
      if (q < 0.0) bad.push_back("negative output j=" + std::to_string(j));
      if (q > fleet[j].capacity_mw + 1e-6) {
        bad.push_back("capacity violated j=" + std::to_string(j) +
                      " t=" + std::to_string(t));
      }
      if ((sched.on[j][t] != 0) != (q > 0.0)) {
        bad.push_back("on flag mismatch j=" + std::to_string(j) +
                      " t=" + std::to_string(t));
      }
      if (t > 0 && std::abs(q - sched.output[j][t - 1]) >
                       fleet[j].ramp_limit_mw + 1e-6) {
        bad.push_back("ramp violated j=" + std::to_string(j) +
                      " t=" + std::to_string(t));
      }
      if (j + 1 < J && sched.output[j + 1][t] > 0.0) {
        const double eff_cap =
            t == 0 ? fleet[j].capacity_mw
                   : std::min(fleet[j].capacity_mw,
                              sched.output[j][t - 1] + fleet[j].ramp_limit_mw);
        if (std::abs(q - eff_cap) > 1e-6) {
          bad.push_back("stacking violated j=" + std::to_string(j) +
                        " t=" + std::to_string(t) + " (q=" + fmt_double(q) +
                        " eff_cap=" + fmt_double(eff_cap) + ")");
        }
        if (sched.on[j + 1][t] > sched.on[j][t]) {
          bad.push_back("on-flag ordering violated t=" + std::to_string(t));
        }
      }
    }
    if (std::abs(sum - demand[t]) > 1e-6) {
      bad.push_back("balance violated t=" + std::to_string(t) + " (" +
                    fmt_double(sum) + " vs " + fmt_double(demand[t]) + ")");
    }
  }
  if (std::abs(total_cost - sched.total_cost) > 1e-9 * (1.0 + std::abs(total_cost))) {
    bad.push_back("total cost not recomputable");
  }
  if (std::abs(total_emis - sched.total_emissions) >
      1e-9 * (1.0 + std::abs(total_emis))) {
    bad.push_back("total emissions not recomputable");
  }
  return bad;
}

// --------------------------------------------------------------------------
// Random instance generators (seeded, deterministic).

struct RandomFleetOptions {
  std::size_t max_generators = 3;
  bool ramp_limited = false;  // if true, some generators get 60% ramps
  double backstop_capacity = 0.0;  // >0 adds a big always-rampable generator
};

inline gridshift::Fleet random_fleet(gridshift::Rng& rng,
                                     const RandomFleetOptions& opt) {
  const auto n = static_cast<std::size_t>(
      1 + std::floor(rng.uniform01() * static_cast<double>(opt.max_generators)));
  std::vector<gridshift::Generator> gens;
  for (std::size_t j = 0; j < n; ++j) {
    gridshift::Generator g;
    g.id = "g" + std::to_string(j + 1);
    g.capacity_mw = rng.uniform(5.0, 30.0);
    g.marginal_cost = rng.uniform(1.0, 50.0);
    g.emission_rate = rng.uniform(0.05, 1.2);
    const bool coal = opt.ramp_limited && rng.uniform01() < 0.5;
    g.fuel = coal ? gridshift::Fuel::coal : gridshift::Fuel::gas;
    g.ramp_limit_mw =
        gridshift::Generator::default_ramp(g.fuel, g.capacity_mw);
    gens.push_back(std::move(g));
  }
  if (opt.backstop_capacity > 0.0) {
    gridshift::Generator g;
    g.id = "peak";
    g.capacity_mw = opt.backstop_capacity;
    g.marginal_cost = 999.0;
    g.emission_rate = 0.9;
    g.fuel = gridshift::Fuel::gas;
    g.ramp_limit_mw = g.capacity_mw;
    gens.push_back(std::move(g));
  }
  return gridshift::Fleet(std::move(gens));
}

inline std::vector<gridshift::ChargingSession> random_sessions(
    gridshift::Rng& rng, std::size_t max_vehicles, int horizon,
    double max_rate) {
  const auto n = static_cast<std::size_t>(
      std::floor(rng.uniform01() * static_cast<double>(max_vehicles + 1)));
  std::vector<gridshift::ChargingSession> sessions;
  for (std::size_t i = 0; i < n; ++i) {
    gridshift::ChargingSession s;
    s.vehicle_id = "v" + std::to_string(i + 1);
    s.arrival = static_cast<int>(rng.uniform01() * (horizon - 1));
    const int max_d = horizon;
    s.departure =
        s.arrival + 1 +
        static_cast<int>(rng.uniform01() * static_cast<double>(max_d - s.arrival - 1));
    if (s.departure > max_d) s.departure = max_d;
    s.max_rate_mw = rng.uniform(0.2, max_rate);
    s.energy_mwh = rng.uniform(0.05, 1.0) * s.window_hours() * s.max_rate_mw;
    sessions.push_back(std::move(s));
  }
  return sessions;
}

}  // namespace oracle
