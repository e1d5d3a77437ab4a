// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gridshift/csv.hpp"
#include "gridshift/errors.hpp"
#include "gridshift/fleet.hpp"

namespace gridshift {

// Absolute tolerance for "at cap" / balance comparisons, MWh.
inline constexpr double kStackTol = 1e-6;
// Outputs below this are snapped to zero so on/off flags stay clean.
inline constexpr double kTinyOutput = 1e-9;

/// Total hourly demand D(t) = exogenous load plus EV charging.
struct DemandSeries {
  std::vector<double> values;
};

/// The merit-order stack for a single hour: per-generator effective caps
/// given the previous hour's output, with prefix sums for O(log J) lookups.
///
/// Effective cap of generator j is min(P_j, prev_j + r_j); the first hour of
/// a horizon is unconstrained by ramping (cap P_j). Ramp-down limits induce
/// a demand floor below which the stack cannot back off fast enough.
class StackProfile {
 public:
  StackProfile(const Fleet& fleet, std::span<const double> previous_output) {
    build(fleet, previous_output);
  }
  explicit StackProfile(const Fleet& fleet) { build(fleet, {}); }

  double min_demand() const { return min_demand_; }
  double max_demand() const { return cum_cap_.empty() ? 0.0 : cum_cap_.back(); }

  bool feasible(double demand) const {
    return demand >= min_demand_ - kStackTol &&
           demand <= max_demand() + kStackTol;
  }

  /// Emissions of serving the demand with the merit-order fill. Assumes
  /// feasible(demand).
  double emission_at(double demand) const {
    if (demand <= 0.0) return 0.0;
    const auto it =
        std::lower_bound(cum_cap_.begin(), cum_cap_.end(), demand);
    const std::size_t j = std::min<std::size_t>(
        static_cast<std::size_t>(it - cum_cap_.begin()), cum_cap_.size() - 1);
    const double below_cap = j == 0 ? 0.0 : cum_cap_[j - 1];
    const double below_emis = j == 0 ? 0.0 : cum_emis_[j - 1];
    return below_emis + rate_[j] * (demand - below_cap);
  }

  /// Merit-order fill: cheapest generators run at effective cap, one
  /// marginal generator takes the remainder, the rest stay off.
  void fill(double demand, std::vector<double>& out) const {
    const std::size_t n = cap_.size();
    out.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double before = j == 0 ? 0.0 : cum_cap_[j - 1];
      const double rem = demand - before;
      if (rem <= kTinyOutput) break;
      out[j] = std::min(cap_[j], rem);
    }
  }

  const std::vector<double>& caps() const { return cap_; }

 private:
  void build(const Fleet& fleet, std::span<const double> previous_output) {
    const std::size_t n = fleet.size();
    if (!previous_output.empty() && previous_output.size() != n) {
      throw ValidationError("previous output size does not match fleet");
    }
    cap_.resize(n);
    rate_.resize(n);
    cum_cap_.resize(n);
    cum_emis_.resize(n);
    double ccap = 0.0, cemis = 0.0;
    min_demand_ = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Generator& g = fleet[j];
      double cap = g.capacity_mw;
      if (!previous_output.empty()) {
        cap = std::min(g.capacity_mw, previous_output[j] + g.ramp_limit_mw);
        const double floor_j = previous_output[j] - g.ramp_limit_mw;
        if (floor_j > 0.0) min_demand_ = std::max(min_demand_, ccap + floor_j);
      }
      cap_[j] = cap;
      rate_[j] = g.emission_rate;
      ccap += cap;
      cemis += g.emission_rate * cap;
      cum_cap_[j] = ccap;
      cum_emis_[j] = cemis;
    }
  }

  std::vector<double> cap_;       // effective caps, merit order
  std::vector<double> rate_;      // emission rates
  std::vector<double> cum_cap_;   // prefix sums of cap_
  std::vector<double> cum_emis_;  // prefix sums of rate_ * cap_
  double min_demand_ = 0.0;       // ramp-down floor
};

/// One-hour dispatch result.
struct HourDispatch {
  double emission_ton = 0.0;
  std::vector<double> output_mwh;
};

namespace detail {

inline HourDispatch dispatch_hour(const StackProfile& profile, double demand,
                                  const std::string& where) {
  if (demand < 0.0) {
    throw ValidationError("negative demand " + where);
  }
  if (demand > profile.max_demand() + kStackTol) {
    throw InfeasibleError("demand " + fmt_double(demand) +
                          " MWh exceeds reachable capacity " +
                          fmt_double(profile.max_demand()) + " MWh " + where);
  }
  if (demand < profile.min_demand() - kStackTol) {
    throw InfeasibleError("demand " + fmt_double(demand) +
                          " MWh is below the ramp-down floor " +
                          fmt_double(profile.min_demand()) + " MWh " + where);
  }
  HourDispatch hd;
  hd.emission_ton = profile.emission_at(demand);
  profile.fill(demand, hd.output_mwh);
  return hd;
}

}  // namespace detail

/// One-hour merit-order kernel: fills the stack against the previous hour's
/// output and returns emissions plus the resulting output vector. Pure.
inline HourDispatch emissions_of_demand(const Fleet& fleet,
                                        std::span<const double> previous_output,
                                        double demand_mwh) {
  StackProfile profile(fleet, previous_output);
  return detail::dispatch_hour(profile, demand_mwh, "(one-hour kernel)");
}

/// First-hour variant: ramping does not constrain the first hour.
inline HourDispatch emissions_of_demand(const Fleet& fleet, double demand_mwh) {
  StackProfile profile(fleet);
  return detail::dispatch_hour(profile, demand_mwh, "(one-hour kernel)");
}

/// Hourly generation schedule with cost and emission accounting.
/// output[j][t] is generator j's energy in hour t (fleet merit order);
/// totals accumulate hour-major (t outer, j inner).
struct DispatchSchedule {
  std::size_t horizon = 0;
  std::vector<std::vector<double>> output;    // [generator][hour]
  std::vector<std::vector<std::uint8_t>> on;  // z flags, 1 iff output > 0
  double total_cost = 0.0;
  double total_emissions = 0.0;
};

/// Clears hourly demand against the merit-order stack under ramp
/// constraints. The stacking discipline makes the per-hour solution unique:
/// every generator before the marginal one runs at its effective cap.
inline DispatchSchedule dispatch(const Fleet& fleet,
                                 const DemandSeries& demand) {
  const std::size_t T = demand.values.size();
  if (T == 0) throw ValidationError("dispatch: empty demand series");
  DispatchSchedule sched;
  sched.horizon = T;
  sched.output.assign(fleet.size(), std::vector<double>(T, 0.0));
  sched.on.assign(fleet.size(), std::vector<std::uint8_t>(T, 0));

  std::vector<double> prev;
  for (std::size_t t = 0; t < T; ++t) {
    StackProfile profile =
        t == 0 ? StackProfile(fleet) : StackProfile(fleet, prev);
    HourDispatch hd = detail::dispatch_hour(profile, demand.values[t],
                                            "at hour " + std::to_string(t));
    for (std::size_t j = 0; j < fleet.size(); ++j) {
      const double q = hd.output_mwh[j];
      sched.output[j][t] = q;
      sched.on[j][t] = q > 0.0 ? 1 : 0;
      sched.total_cost += fleet[j].marginal_cost * q;
      sched.total_emissions += fleet[j].emission_rate * q;
    }
    prev = std::move(hd.output_mwh);
  }
  return sched;
}

/// Schedule export: one row per (hour, generator) plus a totals footer.
inline void write_schedule_csv(const Fleet& fleet,
                               const DispatchSchedule& sched,
                               const std::filesystem::path& path) {
  std::string out = "hour,generator_id,output_mwh,emission_ton,cost\n";
  double sum_q = 0.0, sum_e = 0.0, sum_c = 0.0;
  for (std::size_t t = 0; t < sched.horizon; ++t) {
    for (std::size_t j = 0; j < fleet.size(); ++j) {
      const double q = sched.output[j][t];
      const double e = fleet[j].emission_rate * q;
      const double c = fleet[j].marginal_cost * q;
      sum_q += q;
      sum_e += e;
      sum_c += c;
      out += std::to_string(t) + "," + fleet[j].id + "," + fmt_double(q) +
             "," + fmt_double(e) + "," + fmt_double(c) + "\n";
    }
  }
  out += "total,," + fmt_double(sum_q) + "," + fmt_double(sum_e) + "," +
         fmt_double(sum_c) + "\n";
  atomic_write(path, out);
}

}  // namespace gridshift
