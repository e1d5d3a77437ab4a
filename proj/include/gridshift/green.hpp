// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gridshift/direct.hpp"
#include "gridshift/dispatch.hpp"
#include "gridshift/errors.hpp"
#include "gridshift/load_series.hpp"
#include "gridshift/maxflow.hpp"
#include "gridshift/sessions.hpp"

namespace gridshift {

enum class Backend { dp, exact };

inline const char* backend_name(Backend b) {
  return b == Backend::dp ? "dp" : "exact";
}

/// Per-vehicle presence indicator: zeta(i, t) is 1 iff vehicle i is plugged
/// in during hour t (arrival <= t < departure). Derived once from the
/// session list; immutable.
class AvailabilityMask {
 public:
  AvailabilityMask(const std::vector<ChargingSession>& sessions,
                   std::size_t horizon)
      : horizon_(horizon), bits_(sessions.size() * horizon, 0) {
    for (std::size_t i = 0; i < sessions.size(); ++i) {
      for (int t = sessions[i].arrival; t < sessions[i].departure; ++t) {
        bits_[i * horizon_ + static_cast<std::size_t>(t)] = 1;
      }
    }
  }

  bool zeta(std::size_t vehicle, std::size_t t) const {
    return bits_[vehicle * horizon_ + t] != 0;
  }
  std::size_t horizon() const { return horizon_; }

 private:
  std::size_t horizon_;
  std::vector<std::uint8_t> bits_;
};

/// Hourly cap on aggregate charging: sum of plugged-in vehicles' max rates.
inline std::vector<double> aggregate_rate_cap(
    const std::vector<ChargingSession>& sessions, std::size_t horizon) {
  std::vector<double> cap(horizon, 0.0);
  for (const auto& s : sessions) {
    for (int t = s.arrival; t < s.departure; ++t) {
      cap[static_cast<std::size_t>(t)] += s.max_rate_mw;
    }
  }
  return cap;
}

/// Delta-grid dimensions of a phase-1 instance: total energy in grid steps
/// and per-hour step caps.
struct GridPlan {
  double delta_mwh = 0.0;
  long long total_steps = 0;              // total EV energy, in delta units
  std::vector<long long> hour_caps;       // per-hour max steps
  std::vector<double> rate_cap_mwh;       // continuous per-hour caps
  double total_energy_mwh = 0.0;
};

inline GridPlan make_grid_plan(const std::vector<ChargingSession>& sessions,
                               std::size_t horizon, double delta_mwh) {
  if (delta_mwh <= 0.0) {
    throw ValidationError("discretization step must be positive");
  }
  GridPlan plan;
  plan.delta_mwh = delta_mwh;
  plan.rate_cap_mwh = aggregate_rate_cap(sessions, horizon);
  plan.hour_caps.resize(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    plan.hour_caps[t] = static_cast<long long>(
        std::floor(plan.rate_cap_mwh[t] / delta_mwh + 1e-9));
  }
  plan.total_energy_mwh = total_energy_mwh(sessions);
  plan.total_steps = std::llround(plan.total_energy_mwh / delta_mwh);
  return plan;
}

namespace detail {

/// Converts a step allocation back to MWh and reconciles the sub-step
/// rounding residual so the result carries exactly the total session energy.
/// The residual goes to the highest-allocation hour with headroom (earliest
/// such hour on ties), spilling over if one hour cannot absorb it.
inline std::vector<double> reconcile_allocation(
    const std::vector<long long>& steps, const GridPlan& plan) {
  const std::size_t T = steps.size();
  std::vector<double> g(T);
  double sum = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    g[t] = static_cast<double>(steps[t]) * plan.delta_mwh;
    sum += g[t];
  }
  double residual = plan.total_energy_mwh - sum;

  std::vector<std::size_t> order(T);
  for (std::size_t t = 0; t < T; ++t) order[t] = t;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });

  if (residual > 1e-12) {
    for (std::size_t t : order) {
      const double room = plan.rate_cap_mwh[t] - g[t];
      if (room <= 0.0) continue;
      const double add = std::min(room, residual);
      g[t] += add;
      residual -= add;
      if (residual <= 1e-12) break;
    }
    if (residual > 1e-9) {
      throw InfeasibleError(
          "charging capability cannot absorb the grid rounding residual of " +
          fmt_double(residual) + " MWh");
    }
  } else if (residual < -1e-12) {
    for (std::size_t t : order) {
      const double take = std::min(g[t], -residual);
      g[t] -= take;
      residual += take;
      if (residual >= -1e-12) break;
    }
  }
  return g;
}

inline std::vector<long long> suffix_step_caps(const GridPlan& plan) {
  const std::size_t T = plan.hour_caps.size();
  std::vector<long long> suffix(T + 1, 0);
  for (std::size_t t = T; t-- > 0;) {
    suffix[t] = suffix[t + 1] + plan.hour_caps[t];
  }
  return suffix;
}

}  // namespace detail

/// Phase-1 heuristic: forward dynamic program over hours with state =
/// cumulative EV energy committed so far (in grid steps). The stage cost is
/// the merit-order emission of serving load plus the hour's charging; the
/// stack state is threaded along each state's best prefix, which is the one
/// approximation versus the exact search (ramp coupling across hours is only
/// tracked path-wise). Ties between equal-emission trajectories resolve to
/// the lexicographically earliest allocation.
inline std::vector<double> optimize_aggregate_dp(
    const Fleet& fleet, const LoadSeries& load,
    const std::vector<ChargingSession>& sessions, double delta_mwh) {
  const std::size_t T = load.size();
  detail::check_sessions_in_horizon(sessions, T);
  if (fleet.empty()) {
    throw ValidationError("cannot optimize charging against an empty fleet");
  }
  const GridPlan plan = make_grid_plan(sessions, T, delta_mwh);
  const long long S = plan.total_steps;
  const auto suffix = detail::suffix_step_caps(plan);
  if (suffix[0] < S) {
    throw InfeasibleError(
        "stay windows are too tight: total charging capability " +
        fmt_double(static_cast<double>(suffix[0]) * delta_mwh) +
        " MWh cannot absorb " + fmt_double(plan.total_energy_mwh) + " MWh");
  }

  const double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n_states = static_cast<std::size_t>(S) + 1;
  // step_taken[t][s]: grid steps charged in hour t-1 on the best path to s.
  std::vector<std::vector<int>> step_taken(T + 1,
                                           std::vector<int>(n_states, -1));
  std::vector<double> cur_cost(n_states, kInf), nxt_cost(n_states, kInf);
  std::vector<std::vector<double>> cur_stack(n_states), nxt_stack(n_states);
  cur_cost[0] = 0.0;

  auto trajectory = [&](std::size_t stage, long long s) {
    std::vector<int> x(stage);
    long long at = s;
    for (std::size_t tt = stage; tt-- > 0;) {
      const int k = step_taken[tt + 1][static_cast<std::size_t>(at)];
      x[tt] = k;
      at -= k;
    }
    return x;
  };

  std::vector<double> fill_buf;
  long long prefix_cap = 0;
  for (std::size_t t = 0; t < T; ++t) {
    std::fill(nxt_cost.begin(), nxt_cost.end(), kInf);
    bool any = false;
    const long long s_hi = std::min<long long>(S, prefix_cap);
    for (long long s = 0; s <= s_hi; ++s) {
      const auto si = static_cast<std::size_t>(s);
      if (cur_cost[si] == kInf) continue;
      if (s + suffix[t] < S) continue;  // cannot finish from here
      const StackProfile profile = t == 0
                                       ? StackProfile(fleet)
                                       : StackProfile(fleet, cur_stack[si]);
      const long long k_max = std::min<long long>(plan.hour_caps[t], S - s);
      for (long long k = 0; k <= k_max; ++k) {
        const double d = load[t] + static_cast<double>(k) * delta_mwh;
        if (d > profile.max_demand() + kStackTol) break;
        if (d < profile.min_demand() - kStackTol) continue;
        const double cand = cur_cost[si] + profile.emission_at(d);
        const auto s2 = static_cast<std::size_t>(s + k);
        bool take = cand < nxt_cost[s2];
        if (!take && cand == nxt_cost[s2]) {
          auto cand_path = trajectory(t, s);
          cand_path.push_back(static_cast<int>(k));
          take = cand_path < trajectory(t + 1, s + k);
        }
        if (take) {
          nxt_cost[s2] = cand;
          step_taken[t + 1][s2] = static_cast<int>(k);
          profile.fill(d, fill_buf);
          nxt_stack[s2] = fill_buf;
          any = true;
        }
      }
    }
    if (!any) {
      throw InfeasibleError("dispatch infeasible at hour " + std::to_string(t) +
                            " for every charging choice");
    }
    cur_cost.swap(nxt_cost);
    cur_stack.swap(nxt_stack);
    prefix_cap += plan.hour_caps[t];
  }
  if (cur_cost[static_cast<std::size_t>(S)] == kInf) {
    throw InfeasibleError(
        "no feasible charging allocation reaches the total energy target");
  }

  const auto x = trajectory(T, S);
  std::vector<long long> steps(x.begin(), x.end());
  return detail::reconcile_allocation(steps, plan);
}

/// Phase-1 exact reference: depth-first enumeration with a lower-bound prune
/// over all grid allocations, each candidate evaluated by the full stacked
/// dispatch. Guarded to desk-scale instances.
inline std::vector<double> optimize_aggregate_exact(
    const Fleet& fleet, const LoadSeries& load,
    const std::vector<ChargingSession>& sessions, double delta_mwh) {
  const std::size_t T = load.size();
  detail::check_sessions_in_horizon(sessions, T);
  if (fleet.empty()) {
    throw ValidationError("cannot optimize charging against an empty fleet");
  }
  const GridPlan plan = make_grid_plan(sessions, T, delta_mwh);
  const long long S = plan.total_steps;

  if (fleet.size() > 4 || T > 8) {
    throw ValidationError(
        "exact backend accepts at most 4 generators and 8 hours; use the dp "
        "backend");
  }
  long double combos = 1.0L;
  for (std::size_t t = 0; t < T; ++t) {
    combos *= static_cast<long double>(
        std::min<long long>(plan.hour_caps[t], S) + 1);
    if (combos > 1e6L) break;
  }
  if (combos > 1e6L || (S + 1) * static_cast<long long>(T) > 1000000) {
    throw ValidationError(
        "exact backend grid exceeds the enumeration guard; use the dp "
        "backend");
  }

  const auto suffix = detail::suffix_step_caps(plan);
  if (suffix[0] < S) {
    throw InfeasibleError(
        "stay windows are too tight: total charging capability " +
        fmt_double(static_cast<double>(suffix[0]) * delta_mwh) +
        " MWh cannot absorb " + fmt_double(plan.total_energy_mwh) + " MWh");
  }

  std::vector<double> suffix_load(T + 1, 0.0);
  for (std::size_t t = T; t-- > 0;) suffix_load[t] = suffix_load[t + 1] + load[t];
  double theta_min = std::numeric_limits<double>::infinity();
  for (const auto& g : fleet.generators()) {
    theta_min = std::min(theta_min, g.emission_rate);
  }

  const double kInf = std::numeric_limits<double>::infinity();
  double best_cost = kInf;
  std::vector<long long> best_x, x(T, 0);
  std::vector<std::vector<double>> depth_stack(T);

  std::function<void(std::size_t, long long, double)> search =
      [&](std::size_t t, long long remaining, double partial) {
        if (partial + theta_min * (suffix_load[t] +
                                   static_cast<double>(remaining) * delta_mwh) >=
            best_cost) {
          return;
        }
        if (t == T) {
          if (remaining == 0 && partial < best_cost) {
            best_cost = partial;
            best_x = x;
          }
          return;
        }
        if (suffix[t] < remaining) return;
        const StackProfile profile =
            t == 0 ? StackProfile(fleet) : StackProfile(fleet, depth_stack[t - 1]);
        const long long k_max = std::min<long long>(plan.hour_caps[t], remaining);
        for (long long k = 0; k <= k_max; ++k) {
          const double d = load[t] + static_cast<double>(k) * delta_mwh;
          if (d > profile.max_demand() + kStackTol) break;
          if (d < profile.min_demand() - kStackTol) continue;
          x[t] = k;
          profile.fill(d, depth_stack[t]);
          search(t + 1, remaining - k, partial + profile.emission_at(d));
        }
      };
  search(0, S, 0.0);

  if (best_x.empty() && S > 0) {
    throw InfeasibleError(
        "no feasible charging allocation reaches the total energy target");
  }
  if (best_x.empty()) {
    if (best_cost == kInf) {
      throw InfeasibleError("base load dispatch infeasible on this horizon");
    }
    best_x.assign(T, 0);
  }
  return detail::reconcile_allocation(best_x, plan);
}

/// Phase-2 result: an individual charging plan plus the total absolute
/// deviation from the target aggregate.
struct Dispersal {
  ChargingProfile profile;
  double residual_mwh = 0.0;
};

/// Disperses the aggregate target to vehicles, minimizing the summed hourly
/// absolute deviation subject to per-vehicle energy balance, rate caps, and
/// stay windows. Solved as a feasible-flow problem on the vehicle-hour
/// bipartite graph: hour-side arcs are capped at the target, so the max flow
/// is exactly the energy deliverable without overshoot, and every undelivered
/// MWh costs one MWh of undershoot somewhere plus one of overshoot where it
/// ends up. Leftovers are poured deterministically into remaining rate
/// headroom (earliest hour first).
inline Dispersal disperse(const std::vector<double>& g_star,
                          const std::vector<ChargingSession>& sessions) {
  const std::size_t T = g_star.size();
  detail::check_sessions_in_horizon(sessions, T);

  std::vector<ChargingSession> sorted = sessions;
  std::sort(sorted.begin(), sorted.end(),
            [](const ChargingSession& a, const ChargingSession& b) {
              return a.vehicle_id < b.vehicle_id;
            });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].vehicle_id == sorted[i - 1].vehicle_id) {
      throw ValidationError("duplicate vehicle_id " + sorted[i].vehicle_id);
    }
  }

  double target_sum = 0.0;
  for (double v : g_star) {
    if (v < -1e-9) {
      throw ValidationError("aggregate target has a negative hour");
    }
    target_sum += v;
  }
  const double energy = total_energy_mwh(sorted);
  if (std::abs(energy - target_sum) > 1e-6) {
    throw ValidationError("aggregate target carries " + fmt_double(target_sum) +
                          " MWh but sessions request " + fmt_double(energy) +
                          " MWh");
  }

  const std::size_t n = sorted.size();
  const int source = 0;
  const int sink = static_cast<int>(1 + n + T);
  MaxFlow flow(static_cast<int>(n + T + 2));
  std::vector<int> supply_arc(n);
  std::vector<std::vector<int>> hour_arc(n);
  for (std::size_t i = 0; i < n; ++i) {
    supply_arc[i] =
        flow.add_edge(source, static_cast<int>(1 + i), sorted[i].energy_mwh);
    hour_arc[i].resize(static_cast<std::size_t>(sorted[i].window_hours()));
    for (int t = sorted[i].arrival; t < sorted[i].departure; ++t) {
      hour_arc[i][static_cast<std::size_t>(t - sorted[i].arrival)] =
          flow.add_edge(static_cast<int>(1 + i), static_cast<int>(1 + n + t),
                        sorted[i].max_rate_mw);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    flow.add_edge(static_cast<int>(1 + n + t), sink, std::max(g_star[t], 0.0));
  }
  flow.solve(source, sink);

  Dispersal out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = sorted[i];
    std::vector<double> g(T, 0.0);
    double delivered = 0.0;
    for (int t = s.arrival; t < s.departure; ++t) {
      g[static_cast<std::size_t>(t)] =
          flow.flow_on(hour_arc[i][static_cast<std::size_t>(t - s.arrival)]);
      delivered += g[static_cast<std::size_t>(t)];
    }
    double leftover = s.energy_mwh - delivered;
    for (int t = s.arrival; t < s.departure && leftover > 0.0; ++t) {
      const auto ti = static_cast<std::size_t>(t);
      const double room = s.max_rate_mw - g[ti];
      if (room <= 0.0) continue;
      const double add = std::min(room, leftover);
      g[ti] += add;
      leftover -= add;
    }
    out.profile.per_vehicle.emplace(s.vehicle_id, std::move(g));
  }
  out.profile.rebuild_aggregate(T);
  for (std::size_t t = 0; t < T; ++t) {
    out.residual_mwh += std::abs(out.profile.aggregate[t] - g_star[t]);
  }
  return out;
}

/// Full emission-oriented result.
struct GreenSolution {
  std::vector<double> aggregate;  // optimized G*(t), MWh
  DispatchSchedule schedule;      // dispatch of load + G*
  ChargingProfile profile;        // phase-2 per-vehicle plan
  double dispersal_residual_mwh = 0.0;
  Backend solver_backend = Backend::dp;
  double discretization_mwh = 0.0;
};

namespace detail {

/// Grid point nearest (in L1) to a continuous aggregate, with the exact step
/// total. Used to keep the uncontrolled profile in the phase-1 candidate
/// set: it is a feasible point of the aggregate constraints, so the
/// optimizer must never return anything worse.
inline std::vector<long long> snap_to_grid(const std::vector<double>& aggregate,
                                           const GridPlan& plan) {
  const std::size_t T = aggregate.size();
  std::vector<long long> x(T);
  long long sum = 0;
  for (std::size_t t = 0; t < T; ++t) {
    x[t] = std::clamp<long long>(std::llround(aggregate[t] / plan.delta_mwh),
                                 0, plan.hour_caps[t]);
    sum += x[t];
  }
  while (sum > plan.total_steps) {
    std::size_t pick = T;
    double score = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < T; ++t) {
      if (x[t] == 0) continue;
      const double over = static_cast<double>(x[t]) * plan.delta_mwh - aggregate[t];
      if (over > score) {
        score = over;
        pick = t;
      }
    }
    --x[pick];
    --sum;
  }
  while (sum < plan.total_steps) {
    std::size_t pick = T;
    double score = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < T; ++t) {
      if (x[t] >= plan.hour_caps[t]) continue;
      const double under = aggregate[t] - static_cast<double>(x[t]) * plan.delta_mwh;
      if (under > score) {
        score = under;
        pick = t;
      }
    }
    if (pick == T) break;  // no headroom anywhere; caller copes
    ++x[pick];
    ++sum;
  }
  if (sum != plan.total_steps) return {};
  return x;
}

}  // namespace detail

/// Composes phase 1 and phase 2: optimize the aggregate, dispatch load plus
/// the optimum, then disperse to vehicles. The uncontrolled profile snapped
/// to the grid stays in the candidate set, so the returned emissions never
/// exceed uncontrolled charging beyond discretization slack.
inline GreenSolution green_run(const Fleet& fleet, const LoadSeries& load,
                               const std::vector<ChargingSession>& sessions,
                               Backend backend, double delta_mwh) {
  const std::size_t T = load.size();
  std::vector<double> chosen =
      backend == Backend::dp
          ? optimize_aggregate_dp(fleet, load, sessions, delta_mwh)
          : optimize_aggregate_exact(fleet, load, sessions, delta_mwh);

  auto dispatch_with = [&](const std::vector<double>& g) {
    DemandSeries demand;
    demand.values.resize(T);
    for (std::size_t t = 0; t < T; ++t) demand.values[t] = load[t] + g[t];
    return dispatch(fleet, demand);
  };
  DispatchSchedule sched = dispatch_with(chosen);

  if (backend == Backend::dp && !sessions.empty()) {
    const GridPlan plan = make_grid_plan(sessions, T, delta_mwh);
    const ChargingProfile uncontrolled = direct_profile(sessions, T);
    const auto snapped = detail::snap_to_grid(uncontrolled.aggregate, plan);
    if (!snapped.empty()) {
      try {
        std::vector<double> alt = detail::reconcile_allocation(snapped, plan);
        DispatchSchedule alt_sched = dispatch_with(alt);
        if (alt_sched.total_emissions < sched.total_emissions) {
          chosen = std::move(alt);
          sched = std::move(alt_sched);
        }
      } catch (const InfeasibleError&) {
        // The snapped candidate may be undispatchable even when the
        // optimizer's trajectory is fine; it is only an extra candidate.
      }
    }
  }

  const auto caps = aggregate_rate_cap(sessions, T);
  double sum = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    if (chosen[t] > caps[t] + 1e-6) {
      throw ValidationError("internal: optimized aggregate exceeds charging "
                            "capability at hour " +
                            std::to_string(t));
    }
    sum += chosen[t];
  }
  if (std::abs(sum - total_energy_mwh(sessions)) > 1e-6) {
    throw ValidationError(
        "internal: optimized aggregate does not carry the session energy");
  }

  Dispersal disp = disperse(chosen, sessions);
  GreenSolution sol;
  sol.aggregate = std::move(chosen);
  sol.schedule = std::move(sched);
  sol.profile = std::move(disp.profile);
  sol.dispersal_residual_mwh = disp.residual_mwh;
  sol.solver_backend = backend;
  sol.discretization_mwh = delta_mwh;
  return sol;
}

}  // namespace gridshift
