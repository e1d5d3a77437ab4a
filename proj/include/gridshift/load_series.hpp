// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gridshift/calendar.hpp"
#include "gridshift/csv.hpp"
#include "gridshift/errors.hpp"

namespace gridshift {

/// Hourly exogenous net load. Values are MW per 1-hour step (numerically
/// MWh). Renewables are assumed already netted off upstream, so values are
/// non-negative by contract.
class LoadSeries {
 public:
  LoadSeries(HourStamp start, std::vector<double> values)
      : start_(start), values_(std::move(values)) {
    if (values_.empty()) throw ValidationError("load series must be non-empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] < 0.0) {
        throw ValidationError("load series: negative value at index " +
                              std::to_string(i));
      }
    }
  }

  HourStamp start() const { return start_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  /// Hour-of-day of entry i.
  int hour_of_day_at(std::size_t i) const {
    return hour_of_day(start_ + static_cast<HourStamp>(i));
  }

  /// Index of the given hour, or -1 if outside the series.
  std::int64_t index_of(HourStamp h) const {
    const std::int64_t i = h - start_;
    if (i < 0 || i >= static_cast<std::int64_t>(values_.size())) return -1;
    return i;
  }

  bool covers(HourStamp first, std::size_t n_hours) const {
    return index_of(first) >= 0 &&
           index_of(first + static_cast<HourStamp>(n_hours) - 1) >= 0;
  }

  /// Contiguous sub-series of n_hours starting at the given hour.
  LoadSeries slice(HourStamp first, std::size_t n_hours) const {
    if (!covers(first, n_hours)) {
      throw ValidationError("load series does not cover [" +
                            format_hour_timestamp(first) + ", +" +
                            std::to_string(n_hours) + "h)");
    }
    const std::size_t b = static_cast<std::size_t>(first - start_);
    return LoadSeries(first, std::vector<double>(values_.begin() + b,
                                                 values_.begin() + b + n_hours));
  }

 private:
  HourStamp start_;
  std::vector<double> values_;
};

inline constexpr const char* kLoadCsvHeader = "timestamp,net_load_mw";

/// Loads an hourly net-load CSV; timestamps must be strictly contiguous.
inline LoadSeries load_series(const std::filesystem::path& path) {
  CsvTable table(path, kLoadCsvHeader);
  if (table.size() == 0) {
    throw ValidationError(path.string() + ": load series has no rows");
  }
  HourStamp start = 0;
  std::vector<double> values;
  values.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.row(i);
    const std::size_t line = table.line_of(i);
    const HourStamp h = parse_hour_timestamp(r[0]);
    if (i == 0) {
      start = h;
    } else if (h != start + static_cast<HourStamp>(i)) {
      throw ParseError(path.string() + ": row " + std::to_string(line) +
                       ": timestamp " + r[0] +
                       " breaks hourly continuity at index " +
                       std::to_string(i));
    }
    const double v = parse_csv_double(r[1], "net_load_mw", line);
    if (v < 0.0) {
      throw ValidationError(path.string() + ": row " + std::to_string(line) +
                            ": negative net load");
    }
    values.push_back(v);
  }
  return LoadSeries(start, std::move(values));
}

inline void write_load_csv(const LoadSeries& series,
                           const std::filesystem::path& path) {
  std::string out(kLoadCsvHeader);
  out += "\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += format_hour_timestamp(series.start() + static_cast<HourStamp>(i)) +
           "," + fmt_double(series[i]) + "\n";
  }
  atomic_write(path, out);
}

/// Half-open hour-of-day window [begin, end); wraps past midnight when
/// begin > end (e.g. 22-06).
struct HourWindow {
  int begin = 7;
  int end = 19;

  bool contains(int hod) const {
    if (begin == end) return false;
    if (begin < end) return hod >= begin && hod < end;
    return hod >= begin || hod < end;
  }
};

/// Below-threshold statistics of a load series, split by a day window.
struct ThresholdReport {
  double threshold_mw = 0.0;
  std::size_t total_hours = 0;
  std::size_t hours_below = 0;
  double fraction_below = 0.0;
  std::size_t below_in_window = 0;
  std::size_t below_out_window = 0;
  double mean_in_window_mw = 0.0;   // mean hourly load over all window hours
  double mean_out_window_mw = 0.0;  // mean hourly load over all other hours
};

inline ThresholdReport low_generation_stats(const LoadSeries& series,
                                            double threshold_mw,
                                            HourWindow day_window) {
  if (threshold_mw <= 0.0) {
    throw ValidationError("low_generation_stats: threshold must be positive");
  }
  if (day_window.begin == day_window.end) {
    throw ValidationError("low_generation_stats: empty day window");
  }
  ThresholdReport rep;
  rep.threshold_mw = threshold_mw;
  rep.total_hours = series.size();
  double sum_in = 0.0, sum_out = 0.0;
  std::size_t n_in = 0, n_out = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const bool in_window = day_window.contains(series.hour_of_day_at(i));
    const bool below = series[i] < threshold_mw;
    if (below) {
      ++rep.hours_below;
      if (in_window) {
        ++rep.below_in_window;
      } else {
        ++rep.below_out_window;
      }
    }
    if (in_window) {
      sum_in += series[i];
      ++n_in;
    } else {
      sum_out += series[i];
      ++n_out;
    }
  }
  rep.fraction_below =
      static_cast<double>(rep.hours_below) / static_cast<double>(rep.total_hours);
  rep.mean_in_window_mw = n_in ? sum_in / static_cast<double>(n_in) : 0.0;
  rep.mean_out_window_mw = n_out ? sum_out / static_cast<double>(n_out) : 0.0;
  return rep;
}

}  // namespace gridshift
