// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>

#include "gridshift/errors.hpp"

namespace gridshift {

// Time is handled as whole hours since 1970-01-01T00:00 (no time zones;
// series are interpreted in the local clock they were recorded in).
using HourStamp = std::int64_t;

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Hour-of-day in [0, 24).
inline int hour_of_day(HourStamp h) {
  return static_cast<int>(h - 24 * floor_div(h, 24));
}

/// Days since 1970-01-01 of the civil day containing the hour.
inline std::int64_t day_of(HourStamp h) { return floor_div(h, 24); }

inline std::chrono::sys_days to_sys_days(std::int64_t days) {
  return std::chrono::sys_days{std::chrono::days{days}};
}

/// ISO weekday; Saturday/Sunday are the weekend.
inline bool is_weekend(std::int64_t days) {
  const std::chrono::weekday wd{to_sys_days(days)};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

/// Parses "YYYY-MM-DD" into days since epoch.
inline std::int64_t parse_date(const std::string& s) {
  int y = 0, m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3) {
    throw ParseError("bad date '" + s + "' (expected YYYY-MM-DD)");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw ParseError("invalid calendar date '" + s + "'");
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

/// Parses an ISO-8601 timestamp at hour resolution, e.g. "2012-01-01T13:00".
/// A space is accepted in place of 'T'; trailing ":00" seconds are allowed.
/// Minutes (and seconds, if present) must be zero.
inline HourStamp parse_hour_timestamp(const std::string& s) {
  int y = 0, mo = 0, d = 0, hh = 0, mi = 0, se = 0;
  char sep = 0;
  const int n = std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d", &y, &mo, &d,
                            &sep, &hh, &mi, &se);
  if (n < 6 || (sep != 'T' && sep != ' ')) {
    throw ParseError("bad timestamp '" + s + "' (expected YYYY-MM-DDTHH:MM)");
  }
  if (hh < 0 || hh > 23 || mi != 0 || (n == 7 && se != 0)) {
    throw ParseError("timestamp '" + s + "' is not at hour resolution");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw ParseError("invalid calendar date in '" + s + "'");
  const std::int64_t days = std::chrono::sys_days(ymd).time_since_epoch().count();
  return days * 24 + hh;
}

inline std::string format_date(std::int64_t days) {
  const std::chrono::year_month_day ymd{to_sys_days(days)};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

inline std::string format_hour_timestamp(HourStamp h) {
  return format_date(day_of(h)) + (hour_of_day(h) < 10 ? "T0" : "T") +
         std::to_string(hour_of_day(h)) + ":00";
}

}  // namespace gridshift
