// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#include "gridshift/load_series.hpp"

#include <filesystem>
#include <fstream>
#include <string>

#include "catch2/catch_amalgamated.hpp"
#include "gridshift/rng.hpp"

using namespace gridshift;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

std::string hourly_csv(int hours, double value, int skip_index = -1) {
  std::string out = "timestamp,net_load_mw\n";
  for (int i = 0; i < hours; ++i) {
    if (i == skip_index) continue;
    out += format_hour_timestamp(parse_hour_timestamp("2012-01-01T00:00") + i) +
           "," + fmt_double(value) + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("load_series reads a contiguous day") {
  const auto path = write_temp("load_day.csv", hourly_csv(24, 15000.0));
  const LoadSeries s = load_series(path);
  CHECK(s.size() == 24);
  CHECK(s[0] == Catch::Approx(15000.0));
  CHECK(s.hour_of_day_at(13) == 13);
}

TEST_CASE("load_series rejects a gap in the timestamps") {
  const auto path = write_temp("load_gap.csv", hourly_csv(24, 15000.0, 13));
  try {
    load_series(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("index 13") != std::string::npos);
  }
}

TEST_CASE("load_series rejects duplicates and negatives") {
  std::string dup = "timestamp,net_load_mw\n";
  dup += "2012-01-01T00:00,1\n2012-01-01T00:00,2\n";
  CHECK_THROWS_AS(load_series(write_temp("load_dup.csv", dup)), ParseError);

  std::string neg = "timestamp,net_load_mw\n2012-01-01T00:00,-5\n";
  CHECK_THROWS_AS(load_series(write_temp("load_neg.csv", neg)),
                  ValidationError);
}

TEST_CASE("slice covers sub-horizons and rejects uncovered ranges") {
  const auto path = write_temp("load_slice.csv", hourly_csv(48, 100.0));
  const LoadSeries s = load_series(path);
  const HourStamp noon = parse_hour_timestamp("2012-01-01T12:00");
  const LoadSeries sub = s.slice(noon, 24);
  CHECK(sub.size() == 24);
  CHECK(sub.hour_of_day_at(0) == 12);
  CHECK_THROWS_AS(s.slice(noon + 24, 24), ValidationError);
}

TEST_CASE("all-below series has fraction 1") {
  LoadSeries s(0, std::vector<double>(24, 15000.0));
  const auto rep = low_generation_stats(s, 20000.0, HourWindow{7, 19});
  CHECK(rep.fraction_below == Catch::Approx(1.0));
  CHECK(rep.hours_below == 24);
}

TEST_CASE("alternating series has fraction one half") {
  std::vector<double> values;
  for (int i = 0; i < 48; ++i) values.push_back(i % 2 == 0 ? 19000.0 : 21000.0);
  LoadSeries s(0, std::move(values));
  const auto rep = low_generation_stats(s, 20000.0, HourWindow{7, 19});
  CHECK(rep.fraction_below == Catch::Approx(0.5));
}

TEST_CASE("window membership handles wrap-around windows") {
  HourWindow night{22, 6};
  CHECK(night.contains(23));
  CHECK(night.contains(0));
  CHECK_FALSE(night.contains(12));
  HourWindow day{7, 19};
  CHECK(day.contains(7));
  CHECK_FALSE(day.contains(19));
}

TEST_CASE("threshold stats match a literal counting loop on random series") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 24 + static_cast<int>(rng.uniform01() * 400);
    std::vector<double> values;
    for (int i = 0; i < n; ++i) values.push_back(rng.uniform(0.0, 40000.0));
    const HourStamp start =
        static_cast<HourStamp>(rng.uniform01() * 5000.0);
    LoadSeries s(start, values);
    const double threshold = rng.uniform(5000.0, 35000.0);
    const HourWindow w{7, 19};
    const auto rep = low_generation_stats(s, threshold, w);

    std::size_t below = 0, below_in = 0, below_out = 0, n_in = 0;
    double sum_in = 0.0, sum_out = 0.0;
    for (int i = 0; i < n; ++i) {
      const int hod = static_cast<int>((start + i) % 24);
      const bool in = hod >= 7 && hod < 19;
      if (values[static_cast<std::size_t>(i)] < threshold) {
        ++below;
        if (in) {
          ++below_in;
        } else {
          ++below_out;
        }
      }
      if (in) {
        sum_in += values[static_cast<std::size_t>(i)];
        ++n_in;
      } else {
        sum_out += values[static_cast<std::size_t>(i)];
      }
    }
    CHECK(rep.hours_below == below);
    CHECK(rep.below_in_window == below_in);
    CHECK(rep.below_out_window == below_out);
    CHECK(rep.fraction_below ==
          Catch::Approx(double(below) / double(n)).epsilon(1e-12));
    CHECK(rep.mean_in_window_mw ==
          Catch::Approx(sum_in / double(n_in)).epsilon(1e-12));
    CHECK(rep.mean_out_window_mw ==
          Catch::Approx(sum_out / double(n - n_in)).epsilon(1e-12));
  }
}

TEST_CASE("empty or invalid stats inputs are rejected") {
  LoadSeries s(0, std::vector<double>(24, 1.0));
  CHECK_THROWS_AS(low_generation_stats(s, -1.0, HourWindow{7, 19}),
                  ValidationError);
  CHECK_THROWS_AS(low_generation_stats(s, 10.0, HourWindow{7, 7}),
                  ValidationError);
  CHECK_THROWS_AS(LoadSeries(0, {}), ValidationError);
}
