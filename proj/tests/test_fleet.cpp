// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#include "gridshift/fleet.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

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

const char* kHeader =
    "id,fuel,capacity_mw,marginal_cost_usd_per_mwh,emission_ton_per_mwh,"
    "ramp_mw_per_h\n";

}  // namespace

TEST_CASE("load_fleet applies merit order and coal ramp default") {
  const auto path = write_temp("fleet_basic.csv",
                               std::string(kHeader) +
                                   "g1,coal,1000,20,1.0,\n"
                                   "g2,gas,500,35,0.4,\n");
  const Fleet fleet = load_fleet(path);
  REQUIRE(fleet.size() == 2);
  CHECK(fleet[0].id == "g1");
  CHECK(fleet[1].id == "g2");
  CHECK(fleet[0].ramp_limit_mw == Catch::Approx(600.0));
  CHECK(fleet[1].ramp_limit_mw == Catch::Approx(500.0));
}

TEST_CASE("load_fleet rejects duplicate ids") {
  const auto path = write_temp("fleet_dup.csv",
                               std::string(kHeader) +
                                   "g1,coal,1000,20,1.0,\n"
                                   "g1,gas,500,35,0.4,\n");
  CHECK_THROWS_AS(load_fleet(path), ValidationError);
}

TEST_CASE("load_fleet accepts a header-only file as an empty fleet") {
  const auto path = write_temp("fleet_empty.csv", kHeader);
  const Fleet fleet = load_fleet(path);
  CHECK(fleet.size() == 0);
}

TEST_CASE("load_fleet rejects bad rows with their line number") {
  const auto path = write_temp("fleet_bad.csv",
                               std::string(kHeader) + "g1,coal,xyz,20,1.0,\n");
  try {
    load_fleet(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }

  const auto neg = write_temp("fleet_neg.csv",
                              std::string(kHeader) + "g1,coal,-5,20,1.0,\n");
  CHECK_THROWS_AS(load_fleet(neg), ValidationError);
}

TEST_CASE("merit order breaks cost ties by emission rate then id") {
  Fleet fleet(std::vector<Generator>{
      {"b", Fuel::gas, 10, 20, 0.5, 10},
      {"a", Fuel::gas, 10, 20, 0.5, 10},
      {"c", Fuel::gas, 10, 20, 0.2, 10},
      {"d", Fuel::gas, 10, 10, 0.9, 10},
  });
  REQUIRE(fleet.size() == 4);
  CHECK(fleet[0].id == "d");  // cheapest first
  CHECK(fleet[1].id == "c");  // cost tie -> lower emissions
  CHECK(fleet[2].id == "a");  // full tie -> id
  CHECK(fleet[3].id == "b");
}

TEST_CASE("generator invariants are enforced") {
  CHECK_THROWS_AS(Fleet({{"g", Fuel::gas, 10, 5, 0.4, 0.0}}), ValidationError);
  CHECK_THROWS_AS(Fleet({{"g", Fuel::gas, 10, 5, 0.4, 11.0}}), ValidationError);
  CHECK_THROWS_AS(Fleet({{"g", Fuel::gas, 10, -1, 0.4, 10.0}}),
                  ValidationError);
  CHECK_THROWS_AS(Fleet({{"g", Fuel::gas, 10, 5, -0.1, 10.0}}),
                  ValidationError);
}

TEST_CASE("marginal emission curve of a two-block stack") {
  Fleet fleet(std::vector<Generator>{
      {"g1", Fuel::coal, 10, 10, 1.0, 10},
      {"g2", Fuel::gas, 10, 20, 0.4, 10},
  });
  const auto curve = marginal_emission_curve(fleet);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].cumulative_capacity_mw == Catch::Approx(10.0));
  CHECK(curve[0].marginal_emission_rate == Catch::Approx(1.0));
  CHECK(curve[1].cumulative_capacity_mw == Catch::Approx(20.0));
  CHECK(curve[1].marginal_emission_rate == Catch::Approx(0.4));
  CHECK(marginal_rate_at(curve, 15.0) == Catch::Approx(0.4));
  CHECK(marginal_rate_at(curve, 10.0) == Catch::Approx(1.0));
}

TEST_CASE("marginal emission curve of a single generator") {
  Fleet fleet(std::vector<Generator>{{"g", Fuel::gas, 5, 10, 0.9, 5}});
  const auto curve = marginal_emission_curve(fleet);
  REQUIRE(curve.size() == 1);
  CHECK(curve[0].cumulative_capacity_mw == Catch::Approx(5.0));
  CHECK(curve[0].marginal_emission_rate == Catch::Approx(0.9));
  CHECK_THROWS_AS(marginal_emission_curve(Fleet{}), ValidationError);
}

TEST_CASE("emission curve totals and query coverage on random fleets") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Generator> gens;
    const int n = 1 + static_cast<int>(rng.uniform01() * 6);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      Generator g;
      g.id = "g" + std::to_string(j);
      g.capacity_mw = rng.uniform(1.0, 40.0);
      g.marginal_cost = rng.uniform(0.0, 60.0);
      g.emission_rate = rng.uniform(0.0, 1.3);
      g.ramp_limit_mw = g.capacity_mw;
      total += g.capacity_mw;
      gens.push_back(std::move(g));
    }
    Fleet fleet(std::move(gens));
    const auto curve = marginal_emission_curve(fleet);
    // Final cumulative capacity is the exact capacity sum.
    double sum = 0.0;
    for (const auto& g : fleet.generators()) sum += g.capacity_mw;
    CHECK(curve.back().cumulative_capacity_mw == sum);
    for (std::size_t k = 1; k < curve.size(); ++k) {
      CHECK(curve[k].cumulative_capacity_mw > curve[k - 1].cumulative_capacity_mw);
    }
    // Any demand in (0, total] resolves to exactly one rate.
    for (int probe = 0; probe < 20; ++probe) {
      const double d = rng.uniform(1e-6, sum);
      CHECK_NOTHROW(marginal_rate_at(curve, d));
    }
    CHECK_THROWS_AS(marginal_rate_at(curve, sum + 1.0), ValidationError);
  }
}
