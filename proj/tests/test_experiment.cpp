// SPDX-License-Identifier: Apache-2.0
//
// fssim - frequency-selective SDMA-OFDMA downlink scheduling simulator
// Copyright (C) 2026 The fssim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fssim/config.hpp"
#include "fssim/experiment.hpp"
#include "fssim/log.hpp"
#include "support.hpp"

using namespace fssim;

namespace {

ScenarioConfig tiny(int users = 4) {
  ScenarioConfig c;
  c.bandwidth_mhz = 5.0;
  c.antennas = 2;
  c.users = users;
  c.frames = 6;
  return c;
}

struct QuietWarnings {
  QuietWarnings() : was(set_warnings_enabled(false)) {}
  ~QuietWarnings() { set_warnings_enabled(was); }
  bool was;
};

}  // namespace

TEST_CASE("no users") {
  const ScenarioConfig c = tiny(0);
  const RunMetrics m = run_drop(c, 1);
  CHECK(m.goodput_bytes_per_s == 0.0);
  CHECK(m.transmitted_bytes == 0);
  CHECK(m.empty_frames == c.frames);
  CHECK(m.map_overhead == doctest::Approx(2.0 / (12 * 17)));
  CHECK(m.served_bytes.empty());
}

TEST_CASE("overwhelming noise leaves every frame empty") {
  ScenarioConfig c = tiny();
  c.noise_density_dbm_hz = 0.0;
  const RunMetrics m = run_drop(c, 1);
  CHECK(m.goodput_bytes_per_s == 0.0);
  CHECK(m.empty_frames == c.frames);
}

TEST_CASE("a drop is reproducible") {
  const QuietWarnings quiet;
  ScenarioConfig c = tiny(6);
  c.subbands = 3;
  const RunMetrics a = run_drop(c, 12);
  const RunMetrics b = run_drop(c, 12);
  CHECK(csv_row(a) == csv_row(b));
  CHECK(a.transmitted_bytes > 0);
  CHECK(a.duplicate_packets == 0);
  CHECK(run_drop(c, 13).transmitted_bytes != a.transmitted_bytes);
}

TEST_CASE("frames of a real drop obey the packing rules") {
  const QuietWarnings quiet;
  ScenarioConfig c = tiny(8);
  c.bandwidth_mhz = 10.0;
  c.antennas = 4;
  c.subbands = 3;
  int frames = 0;
  RunHooks hooks;
  hooks.on_frame = [&](const FrameEvent& e) {
    ++frames;
    const std::vector<Packet> packets(e.candidates.begin(), e.candidates.end());
    const auto bad = fssim::testing::frame_violations(*e.result, *e.grouping, packets);
    CHECK_MESSAGE(bad.empty(), (bad.empty() ? std::string() : bad.front()));
  };
  const RunMetrics m = run_drop(c, 3, hooks);
  CHECK(frames == c.frames);
  std::int64_t sum = 0;
  for (auto b : m.served_bytes) sum += b;
  CHECK(sum == m.transmitted_bytes);
  CHECK(m.goodput_bytes_per_s == doctest::Approx(m.transmitted_bytes / (c.frames * 0.005)));
  CHECK(m.map_overhead >= 0.0);
  CHECK(m.map_overhead <= 1.0);
}

TEST_CASE("sweeps") {
  const QuietWarnings quiet;
  ScenarioConfig c = tiny();
  SUBCASE("one cell, one row per seed") {
    const auto rows = run_sweep(c, {1, 2, 3}, 1);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].seed == 3);
  }
  SUBCASE("thread count does not change the rows") {
    c.sweep.subbands = {1, 2};
    c.sweep.antennas = {1, 2};
    const auto one = run_sweep(c, {4, 5}, 1);
    const auto three = run_sweep(c, {4, 5}, 3);
    REQUIRE(one.size() == 8);
    REQUIRE(three.size() == 8);
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(csv_row(one[i]) == csv_row(three[i]));
  }
  SUBCASE("failed cells keep their row") {
    c.sweep.subbands = {5};
    const auto rows = run_sweep(c, {1}, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status.rfind("error", 0) == 0);
  }
}

TEST_CASE("MAP overhead grows with the subband count") {
  const QuietWarnings quiet;
  ScenarioConfig c;
  c.bandwidth_mhz = 10.0;
  c.antennas = 4;
  c.users = 12;
  c.frames = 20;
  c.sweep.subbands = {1, 2, 3, 6};
  const auto cells = summarize(run_sweep(c, {1, 2}, 2));
  REQUIRE(cells.size() == 4);
  for (std::size_t i = 1; i < cells.size(); ++i) CHECK(cells[i].overhead_mean > cells[i - 1].overhead_mean);
}

TEST_CASE("CSV round trip and independent re-aggregation") {
  const QuietWarnings quiet;
  ScenarioConfig c = tiny();
  c.sweep.subbands = {1, 2};
  const auto rows = run_sweep(c, {1, 2, 3}, 1);
  std::stringstream csv;
  write_csv(csv, rows);
  const std::string text = csv.str();

  std::stringstream again(text);
  const auto back = read_csv(again);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(csv_row(back[i]) == csv_row(rows[i]));

  // Column sums straight from the text.
  std::map<int, std::tuple<double, double, int>> by_sb;
  std::stringstream lines(text);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    auto& [g, o, n] = by_sb[std::stoi(f[3])];
    g += std::stod(f[7]);
    o += std::stod(f[8]);
    ++n;
  }
  const auto cells = summarize(back);
  REQUIRE(cells.size() == 2);
  for (const auto& cell : cells) {
    const auto& [g, o, n] = by_sb.at(cell.subbands);
    CHECK(cell.n == n);
    CHECK(cell.goodput_mean == doctest::Approx(g / n).epsilon(1e-12));
    CHECK(cell.overhead_mean == doctest::Approx(o / n).epsilon(1e-12));
  }
  CHECK(cells[0].has_gain);
  CHECK(cells[0].fss_gain == 0.0);
  CHECK(cells[1].fss_gain == doctest::Approx(cells[1].goodput_mean / cells[0].goodput_mean - 1.0));

  std::stringstream bad("nope\n");
  CHECK_THROWS(read_csv(bad));
}

TEST_CASE("summary statistics") {
  CHECK(format_gain(0.168) == "16.8%");
  CHECK(format_gain(0.0) == "0.0%");
  CHECK(format_gain(-0.2) == "-20.0%");

  RunMetrics r;
  r.bandwidth_mhz = 10;
  r.antennas = 2;
  r.users = 12;
  r.subbands = 1;
  r.los = "los";
  r.goodput_bytes_per_s = 100.0;
  const auto single = summarize({r});
  REQUIRE(single.size() == 1);
  CHECK(std::isnan(single[0].goodput_ci95));
  CHECK(report(single).find("n/a") != std::string::npos);

  RunMetrics a = r, b = r;
  a.goodput_bytes_per_s = 10.0;
  b.goodput_bytes_per_s = 14.0;
  b.seed = 1;
  const auto two = summarize({a, b});
  // t(0.975, 1) = 12.7062, sd = 2 sqrt(2), n = 2.
  CHECK(two[0].goodput_ci95 == doctest::Approx(12.7062047 * 2.0).epsilon(1e-6));

  RunMetrics failed = r;
  failed.status = "error: boom";
  CHECK(summarize({failed}).empty());
}

TEST_CASE("scenario configuration") {
  SUBCASE("defaults per bandwidth") {
    ScenarioConfig c;
    for (auto [bw, fft, sc] : {std::tuple{5.0, 512, 12}, std::tuple{10.0, 1024, 30}, std::tuple{20.0, 2048, 60}}) {
      c.bandwidth_mhz = bw;
      CHECK(c.derived_fft_size() == fft);
      CHECK(c.derived_subchannels() == sc);
      for (int sb : {1, 2, 3, 6}) {
        c.subbands = sb;
        CHECK_NOTHROW(c.validate());
      }
    }
    c.bandwidth_mhz = 7.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("noise floor") {
    ScenarioConfig c;
    c.interference_margin_db = 0.0;
    const double expected_dbm = -167.0 + 10.0 * std::log10(1024 * 10937.5);
    CHECK(10.0 * std::log10(c.noise_power_w()) + 30.0 == doctest::Approx(expected_dbm));
    CHECK(c.total_power_w() == doctest::Approx(39.8107).epsilon(1e-5));
  }
  SUBCASE("JSON round trip") {
    ScenarioConfig c;
    c.antennas = 8;
    c.los = "nlos";
    c.sweep.subbands = {1, 6};
    const ScenarioConfig back = config_from_json(config_to_json(c));
    CHECK(back.antennas == 8);
    CHECK(back.los == "nlos");
    CHECK(back.sweep.subbands == std::vector<int>{1, 6});
    CHECK(config_to_json(back) == config_to_json(c));
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"antenas", 4}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"sweep", {{"seeds", {1}}}}}), std::invalid_argument);
  }
  SUBCASE("bad values") {
    ScenarioConfig c;
    c.subbands = 4;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ScenarioConfig{};
    c.los = "indoor";
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ScenarioConfig{};
    c.csi_decimation = 4096;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("seed list") {
    ScenarioConfig c;
    c.first_seed = 7;
    c.seeds = 3;
    CHECK(c.seed_list() == std::vector<std::uint64_t>{7, 8, 9});
  }
}
