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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fssim/config.hpp"
#include "fssim/frame.hpp"
#include "fssim/grouping.hpp"

namespace fssim {

/// Outcome of one (scenario, seed) drop.
struct RunMetrics {
  // scenario cell
  double bandwidth_mhz = 0.0;
  int antennas = 0;
  int users = 0;
  int subbands = 0;
  std::string los;
  std::uint64_t seed = 0;
  int frames = 0;

  double goodput_bytes_per_s = 0.0;
  double map_overhead = 0.0;         // mean MAP slots / (SC x DL_sl)
  double map_column_overhead = 0.0;  // mean MAP columns / DL_sl
  double jain_fairness = 1.0;
  std::int64_t transmitted_bytes = 0;
  std::int64_t util_evaluations = 0;
  int empty_frames = 0;
  int duplicate_packets = 0;
  std::vector<std::int64_t> served_bytes;  // per MS
  std::string status = "ok";

  double wall_time_s = 0.0;  // not written to CSV
};

/// Observer called after every constructed frame.
struct FrameEvent {
  int frame_index = 0;
  const GroupingResult* grouping = nullptr;
  std::span<const Packet> candidates;
  const FrameResult* result = nullptr;
};

struct RunHooks {
  std::function<void(const FrameEvent&)> on_frame;
};

/// Runs the whole pipeline for cfg.frames frames on one drop:
/// traffic -> CSI -> partition -> grouping -> candidate list -> frame
/// construction -> commit and PF update.
RunMetrics run_drop(const ScenarioConfig& cfg, std::uint64_t seed, const RunHooks& hooks = {});

/// One scenario cell of a sweep.
std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& base);

/// Runs every (cell, seed) pair on \p jobs threads. Rows come back sorted by
/// (bandwidth, antennas, users, subbands, los, seed). A failing row carries
/// its error in status; the sweep continues.
std::vector<RunMetrics> run_sweep(const ScenarioConfig& base, const std::vector<std::uint64_t>& seeds, int jobs);

/// CSV header, one line.
std::string csv_header();
std::string csv_row(const RunMetrics& m);
void write_csv(std::ostream& out, const std::vector<RunMetrics>& rows);
std::vector<RunMetrics> read_csv(std::istream& in);

/// Per-cell aggregate of a metric.
struct CellSummary {
  double bandwidth_mhz = 0.0;
  int antennas = 0;
  int users = 0;
  int subbands = 0;
  std::string los;
  int n = 0;
  double goodput_mean = 0.0;
  double goodput_ci95 = 0.0;       // half width, NaN when n < 2
  double overhead_mean = 0.0;
  double overhead_ci95 = 0.0;
  double column_overhead_mean = 0.0;
  double fairness_mean = 0.0;
  bool has_gain = false;
  double fss_gain = 0.0;           // goodput(SB) / goodput(SB=1) - 1
};

/// Means, 95% confidence half widths (Student t) and the FSS gain against
/// the SB=1 cell with the same bandwidth, M, K and LOS mode. Rows whose
/// status is not "ok" are skipped.
std::vector<CellSummary> summarize(const std::vector<RunMetrics>& rows);

/// Plain-text tables of goodput, overhead and gain.
std::string report(const std::vector<CellSummary>& cells);
void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells);

/// "16.8%" style rendering of a gain.
std::string format_gain(double gain);

}  // namespace fssim
