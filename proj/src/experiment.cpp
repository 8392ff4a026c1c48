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

#include "fssim/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <unordered_set>

#include "fssim/channel.hpp"
#include "fssim/frame.hpp"
#include "fssim/grouping.hpp"
#include "fssim/log.hpp"
#include "fssim/random.hpp"

namespace fssim {

namespace {

/// Table entry representing the mean best payload of the schedulable MSs.
const McsEntry& average_mcs(const McsTable& table, const std::vector<int>& best) {
  double sum = 0.0;
  int n = 0;
  for (int b : best)
    if (b > 0) {
      sum += b;
      ++n;
    }
  std::size_t pick = 0;
  if (n > 0) {
    const double mean = sum / n;
    for (std::size_t i = 0; i < table.size(); ++i)
      if (table[i].bytes_per_slot <= mean) pick = i;
  }
  return table[pick];
}

}  // namespace

RunMetrics run_drop(const ScenarioConfig& cfg, std::uint64_t seed, const RunHooks& hooks) {
  const auto started = std::chrono::steady_clock::now();
  cfg.validate();

  RunMetrics m;
  m.bandwidth_mhz = cfg.bandwidth_mhz;
  m.antennas = cfg.antennas;
  m.users = cfg.users;
  m.subbands = cfg.subbands;
  m.los = cfg.los;
  m.seed = seed;
  m.frames = cfg.frames;

  const int K = cfg.users;
  const FrameGeometry geometry = cfg.geometry();
  const auto subbands = partition_frame(geometry, cfg.num_subcarriers());
  const McsTable table = cfg.load_mcs_table();
  const MapModel map = cfg.map_model();
  const PfParams pf = cfg.pf();
  const LinkParams link{cfg.total_power_w(), &table};
  const int group_cap = cfg.max_groups_per_subband > 0 ? cfg.max_groups_per_subband : std::max(K, 1);

  std::vector<Flow> flows = make_flows(K, cfg.traffic(), pf);
  TrafficGenerator traffic(cfg.traffic(), stream_seed(seed, 0x74726166u));

  CsiReport csi;
  if (K > 0) csi = decimate_csi(generate_channel(cfg.channel_model(), seed), cfg.csi_decimation, cfg.noise_power_w());

  GroupingResult grouping;
  std::vector<int> grouped_for;
  bool have_grouping = false;

  std::unordered_set<std::uint64_t> sent;
  m.served_bytes.assign(static_cast<std::size_t>(K), 0);
  double overhead_sum = 0.0;
  double column_overhead_sum = 0.0;

  for (int t = 0; t < cfg.frames; ++t) {
    traffic.generate(flows, t);

    std::vector<int> active;
    for (const Flow& f : flows)
      if (!f.buffer.empty()) active.push_back(f.ms);
    // Channels are static within a drop, so the grouping only changes with
    // the set of backlogged MSs.
    if (!have_grouping || active != grouped_for) {
      if (active.empty())
        grouping.per_subband.assign(subbands.size(), {});
      else
        grouping = form_groups(csi, subbands, active, group_cap, link);
      grouped_for = active;
      have_grouping = true;
    }

    const std::vector<int> best = grouping.best_bytes_per_slot(K);
    const std::vector<Packet> candidates = build_candidate_list(flows, best, pf);

    FrameOptions options;
    options.antennas = cfg.antennas;
    options.map = map;
    options.map_star_slots = predict_map_size(geometry, average_mcs(table, best), map);
    options.allow_displacement = cfg.allow_displacement;
    const FrameResult built = frame_construction(grouping, candidates, geometry, options);
    if (hooks.on_frame) hooks.on_frame(FrameEvent{t, &grouping, candidates, &built});

    std::vector<std::uint64_t> ids;
    for (std::size_t i : built.frame.packed_packets()) {
      ids.push_back(candidates[i].id);
      if (!sent.insert(candidates[i].id).second) ++m.duplicate_packets;
    }
    const auto served = commit_transmissions(flows, ids);
    update_pf_averages(flows, served, pf);

    std::int64_t frame_bytes = 0;
    for (int u = 0; u < K; ++u) {
      m.served_bytes[u] += served[u];
      frame_bytes += served[u];
    }
    m.transmitted_bytes += frame_bytes;
    if (frame_bytes == 0) ++m.empty_frames;
    m.util_evaluations += static_cast<std::int64_t>(built.stats.util_evaluations);
    overhead_sum += static_cast<double>(built.frame.map_size_slots()) / geometry.size_slots();
    column_overhead_sum += static_cast<double>(built.frame.map_columns()) / geometry.slot_columns;
  }

  m.goodput_bytes_per_s = static_cast<double>(m.transmitted_bytes) / (cfg.frames * cfg.frame_duration_s);
  m.map_overhead = overhead_sum / cfg.frames;
  m.map_column_overhead = column_overhead_sum / cfg.frames;
  std::vector<double> served(m.served_bytes.begin(), m.served_bytes.end());
  m.jain_fairness = jain_index(served);
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return m;
}

std::vector<ScenarioConfig> expand_sweep(const ScenarioConfig& base) {
  const auto or_base = [](const auto& list, auto value) {
    using T = decltype(value);
    return list.empty() ? std::vector<T>{value} : std::vector<T>(list.begin(), list.end());
  };
  std::vector<ScenarioConfig> cells;
  for (double bw : or_base(base.sweep.bandwidth_mhz, base.bandwidth_mhz))
    for (int M : or_base(base.sweep.antennas, base.antennas))
      for (int K : or_base(base.sweep.users, base.users))
        for (int SB : or_base(base.sweep.subbands, base.subbands))
          for (const std::string& los : or_base(base.sweep.los, base.los)) {
            ScenarioConfig c = base;
            c.bandwidth_mhz = bw;
            c.antennas = M;
            c.users = K;
            c.subbands = SB;
            c.los = los;
            c.sweep = {};
            cells.push_back(std::move(c));
          }
  return cells;
}

namespace {

auto row_key(const RunMetrics& m) {
  return std::make_tuple(m.bandwidth_mhz, m.antennas, m.users, m.subbands, m.los, m.seed);
}

}  // namespace

std::vector<RunMetrics> run_sweep(const ScenarioConfig& base, const std::vector<std::uint64_t>& seeds, int jobs) {
  const auto cells = expand_sweep(base);
  const std::size_t total = cells.size() * seeds.size();
  std::vector<RunMetrics> rows(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const ScenarioConfig& cell = cells[task / seeds.size()];
      const std::uint64_t seed = seeds[task % seeds.size()];
      try {
        rows[task] = run_drop(cell, seed);
      } catch (const std::exception& e) {
        RunMetrics failed;
        failed.bandwidth_mhz = cell.bandwidth_mhz;
        failed.antennas = cell.antennas;
        failed.users = cell.users;
        failed.subbands = cell.subbands;
        failed.los = cell.los;
        failed.seed = seed;
        failed.frames = cell.frames;
        failed.status = std::string("error: ") + e.what();
        rows[task] = std::move(failed);
      }
    }
  };

  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RunMetrics& a, const RunMetrics& b) { return row_key(a) < row_key(b); });
  return rows;
}

std::string csv_header() {
  return "bandwidth_mhz,antennas,users,subbands,los,seed,frames,goodput_bytes_per_s,map_overhead,"
         "map_column_overhead,jain_fairness,transmitted_bytes,util_evaluations,empty_frames,"
         "duplicate_packets,served_bytes,status";
}

std::string csv_row(const RunMetrics& m) {
  std::string served;
  for (std::size_t i = 0; i < m.served_bytes.size(); ++i)
    served += (i ? ";" : "") + std::to_string(m.served_bytes[i]);
  std::string status = m.status;
  std::replace(status.begin(), status.end(), ',', ';');
  std::replace(status.begin(), status.end(), '\n', ' ');
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", m.bandwidth_mhz, m.antennas, m.users,
                     m.subbands, m.los, m.seed, m.frames, m.goodput_bytes_per_s, m.map_overhead,
                     m.map_column_overhead, m.jain_fairness, m.transmitted_bytes, m.util_evaluations,
                     m.empty_frames, m.duplicate_packets, served, status);
}

void write_csv(std::ostream& out, const std::vector<RunMetrics>& rows) {
  out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

std::vector<RunMetrics> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) throw std::runtime_error("unexpected CSV header");
  std::vector<RunMetrics> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 17) throw std::runtime_error("malformed CSV row: " + line);
    RunMetrics m;
    m.bandwidth_mhz = std::stod(f[0]);
    m.antennas = std::stoi(f[1]);
    m.users = std::stoi(f[2]);
    m.subbands = std::stoi(f[3]);
    m.los = f[4];
    m.seed = std::stoull(f[5]);
    m.frames = std::stoi(f[6]);
    m.goodput_bytes_per_s = std::stod(f[7]);
    m.map_overhead = std::stod(f[8]);
    m.map_column_overhead = std::stod(f[9]);
    m.jain_fairness = std::stod(f[10]);
    m.transmitted_bytes = std::stoll(f[11]);
    m.util_evaluations = std::stoll(f[12]);
    m.empty_frames = std::stoi(f[13]);
    m.duplicate_packets = std::stoi(f[14]);
    std::stringstream served(f[15]);
    while (std::getline(served, cell, ';'))
      if (!cell.empty()) m.served_bytes.push_back(std::stoll(cell));
    m.status = f[16];
    rows.push_back(std::move(m));
  }
  return rows;
}

}  // namespace fssim
