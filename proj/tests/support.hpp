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

// Shared fixtures for the unit and acceptance tests.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <cstdint>
#include <vector>

#include "fssim/frame.hpp"
#include "fssim/grouping.hpp"
#include "fssim/qos.hpp"
#include "fssim/random.hpp"

namespace fssim::testing {

inline Eigen::MatrixXcd random_complex(Rng& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = {rng.normal(), rng.normal()};
  return m;
}

/// Group with fixed per-member payloads; MCS index is the payload rank.
inline SdmaGroup make_group(int subband, std::vector<int> members, std::vector<int> bytes_per_slot) {
  SdmaGroup g;
  g.subband = subband;
  g.members = std::move(members);
  for (int bps : bytes_per_slot) {
    LinkResult lr;
    lr.bytes_per_slot = bps;
    if (bps > 0) lr.mcs = bps;
    g.links.push_back(lr);
  }
  g.metric = group_metric(g);
  return g;
}

inline Packet make_packet(std::uint64_t id, int ms, int size, double utility) {
  return Packet{id, ms, size, utility, PacketState::queued};
}

/// Random synthetic scheduling instance: groups per subband over K MSs and
/// a candidate list of packets.
struct Instance {
  FrameGeometry geometry;
  GroupingResult groups;
  std::vector<Packet> packets;
  int antennas = 2;
};

struct InstanceShape {
  int subchannels = 30;
  int slot_columns = 17;
  int subbands = 3;
  int max_subbands = 6;
  int users = 8;
  int antennas = 2;
  int max_groups = 3;
  int packets = 40;
  int min_size = 6;
  int max_size = 600;
};

inline Instance random_instance(Rng& rng, const InstanceShape& s) {
  static constexpr int kPayloads[] = {0, 6, 9, 12, 18, 24, 27};
  Instance in;
  in.geometry = FrameGeometry{s.subchannels, s.slot_columns, s.subbands, s.max_subbands};
  in.antennas = s.antennas;
  in.groups.per_subband.resize(static_cast<std::size_t>(s.subbands));
  for (int j = 0; j < s.subbands; ++j) {
    // A grouper seeds every group with a distinct MS, so there are at most K.
    const int n = 1 + static_cast<int>(rng.bits() % static_cast<std::uint64_t>(std::min(s.max_groups, s.users)));
    for (int g = 0; g < n; ++g) {
      const int size = 1 + static_cast<int>(rng.bits() % static_cast<std::uint64_t>(std::min(s.antennas, s.users)));
      std::vector<int> members, bps;
      while (static_cast<int>(members.size()) < size) {
        const int u = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(s.users));
        if (std::find(members.begin(), members.end(), u) != members.end()) continue;
        members.push_back(u);
        bps.push_back(kPayloads[rng.bits() % 7]);
      }
      in.groups.per_subband[j].push_back(make_group(j, members, bps));
    }
  }
  for (int i = 0; i < s.packets; ++i) {
    const int ms = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(s.users));
    const int size = s.min_size + static_cast<int>(rng.bits() % static_cast<std::uint64_t>(s.max_size - s.min_size + 1));
    in.packets.push_back(make_packet(static_cast<std::uint64_t>(i), ms, size, rng.uniform(0.1, 10.0)));
  }
  return in;
}

/// Puts the packets in candidate-list order: utility per slot at the MS's
/// best payload, descending, stable.
inline void sort_candidates(Instance& in) {
  int users = 0;
  for (const auto& p : in.packets) users = std::max(users, p.ms + 1);
  const std::vector<int> best = in.groups.best_bytes_per_slot(users);
  const auto key = [&](const Packet& p) { return best[p.ms] > 0 ? utility_per_slot(p, best[p.ms]) : 0.0; };
  std::stable_sort(in.packets.begin(), in.packets.end(),
                   [&](const Packet& a, const Packet& b) { return key(a) > key(b); });
}

/// Map* as the experiment predicts it: from the mean best payload of the
/// MSs that have a group.
inline int predicted_map_star(const Instance& in, const MapModel& map = {}) {
  int users = 0;
  for (const auto& p : in.packets) users = std::max(users, p.ms + 1);
  for (const auto& groups : in.groups.per_subband)
    for (const auto& g : groups)
      for (int u : g.members) users = std::max(users, u + 1);
  int sum = 0, n = 0;
  for (int b : in.groups.best_bytes_per_slot(users))
    if (b > 0) {
      sum += b;
      ++n;
    }
  return predict_map_size(in.geometry, n > 0 ? sum / n : 0, map);
}

inline FrameOptions options_for(const Instance& in, int map_star_slots = 0) {
  FrameOptions o;
  o.antennas = in.antennas;
  o.map_star_slots = map_star_slots;
  return o;
}

/// Every packing rule a constructed frame must obey. Returns one message per
/// violation, empty when the frame is valid.
inline std::vector<std::string> frame_violations(const FrameResult& result, const GroupingResult& groups,
                                                 const std::vector<Packet>& packets) {
  std::vector<std::string> out;
  const OfdmaFrame& f = result.frame;
  const FrameGeometry& g = f.geometry;
  const int rows = g.subchannels_per_subband();

  std::vector<std::vector<int>> grid(static_cast<std::size_t>(g.subchannels),
                                     std::vector<int>(static_cast<std::size_t>(g.slot_columns), 0));
  const int map_cols = f.map_columns();
  if (map_cols + f.packed_columns() > g.slot_columns) out.push_back("MAP + bursts exceed DL_sl");
  for (int r = 0; r < g.subchannels; ++r)
    for (int c = 0; c < std::min(map_cols, g.slot_columns); ++c) ++grid[r][c];

  std::vector<int> seen(packets.size(), 0);
  int ies = 0;
  for (int j = 0; j < static_cast<int>(f.bursts.size()); ++j) {
    const auto& b = f.bursts[j];
    if (!b) continue;
    if (b->subband != j) out.push_back("burst stored under the wrong subband");
    if (b->rows != rows) out.push_back("burst height differs from SCSB");
    if (b->columns < 1 || b->columns > g.slot_columns) out.push_back("burst width out of range");
    if (b->group < 0 || b->group >= static_cast<int>(groups.per_subband[j].size())) {
      out.push_back("burst refers to a missing group");
      continue;
    }
    const SdmaGroup& grp = groups.per_subband[j][b->group];
    for (int r = j * rows; r < (j + 1) * rows; ++r)
      for (int c = g.slot_columns - b->columns; c < g.slot_columns; ++c)
        if (c >= 0) ++grid[r][c];

    int widest = 0;
    std::vector<int> members;
    for (const auto& m : b->members) {
      ++ies;
      if (m.packets.empty()) out.push_back("IE without packets");
      if (std::find(members.begin(), members.end(), m.ms) != members.end()) out.push_back("MS twice in a burst");
      members.push_back(m.ms);
      const auto it = std::find(grp.members.begin(), grp.members.end(), m.ms);
      if (it == grp.members.end()) {
        out.push_back("allocation for a non-member");
        continue;
      }
      const int bps = grp.bytes_per_slot(static_cast<std::size_t>(it - grp.members.begin()));
      if (bps <= 0 || bps != m.bytes_per_slot) out.push_back("allocation payload differs from the group");
      int slots = 0;
      double util = 0.0;
      for (std::size_t i : m.packets) {
        if (i >= packets.size()) {
          out.push_back("packet index out of range");
          continue;
        }
        ++seen[i];
        if (packets[i].ms != m.ms) out.push_back("packet carried for another MS");
        slots += slots_for(packets[i].size, std::max(bps, 1));
        util += packets[i].utility;
      }
      if (slots != m.slots_used) out.push_back("slot accounting mismatch");
      if (slots > b->size_slots()) out.push_back("member overflows its burst");
      if (std::abs(util - m.utility) > 1e-9 * std::max(1.0, util)) out.push_back("member utility mismatch");
      widest = std::max(widest, slots);
    }
    if (b->columns != (widest + rows - 1) / rows) out.push_back("burst not trimmed to its widest member");
  }
  if (ies != f.ie_count()) out.push_back("IE count differs from member allocations");

  const auto overlapping = [](const std::vector<int>& row) {
    return std::any_of(row.begin(), row.end(), [](int v) { return v > 1; });
  };
  if (std::any_of(grid.begin(), grid.end(), overlapping)) out.push_back("overlapping slots");
  if (std::any_of(seen.begin(), seen.end(), [](int n) { return n > 1; })) out.push_back("packet packed twice");

  const auto& acc = result.stats.accepted_utilities;
  for (std::size_t i = 1; i < acc.size(); ++i)
    if (!(acc[i] > acc[i - 1])) out.push_back("utility did not increase on acceptance");
  if (!acc.empty() && std::abs(acc.back() - f.utility()) > 1e-9 * std::max(1.0, f.utility()))
    out.push_back("final utility differs from the last acceptance");
  if (acc.empty() && f.ie_count() != 0) out.push_back("bursts without any acceptance");
  return out;
}

}  // namespace fssim::testing
