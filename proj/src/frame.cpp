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

#include "fssim/frame.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "fssim/log.hpp"

namespace fssim {

namespace {

constexpr long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

}  // namespace

int MapModel::slots(int ie_count) const {
  return static_cast<int>(ceil_div(bits(ie_count) * repetition, 8LL * bytes_per_slot));
}

int MapModel::columns(int ie_count, int subchannels) const {
  return static_cast<int>(ceil_div(slots(ie_count), subchannels));
}

InitialLimit initial_vertical_limit(const FrameGeometry& geometry, int antennas, int map_star_slots) {
  if (antennas <= 0 || map_star_slots < 0)
    throw std::invalid_argument("initial_vertical_limit: bad antenna count or MAP size");
  geometry.validate();
  const long long SC = geometry.subchannels;
  const long long MSB = geometry.max_subbands;
  // ((DL_sl-1) SC / MSB - Map* M) / SC * SB  ==  ((DL_sl-1) SC - Map* M MSB) SB / (SC MSB)
  const long long num =
      ((geometry.slot_columns - 1) * SC - static_cast<long long>(map_star_slots) * antennas * MSB) *
      geometry.subbands;
  const long long den = SC * MSB;
  if (num <= 0) {
    log_warning("initial vertical limit <= 0 columns, clamped to 1");
    return {1, true};
  }
  return {static_cast<int>(ceil_div(num, den)), false};
}

int predict_map_size(const FrameGeometry& geometry, int avg_bytes_per_slot, const MapModel& map) {
  const int packets = geometry.subchannels * std::max(avg_bytes_per_slot, 0) / 40;
  return map.slots(packets);
}

double Burst::utility() const {
  double u = 0.0;
  for (const auto& m : members) u += m.utility;
  return u;
}

int OfdmaFrame::ie_count() const {
  int n = 0;
  for (const auto& b : bursts)
    if (b) n += b->ie_count();
  return n;
}

int OfdmaFrame::packed_columns() const {
  int c = 0;
  for (const auto& b : bursts)
    if (b) c = std::max(c, b->columns);
  return c;
}

double OfdmaFrame::utility() const {
  double u = 0.0;
  for (const auto& b : bursts)
    if (b) u += b->utility();
  return u;
}

long long OfdmaFrame::payload_bytes(std::span<const Packet> packets) const {
  long long bytes = 0;
  for (std::size_t i : packed_packets()) bytes += packets[i].size;
  return bytes;
}

std::vector<std::size_t> OfdmaFrame::packed_packets() const {
  std::vector<std::size_t> out;
  for (const auto& b : bursts)
    if (b)
      for (const auto& m : b->members) out.insert(out.end(), m.packets.begin(), m.packets.end());
  return out;
}

void FreezeRegistry::assign(int subband, const Burst* burst) {
  for (int& o : owner_)
    if (o == subband) o = -1;
  if (burst == nullptr) return;
  for (const auto& m : burst->members)
    for (std::size_t i : m.packets) owner_.at(i) = subband;
}

std::vector<std::vector<std::size_t>> index_by_ms(std::span<const Packet> packets) {
  std::vector<std::vector<std::size_t>> by_ms;
  for (std::size_t i = 0; i < packets.size(); ++i) {
    const auto ms = static_cast<std::size_t>(packets[i].ms);
    if (ms >= by_ms.size()) by_ms.resize(ms + 1);
    by_ms[ms].push_back(i);
  }
  return by_ms;
}

Burst pack_group_area(const SdmaGroup& group, int group_index, int columns, int rows,
                      std::span<const Packet> packets,
                      const std::vector<std::vector<std::size_t>>& by_ms,
                      const FreezeRegistry& registry) {
  Burst burst;
  burst.subband = group.subband;
  burst.group = group_index;
  burst.rows = rows;
  const int capacity = columns * rows;
  if (capacity <= 0) return burst;

  int widest = 0;
  for (std::size_t k = 0; k < group.members.size(); ++k) {
    const int ms = group.members[k];
    const int bps = group.bytes_per_slot(k);
    if (bps <= 0 || ms >= static_cast<int>(by_ms.size())) continue;

    MemberAllocation alloc;
    alloc.ms = ms;
    alloc.mcs = group.links[k].mcs;
    alloc.bytes_per_slot = bps;
    for (std::size_t i : by_ms[static_cast<std::size_t>(ms)]) {
      if (!registry.available_to(i, group.subband)) continue;
      const int need = slots_for(packets[i].size, bps);
      if (alloc.slots_used + need > capacity) continue;
      alloc.slots_used += need;
      alloc.utility += packets[i].utility;
      alloc.packets.push_back(i);
    }
    if (alloc.packets.empty()) continue;
    widest = std::max(widest, alloc.slots_used);
    burst.members.push_back(std::move(alloc));
  }
  burst.columns = static_cast<int>(ceil_div(widest, rows));
  return burst;
}

int min_slot_size(const GroupingResult& groups, std::span<const Packet> packets) {
  int num_users = 0;
  for (const auto& p : packets) num_users = std::max(num_users, p.ms + 1);
  const std::vector<int> best = groups.best_bytes_per_slot(num_users);

  // Smallest burst each queue can fill, then the largest of those.
  std::vector<int> smallest(static_cast<std::size_t>(num_users), 0);
  for (const auto& p : packets) {
    if (best[p.ms] <= 0) continue;
    const int need = slots_for(p.size, best[p.ms]);
    int& s = smallest[p.ms];
    s = s == 0 ? need : std::min(s, need);
  }
  return smallest.empty() ? 0 : *std::max_element(smallest.begin(), smallest.end());
}

int initial_step_size(const FrameGeometry& geometry, const GroupingResult& groups,
                      std::span<const Packet> packets, const MapModel& map) {
  const int rows = geometry.subchannels_per_subband();
  const int min_slots = min_slot_size(groups, packets);
  int step = min_slots > 0 ? static_cast<int>(ceil_div(min_slots, rows)) * rows : rows;
  // A queue head larger than the whole frame must not stall the extension
  // phase; cap the step at the free columns of the empty frame.
  const int free_cols = geometry.slot_columns - map.columns(0, geometry.subchannels);
  return std::min(step, std::max(free_cols, 1) * rows);
}

namespace {

void check_inputs(const GroupingResult& groups, const FrameGeometry& geometry) {
  geometry.validate();
  if (groups.num_subbands() != geometry.subbands)
    throw std::invalid_argument("grouping result does not match the subband count");
}

struct Candidate {
  double utility = 0.0;
  int subband = 0;
  Burst burst;
};

}  // namespace

FrameResult frame_construction(const GroupingResult& groups, std::span<const Packet> packets,
                               const FrameGeometry& geometry, const FrameOptions& options) {
  check_inputs(groups, geometry);
  const int SB = geometry.subbands;
  const int rows = geometry.subchannels_per_subband();
  const int DL = geometry.slot_columns;
  const int SC = geometry.subchannels;

  FrameResult result{OfdmaFrame(geometry, options.map), {}};
  OfdmaFrame& frame = result.frame;
  FrameStats& stats = result.stats;

  const auto by_ms = index_by_ms(packets);
  FreezeRegistry registry(packets.size());

  const InitialLimit init = initial_vertical_limit(geometry, options.antennas, options.map_star_slots);
  int step = initial_step_size(geometry, groups, packets, options.map);
  int v_limit = std::max(init.columns * rows, step);
  std::vector<int> used(static_cast<std::size_t>(SB), 0);
  stats.initial_limit_columns = init.columns;
  stats.initial_limit_clamped = init.clamped;
  stats.initial_step_slots = step;

  while (v_limit * SB + frame.map_size_slots() < geometry.size_slots()) {
    ++stats.rounds;
    std::vector<int> open(static_cast<std::size_t>(SB));
    for (int j = 0; j < SB; ++j) open[j] = j;

    while (!open.empty()) {
      std::optional<Candidate> best;
      for (int j : open) {
        const auto& current = frame.bursts[j];
        const auto& subband_groups = groups.per_subband[j];
        for (int gi = 0; gi < static_cast<int>(subband_groups.size()); ++gi) {
          if (current && !options.allow_displacement && gi != current->group) continue;
          // The group holding subband j keeps its space, a replacing group
          // takes it over; either way the area reaches the limit.
          const int area = v_limit - used[j] + (current ? used[j] : 0);
          Burst burst = pack_group_area(subband_groups[gi], gi, area / rows, rows, packets, by_ms, registry);
          ++stats.util_evaluations;
          if (burst.empty()) continue;

          int ies = burst.ie_count();
          int widest = burst.columns;
          double util = 0.0;
          for (int k = 0; k < SB; ++k) {
            if (k == j) {
              util += burst.utility();
            } else if (frame.bursts[k]) {
              util += frame.bursts[k]->utility();
              ies += frame.bursts[k]->ie_count();
              widest = std::max(widest, frame.bursts[k]->columns);
            }
          }
          if (options.map.columns(ies, SC) + widest > DL) continue;
          if (!best || util > best->utility) best = Candidate{util, j, std::move(burst)};
        }
      }

      if (!best || !(best->utility > frame.utility())) break;

      const int j = best->subband;
      registry.assign(j, &best->burst);
      used[j] = best->burst.size_slots();
      frame.bursts[j] = std::move(best->burst);
      stats.accepted_utilities.push_back(frame.utility());
      open.erase(std::find(open.begin(), open.end(), j));
    }

    step = std::min(std::max(frame.free_columns(), 1) * rows, step);
    v_limit += step;
  }
  return result;
}

std::string render_frame(const OfdmaFrame& frame, std::span<const Packet> packets) {
  const auto& g = frame.geometry;
  std::vector<std::string> grid(static_cast<std::size_t>(g.subchannels),
                                std::string(static_cast<std::size_t>(g.slot_columns), '.'));
  const int map_slots = frame.map_size_slots();
  const int map_cols = frame.map_columns();
  for (int c = 0; c < map_cols; ++c)
    for (int r = 0; r < g.subchannels; ++r) grid[r][c] = (c * g.subchannels + r < map_slots) ? 'M' : 'm';
  for (const auto& b : frame.bursts) {
    if (!b) continue;
    const int rows = b->rows;
    for (int r = b->subband * rows; r < (b->subband + 1) * rows; ++r)
      for (int c = frame.first_column(*b); c < g.slot_columns; ++c)
        grid[r][c] = static_cast<char>('A' + b->subband);
  }

  std::ostringstream out;
  out << "frame SC=" << g.subchannels << " DL_sl=" << g.slot_columns << " SB=" << g.subbands
      << " ies=" << frame.ie_count() << " map_slots=" << map_slots << " map_columns=" << map_cols
      << " utility=" << frame.utility() << '\n';
  for (int r = 0; r < g.subchannels; ++r) out << "  " << grid[r] << '\n';
  for (const auto& b : frame.bursts) {
    if (!b) continue;
    out << "burst " << static_cast<char>('A' + b->subband) << " subband=" << b->subband << " group=" << b->group
        << " columns=" << frame.first_column(*b) << ".." << g.slot_columns - 1 << '\n';
    for (const auto& m : b->members) {
      out << "  ms=" << m.ms << " mcs=" << (m.mcs ? std::to_string(*m.mcs) : "-") << " bps=" << m.bytes_per_slot
          << " slots=" << m.slots_used << '/' << b->size_slots() << " packets=";
      for (std::size_t i = 0; i < m.packets.size(); ++i)
        out << (i ? "," : "") << packets[m.packets[i]].id;
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace fssim
