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

#include <algorithm>
#include <stdexcept>

#include "fssim/frame.hpp"

namespace fssim {

FrameResult fd_baseline_pack(const GroupingResult& groups, std::span<const Packet> packets,
                             const FrameGeometry& geometry, const FrameOptions& options) {
  geometry.validate();
  if (geometry.subbands != 1 || groups.num_subbands() != 1)
    throw std::invalid_argument("fd_baseline_pack needs exactly one subband");

  const int SC = geometry.subchannels;
  const int DL = geometry.slot_columns;
  const auto& candidates = groups.per_subband.front();

  FrameResult result{OfdmaFrame(geometry, options.map), {}};
  auto& stats = result.stats;
  auto& slot = result.frame.bursts.front();

  const auto by_ms = index_by_ms(packets);
  const FreezeRegistry all_free(packets.size());

  const InitialLimit init = initial_vertical_limit(geometry, options.antennas, options.map_star_slots);
  int step = initial_step_size(geometry, groups, packets, options.map);
  int limit = std::max(init.columns * SC, step);
  stats.initial_limit_columns = init.columns;
  stats.initial_limit_clamped = init.clamped;
  stats.initial_step_slots = step;

  const auto fits = [&](const Burst& b) { return options.map.columns(b.ie_count(), SC) + b.columns <= DL; };

  while (limit + options.map.slots(slot ? slot->ie_count() : 0) < geometry.size_slots()) {
    ++stats.rounds;
    const int cols = limit / SC;
    if (!slot || options.allow_displacement) {
      std::optional<Burst> best;
      for (int gi = 0; gi < static_cast<int>(candidates.size()); ++gi) {
        Burst b = pack_group_area(candidates[gi], gi, cols, SC, packets, by_ms, all_free);
        ++stats.util_evaluations;
        if (b.empty() || !fits(b)) continue;
        if (!best || b.utility() > best->utility()) best = std::move(b);
      }
      if (best && best->utility() > (slot ? slot->utility() : 0.0)) {
        slot = std::move(best);
        stats.accepted_utilities.push_back(slot->utility());
      }
    } else {
      Burst grown = pack_group_area(candidates[slot->group], slot->group, cols, SC, packets, by_ms, all_free);
      ++stats.util_evaluations;
      if (!grown.empty() && fits(grown) && grown.utility() > slot->utility()) {
        slot = std::move(grown);
        stats.accepted_utilities.push_back(slot->utility());
      }
    }
    const int map_cols = options.map.columns(slot ? slot->ie_count() : 0, SC);
    const int free_cols = DL - map_cols - (slot ? slot->columns : 0);
    step = std::min(std::max(free_cols, 1) * SC, step);
    limit += step;
  }
  return result;
}

}  // namespace fssim
