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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fssim/geometry.hpp"
#include "fssim/grouping.hpp"
#include "fssim/qos.hpp"

namespace fssim {

/// DL-MAP size model. The MAP goes out at QPSK 1/2 and grows column-wise
/// from the left edge of the frame; every member allocation of every burst
/// costs one IE.
struct MapModel {
  int fixed_bits = 88;
  int ie_bits = 60;
  int repetition = 1;
  int bytes_per_slot = 6;  // QPSK 1/2

  long long bits(int ie_count) const {
    return fixed_bits + static_cast<long long>(ie_bits) * ie_count;
  }
  int slots(int ie_count) const;
  int columns(int ie_count, int subchannels) const;
};

struct InitialLimit {
  int columns = 1;
  bool clamped = false;  // formula gave < 1 column
};

/// initSz = ceil( ((DL_sl - 1) SC / MSB - Map* M) / SC * SB ), in columns,
/// evaluated in exact integer arithmetic. Values below one column are
/// clamped to 1 and logged.
InitialLimit initial_vertical_limit(const FrameGeometry& geometry, int antennas, int map_star_slots);

/// Predicted MAP size per spatial layer, in slots: the number of 40-byte
/// packets that SC slots carry at \p avg_bytes_per_slot, each signalled by
/// one IE.
int predict_map_size(const FrameGeometry& geometry, int avg_bytes_per_slot, const MapModel& map = {});
inline int predict_map_size(const FrameGeometry& geometry, const McsEntry& avg_mcs,
                            const MapModel& map = {}) {
  return predict_map_size(geometry, avg_mcs.bytes_per_slot, map);
}

/// Packets one member carries in a burst. Indices refer to the candidate list.
struct MemberAllocation {
  int ms = 0;
  std::optional<int> mcs;
  int bytes_per_slot = 0;
  std::vector<std::size_t> packets;
  int slots_used = 0;
  double utility = 0.0;
};

/// Allocation of one SDMA group inside one subband. Bursts are right-aligned
/// and span whole columns of the subband rows.
struct Burst {
  int subband = 0;
  int group = 0;     // index into GroupingResult::per_subband[subband]
  int columns = 0;
  int rows = 0;
  std::vector<MemberAllocation> members;  // only members carrying packets

  bool empty() const { return members.empty(); }
  int ie_count() const { return static_cast<int>(members.size()); }
  int size_slots() const { return columns * rows; }
  double utility() const;
};

struct OfdmaFrame {
  FrameGeometry geometry;
  MapModel map;
  std::vector<std::optional<Burst>> bursts;  // one slot per subband

  OfdmaFrame() = default;
  OfdmaFrame(const FrameGeometry& g, const MapModel& m)
      : geometry(g), map(m), bursts(static_cast<std::size_t>(g.subbands)) {}

  int ie_count() const;
  int map_size_slots() const { return map.slots(ie_count()); }
  int map_columns() const { return map.columns(ie_count(), geometry.subchannels); }
  /// Widest burst, in columns.
  int packed_columns() const;
  int free_columns() const { return geometry.slot_columns - map_columns() - packed_columns(); }
  /// Sum of packet utilities, subband by subband.
  double utility() const;
  int first_column(const Burst& b) const { return geometry.slot_columns - b.columns; }
  /// Total bytes of the packed packets.
  long long payload_bytes(std::span<const Packet> packets) const;
  std::vector<std::size_t> packed_packets() const;
};

/// Which subband currently holds each candidate packet (-1: none).
class FreezeRegistry {
 public:
  explicit FreezeRegistry(std::size_t packets) : owner_(packets, -1) {}

  bool available_to(std::size_t packet, int subband) const {
    return owner_[packet] < 0 || owner_[packet] == subband;
  }
  int owner(std::size_t packet) const { return owner_[packet]; }
  /// Unfreezes whatever \p subband held and freezes the packets of \p burst.
  void assign(int subband, const Burst* burst);

 private:
  std::vector<int> owner_;
};

/// Candidate-list positions of every MS's packets, in list order.
std::vector<std::vector<std::size_t>> index_by_ms(std::span<const Packet> packets);

/// First-fit fill of one group area: every member gets columns x rows slots
/// and walks its packets in candidate-list order, skipping packets frozen in
/// other subbands and packets that no longer fit. A packet takes
/// ceil(size / payload) slots. The burst is trimmed to the columns the
/// fullest member needs.
Burst pack_group_area(const SdmaGroup& group, int group_index, int columns, int rows,
                      std::span<const Packet> packets,
                      const std::vector<std::vector<std::size_t>>& by_ms,
                      const FreezeRegistry& registry);

/// Maximum over MSs of the minimum burst their queue needs: for every MS
/// with schedulable candidates, the slots of its smallest packet at the
/// MS's best payload; then the largest of these. 0 when no MS qualifies.
int min_slot_size(const GroupingResult& groups, std::span<const Packet> packets);

struct FrameOptions {
  int antennas = 1;          // M, used by the initial limit
  int map_star_slots = 0;    // predicted MAP size per layer
  MapModel map;
  /// Let another group of a subband replace its scheduled group.
  bool allow_displacement = false;
};

struct FrameStats {
  std::size_t util_evaluations = 0;
  int rounds = 0;
  int initial_limit_columns = 0;
  int initial_step_slots = 0;
  bool initial_limit_clamped = false;
  std::vector<double> accepted_utilities;  // utility after every acceptance
};

struct FrameResult {
  OfdmaFrame frame;
  FrameStats stats;
};

/// Step size in slots for the first extension round: the largest minimal
/// burst rounded up to whole subband columns, never more than the free
/// columns of the empty frame.
int initial_step_size(const FrameGeometry& geometry, const GroupingResult& groups,
                      std::span<const Packet> packets, const MapModel& map);

/// Two-phase SDMA-OFDMA frame construction.
///
/// The extension phase moves a vertical limit (vLimit, slots per subband)
/// leftward towards the column-growing MAP. In every extension round the
/// selection phase repeatedly schedules, over the subbands not yet served in
/// this round, the group whose area fill raises the frame utility most, and
/// stops as soon as no candidate raises it. Once a subband holds a group only
/// that group may grow (unless allow_displacement). An acceptance whose MAP
/// and burst columns would not fit in DL_sl is rejected.
FrameResult frame_construction(const GroupingResult& groups, std::span<const Packet> packets,
                               const FrameGeometry& geometry, const FrameOptions& options);

/// Frequency-diversity packer for a single subband: picks the best group for
/// the initial area, then grows it one step per round while the utility
/// increases and the MAP fits.
FrameResult fd_baseline_pack(const GroupingResult& groups, std::span<const Packet> packets,
                             const FrameGeometry& geometry, const FrameOptions& options);

/// Text rendering of the slot grid followed by one line per burst member.
/// Grid cells: 'M' MAP, '.' free, 'A'+k burst of subband k.
std::string render_frame(const OfdmaFrame& frame, std::span<const Packet> packets);

}  // namespace fssim
