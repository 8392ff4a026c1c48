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
#include <deque>
#include <span>
#include <vector>

namespace fssim {

enum class PacketState { queued, frozen, transmitted };

struct Packet {
  std::uint64_t id = 0;
  int ms = 0;
  int size = 0;          // bytes
  double utility = 0.0;  // PF utility tag
  PacketState state = PacketState::queued;
};

/// Per-MS downlink queue with its proportional-fair state.
struct Flow {
  int ms = 0;
  std::deque<Packet> buffer;
  std::int64_t capacity_bytes = 0;
  std::int64_t occupancy_bytes = 0;
  double avg_throughput = 1.0;  // bytes/frame, never below epsilon
  double weight = 0.0;          // share of the offered load
  double credit = 0.0;          // offered bytes not yet turned into packets
};

enum class TrafficMode {
  saturated,  // buffers topped up to capacity every frame
  finite      // per-flow offered rate = weight x offered_bytes_per_frame
};

struct TrafficConfig {
  TrafficMode mode = TrafficMode::saturated;
  double offered_bytes_per_frame = 0.0;  // total over all flows, finite mode
  std::int64_t buffer_bytes_per_ms = 13271;  // 12.96 KiB
  double heavy_fraction_of_users = 0.5;
  double heavy_share_of_load = 0.8;
};

/// Proportional-fair averaging constants.
struct PfParams {
  double horizon_frames = 64.0;  // T
  double epsilon = 1.0;          // bytes/frame
};

/// Creates K flows. The first floor(K * heavy_fraction) MSs split
/// heavy_share of the load evenly, the rest split the remainder.
std::vector<Flow> make_flows(int num_users, const TrafficConfig& cfg, const PfParams& pf = {});

struct TrafficStats {
  std::int64_t generated_bytes = 0;
  std::int64_t enqueued_bytes = 0;
  std::int64_t dropped_bytes = 0;
  std::int64_t generated_packets = 0;
};

inline constexpr int kSmallestPacket = 40;

/// Packet size mix: 40 B (p=0.5), 576 B (p=0.2), 1500 B (p=0.3).
int draw_packet_size(double u);

/// Fills the flow buffers for one frame. The draws depend only on
/// (seed, frame_index, MS); packet ids come from a running counter so they
/// are unique over the whole run. Arrivals that do not fit are tail-dropped.
class TrafficGenerator {
 public:
  TrafficGenerator(TrafficConfig cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed) {}

  TrafficStats generate(std::vector<Flow>& flows, int frame_index);

  std::uint64_t packets_issued() const { return next_id_; }

 private:
  TrafficConfig cfg_;
  std::uint64_t seed_;
  std::uint64_t next_id_ = 0;
};

/// Slots needed for \p size bytes at \p bytes_per_slot.
constexpr int slots_for(int size, int bytes_per_slot) {
  return (size + bytes_per_slot - 1) / bytes_per_slot;
}

/// Utility per slot of a packet at a given payload per slot.
inline double utility_per_slot(const Packet& p, int bytes_per_slot) {
  return p.utility / slots_for(p.size, bytes_per_slot);
}

/// Candidate list for the next frame.
///
/// Every queued packet of a schedulable MS (best_bytes_per_slot > 0) is
/// tagged with u = size / (avg + epsilon). Flows are then merged by the
/// utility per slot of their head-of-line packet, highest first, ties to
/// the lowest MS index, so each flow keeps its FIFO order.
std::vector<Packet> build_candidate_list(const std::vector<Flow>& flows,
                                         std::span<const int> best_bytes_per_slot,
                                         const PfParams& pf = {});

/// avg <- (1 - 1/T) avg + served / T, floored at epsilon.
void update_pf_averages(std::vector<Flow>& flows, std::span<const std::int64_t> served_bytes,
                        const PfParams& pf = {});

/// Removes transmitted packets (by id) from the buffers. Returns served
/// bytes per MS.
std::vector<std::int64_t> commit_transmissions(std::vector<Flow>& flows,
                                               std::span<const std::uint64_t> packet_ids);

/// Jain's fairness index of \p x; 1 for an all-zero vector.
double jain_index(std::span<const double> x);

}  // namespace fssim
