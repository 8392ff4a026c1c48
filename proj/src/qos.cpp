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

#include "fssim/qos.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_set>

#include "fssim/random.hpp"

namespace fssim {

std::vector<Flow> make_flows(int num_users, const TrafficConfig& cfg, const PfParams& pf) {
  if (num_users < 0) throw std::invalid_argument("negative user count");
  std::vector<Flow> flows(static_cast<std::size_t>(num_users));
  const int heavy = static_cast<int>(num_users * cfg.heavy_fraction_of_users);
  const int light = num_users - heavy;
  for (int u = 0; u < num_users; ++u) {
    Flow& f = flows[u];
    f.ms = u;
    f.capacity_bytes = cfg.buffer_bytes_per_ms;
    f.avg_throughput = pf.epsilon;
    if (heavy == 0 || light == 0)
      f.weight = 1.0 / num_users;
    else
      f.weight = u < heavy ? cfg.heavy_share_of_load / heavy : (1.0 - cfg.heavy_share_of_load) / light;
  }
  return flows;
}

int draw_packet_size(double u) {
  if (u < 0.5) return 40;
  if (u < 0.7) return 576;
  return 1500;
}

TrafficStats TrafficGenerator::generate(std::vector<Flow>& flows, int frame_index) {
  TrafficStats stats;
  for (Flow& f : flows) {
    Rng rng(stream_seed(seed_, 0x747266u + static_cast<std::uint64_t>(frame_index),
                        static_cast<std::uint64_t>(f.ms)));
    const auto arrive = [&](int size) {
      stats.generated_bytes += size;
      ++stats.generated_packets;
      if (f.occupancy_bytes + size > f.capacity_bytes) {
        stats.dropped_bytes += size;
        return false;
      }
      f.buffer.push_back(Packet{next_id_++, f.ms, size, 0.0, PacketState::queued});
      f.occupancy_bytes += size;
      stats.enqueued_bytes += size;
      return true;
    };

    if (cfg_.mode == TrafficMode::saturated) {
      // Refill to capacity: an arrival that overflows is dropped and the
      // source keeps sending until not even the smallest packet fits.
      while (f.capacity_bytes - f.occupancy_bytes >= kSmallestPacket) {
        arrive(draw_packet_size(rng.uniform()));
      }
    } else {
      f.credit += f.weight * cfg_.offered_bytes_per_frame;
      while (f.credit > 0.0) {
        const int size = draw_packet_size(rng.uniform());
        f.credit -= size;
        arrive(size);
      }
    }
  }
  return stats;
}

std::vector<Packet> build_candidate_list(const std::vector<Flow>& flows,
                                         std::span<const int> best_bytes_per_slot, const PfParams& pf) {
  struct Head {
    double key;
    int ms;
    std::size_t flow;
    std::size_t pos;
  };
  const auto worse = [](const Head& a, const Head& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.ms > b.ms;
  };
  std::priority_queue<Head, std::vector<Head>, decltype(worse)> heads(worse);

  std::vector<std::vector<Packet>> tagged(flows.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const Flow& f = flows[i];
    const int bps = f.ms < static_cast<int>(best_bytes_per_slot.size()) ? best_bytes_per_slot[f.ms] : 0;
    if (bps <= 0 || f.buffer.empty()) continue;
    tagged[i].reserve(f.buffer.size());
    for (Packet p : f.buffer) {
      p.utility = static_cast<double>(p.size) / (f.avg_throughput + pf.epsilon);
      tagged[i].push_back(p);
    }
    total += tagged[i].size();
    heads.push({utility_per_slot(tagged[i].front(), bps), f.ms, i, 0});
  }

  std::vector<Packet> out;
  out.reserve(total);
  while (!heads.empty()) {
    Head h = heads.top();
    heads.pop();
    out.push_back(tagged[h.flow][h.pos]);
    if (++h.pos < tagged[h.flow].size()) {
      h.key = utility_per_slot(tagged[h.flow][h.pos], best_bytes_per_slot[h.ms]);
      heads.push(h);
    }
  }
  return out;
}

void update_pf_averages(std::vector<Flow>& flows, std::span<const std::int64_t> served_bytes,
                        const PfParams& pf) {
  const double a = 1.0 / pf.horizon_frames;
  for (Flow& f : flows) {
    const auto served = f.ms < static_cast<int>(served_bytes.size()) ? served_bytes[f.ms] : 0;
    f.avg_throughput = std::max(pf.epsilon, (1.0 - a) * f.avg_throughput + a * static_cast<double>(served));
  }
}

std::vector<std::int64_t> commit_transmissions(std::vector<Flow>& flows,
                                               std::span<const std::uint64_t> packet_ids) {
  const std::unordered_set<std::uint64_t> sent(packet_ids.begin(), packet_ids.end());
  std::vector<std::int64_t> served(flows.size(), 0);
  for (Flow& f : flows) {
    std::deque<Packet> kept;
    for (Packet& p : f.buffer) {
      if (sent.count(p.id)) {
        served.at(f.ms) += p.size;
        f.occupancy_bytes -= p.size;
      } else {
        kept.push_back(p);
      }
    }
    f.buffer = std::move(kept);
  }
  return served;
}

double jain_index(std::span<const double> x) {
  double sum = 0.0, sq = 0.0;
  for (double v : x) {
    sum += v;
    sq += v * v;
  }
  if (sq <= 0.0) return 1.0;
  return sum * sum / (static_cast<double>(x.size()) * sq);
}

}  // namespace fssim
