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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fssim/frame.hpp"
#include "fssim/log.hpp"
#include "support.hpp"

using namespace fssim;
using fssim::testing::make_group;
using fssim::testing::make_packet;

#ifndef FSSIM_TEST_DATA_DIR
#define FSSIM_TEST_DATA_DIR "."
#endif

TEST_CASE("frame partition") {
  const auto three = partition_frame(FrameGeometry{30, 17, 3, 6}, 1024);
  REQUIRE(three.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(three[j].rows() == 10);
    CHECK(three[j].first_row == 10 * j);
    CHECK(three[j].first_subcarrier == 10 * j * 1024 / 30);
  }
  CHECK(three[2].end_subcarrier == 1024);

  const auto one = partition_frame(FrameGeometry{30, 17, 1, 6}, 1024);
  REQUIRE(one.size() == 1);
  CHECK(one[0].rows() == 30);
  CHECK(one[0].first_subcarrier == 0);
  CHECK(one[0].end_subcarrier == 1024);

  CHECK_THROWS_AS(partition_frame(FrameGeometry{30, 17, 4, 6}, 1024), std::invalid_argument);
  CHECK_THROWS_AS(partition_frame(FrameGeometry{30, 17, 6, 3}, 1024), std::invalid_argument);
}

TEST_CASE("initial vertical limit") {
  const bool was = set_warnings_enabled(false);
  SUBCASE("worked example") {
    const auto lim = initial_vertical_limit(FrameGeometry{30, 17, 3, 6}, 4, 10);
    CHECK(lim.columns == 4);
    CHECK_FALSE(lim.clamped);
  }
  SUBCASE("all subbands, no MAP") {
    for (int M : {1, 4, 8}) CHECK(initial_vertical_limit(FrameGeometry{30, 17, 6, 6}, M, 0).columns == 16);
  }
  SUBCASE("MAP estimate fills the frame") {
    // Map* M = (DL_sl - 1) SC / MSB exactly, and beyond.
    const auto edge = initial_vertical_limit(FrameGeometry{30, 17, 3, 6}, 4, 20);
    CHECK(edge.columns == 1);
    CHECK(edge.clamped);
    CHECK(initial_vertical_limit(FrameGeometry{30, 17, 3, 6}, 8, 40).clamped);
  }
  SUBCASE("rounds up") {
    // (16 * 30 / 6 - 11 * 4) / 30 * 3 = 3.6
    CHECK(initial_vertical_limit(FrameGeometry{30, 17, 3, 6}, 4, 11).columns == 4);
  }
  set_warnings_enabled(was);
}

TEST_CASE("MAP size model") {
  const MapModel map;
  CHECK(map.slots(0) == 2);
  CHECK(map.slots(37) == 49);
  CHECK(map.columns(37, 30) == 2);
  CHECK(map.columns(0, 30) == 1);

  FrameGeometry g{30, 17, 2, 6};
  OfdmaFrame ten(g, map), five(g, map);
  Burst a, b;
  for (int i = 0; i < 10; ++i) a.members.push_back(MemberAllocation{i, 0, 6, {static_cast<std::size_t>(i)}, 1, 1.0});
  for (int i = 0; i < 5; ++i) b.members.push_back(MemberAllocation{i, 0, 6, {static_cast<std::size_t>(i)}, 1, 1.0});
  ten.bursts[0] = a;
  five.bursts[0] = b;
  five.bursts[1] = b;
  CHECK(ten.ie_count() == five.ie_count());
  CHECK(ten.map_size_slots() == five.map_size_slots());
}

TEST_CASE("predicted MAP size") {
  const FrameGeometry g{30, 17, 1, 6};
  // 30 slots x 6 B = 180 B, 4 packets of 40 B, 88 + 4 x 60 bits.
  CHECK(predict_map_size(g, McsTable::defaults()[0]) == 7);
  MapModel no_ie;
  no_ie.ie_bits = 0;
  CHECK(predict_map_size(g, 6, no_ie) == no_ie.slots(0));
  MapModel doubled;
  doubled.ie_bits = 120;
  CHECK(doubled.bits(4) - doubled.fixed_bits == 2 * (MapModel{}.bits(4) - MapModel{}.fixed_bits));
  CHECK(predict_map_size(g, 0) == MapModel{}.slots(0));
}

TEST_CASE("packing one group area") {
  SUBCASE("single small packet") {
    const std::vector<Packet> packets{make_packet(0, 0, 6, 1.0)};
    const SdmaGroup grp = make_group(0, {0}, {6});
    const FreezeRegistry reg(packets.size());
    const Burst b = pack_group_area(grp, 0, 1, 10, packets, index_by_ms(packets), reg);
    REQUIRE(b.members.size() == 1);
    CHECK(b.members[0].slots_used == 1);
    CHECK(b.columns == 1);
    CHECK(b.size_slots() - b.members[0].slots_used == 9);
  }
  SUBCASE("frozen packets are skipped") {
    const std::vector<Packet> packets{make_packet(0, 0, 40, 1.0), make_packet(1, 0, 40, 1.0)};
    const SdmaGroup other = make_group(1, {0}, {6});
    const auto by_ms = index_by_ms(packets);
    FreezeRegistry reg(packets.size());
    const Burst held = pack_group_area(other, 0, 1, 7, packets, by_ms, reg);
    REQUIRE(held.members.size() == 1);
    CHECK(held.members[0].packets == std::vector<std::size_t>{0});
    reg.assign(1, &held);

    const Burst b = pack_group_area(make_group(0, {0}, {6}), 0, 4, 10, packets, by_ms, reg);
    REQUIRE(b.members.size() == 1);
    CHECK(b.members[0].packets == std::vector<std::size_t>{1});

    reg.assign(1, nullptr);
    CHECK(reg.available_to(0, 0));
  }
  SUBCASE("first fit over a mixed queue") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<Packet> packets;
      for (int i = 0; i < 12; ++i)
        packets.push_back(make_packet(static_cast<std::uint64_t>(i), static_cast<int>(rng.bits() % 2),
                                      draw_packet_size(rng.uniform()), rng.uniform()));
      const SdmaGroup grp = make_group(0, {0, 1}, {18, 18});
      const FreezeRegistry reg(packets.size());
      const Burst b = pack_group_area(grp, 0, 2, 10, packets, index_by_ms(packets), reg);

      for (int ms : {0, 1}) {
        std::vector<std::size_t> expected;
        int free = 20;
        for (std::size_t i = 0; i < packets.size(); ++i) {
          if (packets[i].ms != ms) continue;
          const int need = (packets[i].size + 17) / 18;
          if (need <= free) {
            free -= need;
            expected.push_back(i);
          }
        }
        std::vector<std::size_t> got;
        for (const auto& m : b.members)
          if (m.ms == ms) got = m.packets;
        CHECK(got == expected);
      }
    }
  }
  SUBCASE("infeasible members carry nothing") {
    const std::vector<Packet> packets{make_packet(0, 0, 40, 1.0), make_packet(1, 1, 40, 1.0)};
    const FreezeRegistry reg(packets.size());
    const Burst b = pack_group_area(make_group(0, {0, 1}, {0, 6}), 0, 3, 4, packets, index_by_ms(packets), reg);
    REQUIRE(b.members.size() == 1);
    CHECK(b.members[0].ms == 1);
    CHECK(b.ie_count() == 1);
  }
}

TEST_CASE("minimum slot size") {
  GroupingResult groups;
  groups.per_subband = {{make_group(0, {0, 1}, {6, 27})}};
  const std::vector<Packet> packets{make_packet(0, 0, 576, 1), make_packet(1, 0, 40, 1), make_packet(2, 1, 1500, 1),
                                    make_packet(3, 2, 40, 1)};
  // MS 0: min(96, 7) = 7 slots; MS 1: 56 slots; MS 2 has no link.
  CHECK(min_slot_size(groups, packets) == 56);
  CHECK(min_slot_size(groups, {}) == 0);

  const FrameGeometry g{30, 17, 3, 6};
  CHECK(initial_step_size(g, groups, packets, MapModel{}) == 60);
  const std::vector<Packet> huge{make_packet(0, 0, 1500, 1)};
  // 250 slots would need 25 columns; capped at the 16 free ones.
  CHECK(initial_step_size(g, groups, huge, MapModel{}) == 160);
  CHECK(initial_step_size(g, groups, {}, MapModel{}) == 10);
}

TEST_CASE("frame construction corner cases") {
  SUBCASE("nothing to pack") {
    GroupingResult groups;
    groups.per_subband = {{make_group(0, {0}, {0})}, {}};
    const std::vector<Packet> packets{make_packet(0, 0, 40, 1.0)};
    const auto r = frame_construction(groups, packets, FrameGeometry{4, 6, 2, 2}, FrameOptions{});
    CHECK(r.frame.ie_count() == 0);
    CHECK(r.frame.packed_columns() == 0);
    CHECK(r.frame.map_size_slots() == 2);
  }
  SUBCASE("frame too small for a single step") {
    GroupingResult groups;
    groups.per_subband = {{make_group(0, {0}, {27})}};
    const std::vector<Packet> packets{make_packet(0, 0, 40, 1.0)};
    const auto r = frame_construction(groups, packets, FrameGeometry{1, 2, 1, 1}, FrameOptions{});
    CHECK(r.stats.rounds == 0);
    CHECK(r.frame.ie_count() == 0);
  }
  SUBCASE("mismatched grouping") {
    GroupingResult groups;
    groups.per_subband = {{}};
    CHECK_THROWS_AS(frame_construction(groups, {}, FrameGeometry{30, 17, 3, 6}, FrameOptions{}), std::invalid_argument);
    CHECK_THROWS_AS(fd_baseline_pack(groups, {}, FrameGeometry{30, 17, 3, 6}, FrameOptions{}), std::invalid_argument);
  }
}

TEST_CASE("constructed frames obey the packing rules") {
  const bool was = set_warnings_enabled(false);
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    fssim::testing::InstanceShape shape;
    const int sb_choices[] = {1, 2, 3, 5, 6};
    shape.subbands = sb_choices[rng.bits() % 5];
    shape.subchannels = 30;
    shape.slot_columns = 6 + static_cast<int>(rng.bits() % 14);
    shape.antennas = 1 + static_cast<int>(rng.bits() % 4);
    shape.users = 2 + static_cast<int>(rng.bits() % 10);
    shape.packets = static_cast<int>(rng.bits() % 80);
    const auto in = fssim::testing::random_instance(rng, shape);
    for (bool displace : {false, true}) {
      FrameOptions o = fssim::testing::options_for(in, static_cast<int>(rng.bits() % 8));
      o.allow_displacement = displace;
      const auto r = frame_construction(in.groups, in.packets, in.geometry, o);
      const auto bad = fssim::testing::frame_violations(r, in.groups, in.packets);
      CHECK_MESSAGE(bad.empty(), (bad.empty() ? std::string() : bad.front()));
      const long long bound = static_cast<long long>(shape.slot_columns) * shape.users * shape.subbands * shape.subbands;
      CHECK(static_cast<long long>(r.stats.util_evaluations) <= bound);
    }
  }
  set_warnings_enabled(was);
}

TEST_CASE("one subband matches the baseline packer") {
  const bool was = set_warnings_enabled(false);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    fssim::testing::InstanceShape shape;
    shape.subbands = 1;
    shape.antennas = 1 + static_cast<int>(rng.bits() % 4);
    const auto in = fssim::testing::random_instance(rng, shape);
    const auto o = fssim::testing::options_for(in, 4);
    const auto a = frame_construction(in.groups, in.packets, in.geometry, o);
    const auto b = fd_baseline_pack(in.groups, in.packets, in.geometry, o);
    CHECK(render_frame(a.frame, in.packets) == render_frame(b.frame, in.packets));
  }
  set_warnings_enabled(was);
}

TEST_CASE("frame rendering matches the golden file") {
  GroupingResult groups;
  groups.per_subband = {{make_group(0, {0, 1}, {12, 6}), make_group(0, {2}, {27})},
                        {make_group(1, {2, 3}, {18, 9})}};
  std::vector<Packet> packets;
  const int sizes[] = {40, 576, 40, 1500, 40, 40, 576, 40, 40, 40};
  for (int i = 0; i < 10; ++i) packets.push_back(make_packet(static_cast<std::uint64_t>(100 + i), i % 4, sizes[i], 1.0 + 0.25 * i));
  FrameOptions o;
  o.antennas = 2;
  o.map_star_slots = 3;
  const auto r = frame_construction(groups, packets, FrameGeometry{8, 12, 2, 2}, o);
  const std::string text = render_frame(r.frame, packets);

  std::ifstream in(FSSIM_TEST_DATA_DIR "/golden/frame_small.txt");
  REQUIRE_MESSAGE(in.good(), "missing golden file");
  std::stringstream golden;
  golden << in.rdbuf();
  CHECK(text == golden.str());
}
