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

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "fssim/channel.hpp"
#include "fssim/frame.hpp"
#include "fssim/geometry.hpp"
#include "fssim/phy.hpp"
#include "fssim/qos.hpp"

namespace fssim {

/// Grid of scenario values for a sweep. Empty lists keep the base value.
struct SweepSpec {
  std::vector<double> bandwidth_mhz;
  std::vector<int> antennas;
  std::vector<int> users;
  std::vector<int> subbands;
  std::vector<std::string> los;
};

/// Every knob of one simulated scenario. Field names match the JSON keys.
struct ScenarioConfig {
  double bandwidth_mhz = 10.0;
  int fft_size = 0;        // 0: 512 / 1024 / 2048 for 5 / 10 / 20 MHz
  double subcarrier_spacing_hz = 10937.5;
  double carrier_frequency_hz = 2.5e9;
  int antennas = 4;        // M
  int users = 12;          // K
  int subbands = 1;        // SB
  int max_subbands = 6;    // MSB
  std::string los = "los"; // los | nlos | mixed

  int subchannels = 0;     // SC, 0: 12 / 30 / 60 for 5 / 10 / 20 MHz
  int slot_columns = 17;   // DL_sl
  int frames = 50;
  double frame_duration_s = 0.005;

  std::uint64_t first_seed = 1;
  int seeds = 1;

  int csi_decimation = 8;  // D
  double tx_power_dbm = 46.0;
  double noise_density_dbm_hz = -167.0;
  /// Out-of-cell interference folded into the noise floor.
  double interference_margin_db = 20.0;
  double cell_radius_m = 288.0;
  double min_distance_m = 35.0;
  double element_spacing = 0.5;

  int num_taps = 6;
  double rms_delay_spread_s = 0.5e-6;
  double angular_spread_deg = 10.0;
  double ricean_k_db = 7.0;
  double pathloss_exponent_los = 2.6;
  double pathloss_exponent_nlos = 3.5;

  std::string traffic_mode = "saturated";  // saturated | finite
  double offered_load_bytes_per_frame = 0.0;
  std::int64_t buffer_bytes_per_ms = 13271;
  double heavy_share = 0.8;

  double pf_horizon_frames = 64.0;
  double pf_epsilon = 1.0;

  std::string mcs_table;  // path, empty: built-in table
  int max_groups_per_subband = 0;  // 0: K
  int map_fixed_bits = 88;
  int map_ie_bits = 60;
  bool allow_displacement = false;

  SweepSpec sweep;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;

  int derived_fft_size() const;
  int derived_subchannels() const;
  int num_subcarriers() const { return derived_fft_size(); }
  FrameGeometry geometry() const;
  ChannelModelConfig channel_model() const;
  TrafficConfig traffic() const;
  PfParams pf() const;
  MapModel map_model() const;
  McsTable load_mcs_table() const;
  double total_power_w() const;
  /// sigma^2 = N0 x S x subcarrier spacing, plus the interference margin.
  double noise_power_w() const;
  std::vector<std::uint64_t> seed_list() const;
};

LosMode parse_los_mode(const std::string& s);

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_config(const std::string& path);

}  // namespace fssim
