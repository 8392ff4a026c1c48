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

#include "fssim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace fssim {

LosMode parse_los_mode(const std::string& s) {
  if (s == "los") return LosMode::los;
  if (s == "nlos") return LosMode::nlos;
  if (s == "mixed") return LosMode::mixed;
  throw std::invalid_argument("unknown LOS mode '" + s + "'");
}

int ScenarioConfig::derived_fft_size() const {
  if (fft_size > 0) return fft_size;
  if (bandwidth_mhz == 5.0) return 512;
  if (bandwidth_mhz == 10.0) return 1024;
  if (bandwidth_mhz == 20.0) return 2048;
  throw std::invalid_argument("no default FFT size for this bandwidth; set fft_size");
}

int ScenarioConfig::derived_subchannels() const {
  if (subchannels > 0) return subchannels;
  if (bandwidth_mhz == 5.0) return 12;
  if (bandwidth_mhz == 10.0) return 30;
  if (bandwidth_mhz == 20.0) return 60;
  throw std::invalid_argument("no default subchannel count for this bandwidth; set subchannels");
}

void ScenarioConfig::validate() const {
  if (!(bandwidth_mhz > 0.0)) throw std::invalid_argument("bandwidth_mhz must be positive");
  if (antennas < 1) throw std::invalid_argument("antennas must be >= 1");
  if (users < 0) throw std::invalid_argument("users must be >= 0");
  if (frames < 1) throw std::invalid_argument("frames must be >= 1");
  if (seeds < 1) throw std::invalid_argument("seeds must be >= 1");
  if (csi_decimation < 1) throw std::invalid_argument("csi_decimation must be >= 1");
  if (!(frame_duration_s > 0.0)) throw std::invalid_argument("frame_duration_s must be positive");
  if (!(pf_horizon_frames >= 1.0) || !(pf_epsilon > 0.0))
    throw std::invalid_argument("PF horizon must be >= 1 frame and epsilon positive");
  if (max_groups_per_subband < 0) throw std::invalid_argument("max_groups_per_subband must be >= 0");
  if (traffic_mode != "saturated" && traffic_mode != "finite")
    throw std::invalid_argument("traffic_mode must be 'saturated' or 'finite'");
  if (buffer_bytes_per_ms <= 0) throw std::invalid_argument("buffer_bytes_per_ms must be positive");
  parse_los_mode(los);
  geometry().validate();
  if (csi_decimation > num_subcarriers())
    throw std::invalid_argument("csi_decimation exceeds the number of subcarriers");
  if (num_subcarriers() < derived_subchannels())
    throw std::invalid_argument("fewer subcarriers than subchannels");
}

FrameGeometry ScenarioConfig::geometry() const {
  return FrameGeometry{derived_subchannels(), slot_columns, subbands, max_subbands};
}

ChannelModelConfig ScenarioConfig::channel_model() const {
  ChannelModelConfig c;
  c.num_users = users;
  c.num_subcarriers = num_subcarriers();
  c.subcarrier_spacing_hz = subcarrier_spacing_hz;
  c.array = AntennaArrayConfig{antennas, element_spacing, carrier_frequency_hz};
  c.num_taps = num_taps;
  c.rms_delay_spread_s = rms_delay_spread_s;
  c.angular_spread_deg = angular_spread_deg;
  c.ricean_k_db = ricean_k_db;
  c.los_mode = parse_los_mode(los);
  c.cell_radius_m = cell_radius_m;
  c.min_distance_m = min_distance_m;
  c.pathloss_exponent_los = pathloss_exponent_los;
  c.pathloss_exponent_nlos = pathloss_exponent_nlos;
  return c;
}

TrafficConfig ScenarioConfig::traffic() const {
  TrafficConfig t;
  t.mode = traffic_mode == "finite" ? TrafficMode::finite : TrafficMode::saturated;
  t.offered_bytes_per_frame = offered_load_bytes_per_frame;
  t.buffer_bytes_per_ms = buffer_bytes_per_ms;
  t.heavy_share_of_load = heavy_share;
  return t;
}

PfParams ScenarioConfig::pf() const { return PfParams{pf_horizon_frames, pf_epsilon}; }

MapModel ScenarioConfig::map_model() const {
  MapModel m;
  m.fixed_bits = map_fixed_bits;
  m.ie_bits = map_ie_bits;
  return m;
}

McsTable ScenarioConfig::load_mcs_table() const {
  return mcs_table.empty() ? McsTable::defaults() : McsTable::from_json_file(mcs_table);
}

double ScenarioConfig::total_power_w() const { return std::pow(10.0, (tx_power_dbm - 30.0) / 10.0); }

double ScenarioConfig::noise_power_w() const {
  const double bandwidth_hz = num_subcarriers() * subcarrier_spacing_hz;
  const double dbm = noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz) + interference_margin_db;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

std::vector<std::uint64_t> ScenarioConfig::seed_list() const {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < seeds; ++i) out.push_back(first_seed + static_cast<std::uint64_t>(i));
  return out;
}

namespace {

// One entry per JSON key; binds the key to a ScenarioConfig member.
template <typename F>
void for_each_field(ScenarioConfig& c, F&& f) {
  f("bandwidth_mhz", c.bandwidth_mhz);
  f("fft_size", c.fft_size);
  f("subcarrier_spacing_hz", c.subcarrier_spacing_hz);
  f("carrier_frequency_hz", c.carrier_frequency_hz);
  f("antennas", c.antennas);
  f("users", c.users);
  f("subbands", c.subbands);
  f("max_subbands", c.max_subbands);
  f("los", c.los);
  f("subchannels", c.subchannels);
  f("slot_columns", c.slot_columns);
  f("frames", c.frames);
  f("frame_duration_s", c.frame_duration_s);
  f("first_seed", c.first_seed);
  f("seeds", c.seeds);
  f("csi_decimation", c.csi_decimation);
  f("tx_power_dbm", c.tx_power_dbm);
  f("noise_density_dbm_hz", c.noise_density_dbm_hz);
  f("interference_margin_db", c.interference_margin_db);
  f("cell_radius_m", c.cell_radius_m);
  f("min_distance_m", c.min_distance_m);
  f("element_spacing", c.element_spacing);
  f("num_taps", c.num_taps);
  f("rms_delay_spread_s", c.rms_delay_spread_s);
  f("angular_spread_deg", c.angular_spread_deg);
  f("ricean_k_db", c.ricean_k_db);
  f("pathloss_exponent_los", c.pathloss_exponent_los);
  f("pathloss_exponent_nlos", c.pathloss_exponent_nlos);
  f("traffic_mode", c.traffic_mode);
  f("offered_load_bytes_per_frame", c.offered_load_bytes_per_frame);
  f("buffer_bytes_per_ms", c.buffer_bytes_per_ms);
  f("heavy_share", c.heavy_share);
  f("pf_horizon_frames", c.pf_horizon_frames);
  f("pf_epsilon", c.pf_epsilon);
  f("mcs_table", c.mcs_table);
  f("max_groups_per_subband", c.max_groups_per_subband);
  f("map_fixed_bits", c.map_fixed_bits);
  f("map_ie_bits", c.map_ie_bits);
  f("allow_displacement", c.allow_displacement);
}

template <typename T>
void read_list(const nlohmann::json& j, const char* key, std::vector<T>& out) {
  if (j.contains(key)) out = j.at(key).get<std::vector<T>>();
}

}  // namespace

ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ScenarioConfig cfg;
  std::set<std::string> known{"sweep"};
  for_each_field(cfg, [&](const char* key, auto& field) {
    known.insert(key);
    if (j.contains(key)) j.at(key).get_to(field);
  });
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    static const std::set<std::string> sweep_keys{"bandwidth_mhz", "antennas", "users", "subbands", "los"};
    for (const auto& [key, _] : s.items())
      if (!sweep_keys.count(key)) throw std::invalid_argument("unknown sweep key '" + key + "'");
    read_list(s, "bandwidth_mhz", cfg.sweep.bandwidth_mhz);
    read_list(s, "antennas", cfg.sweep.antennas);
    read_list(s, "users", cfg.sweep.users);
    read_list(s, "subbands", cfg.sweep.subbands);
    read_list(s, "los", cfg.sweep.los);
  }
  return cfg;
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  ScenarioConfig copy = cfg;
  for_each_field(copy, [&](const char* key, auto& field) { j[key] = field; });
  j["sweep"] = {{"bandwidth_mhz", cfg.sweep.bandwidth_mhz},
                {"antennas", cfg.sweep.antennas},
                {"users", cfg.sweep.users},
                {"subbands", cfg.sweep.subbands},
                {"los", cfg.sweep.los}};
  return j;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config '" + path + "': " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config '" + path + "': " + e.what());
  }
}

}  // namespace fssim
