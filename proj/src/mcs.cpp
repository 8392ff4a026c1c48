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

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "fssim/phy.hpp"

namespace fssim {

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("MCS table is empty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.bytes_per_slot <= 0 || !(e.eesm_beta > 0.0))
      throw std::invalid_argument("MCS '" + e.name + "': payload and beta must be positive");
    if (i == 0) continue;
    const auto& prev = entries_[i - 1];
    if (!(e.min_effective_sinr_db > prev.min_effective_sinr_db))
      throw std::invalid_argument("MCS table thresholds must strictly increase");
    if (e.bytes_per_slot < prev.bytes_per_slot)
      throw std::invalid_argument("MCS table payloads must not decrease");
  }
}

McsTable McsTable::defaults() {
  return McsTable({
      {"QPSK-1/2", 3.0, slot_payload_bytes(2, 1, 2), 1.49},
      {"QPSK-3/4", 6.0, slot_payload_bytes(2, 3, 4), 1.57},
      {"16QAM-1/2", 8.5, slot_payload_bytes(4, 1, 2), 3.45},
      {"16QAM-3/4", 11.5, slot_payload_bytes(4, 3, 4), 4.56},
      {"64QAM-1/2", 15.0, slot_payload_bytes(6, 1, 2), 9.52},
      {"64QAM-2/3", 18.5, slot_payload_bytes(6, 2, 3), 11.0},
      {"64QAM-3/4", 21.0, slot_payload_bytes(6, 3, 4), 13.8},
  });
}

McsTable McsTable::from_json_text(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("MCS table file must hold a JSON array");
  std::vector<McsEntry> entries;
  for (const auto& row : doc) {
    McsEntry e;
    e.name = row.at("name").get<std::string>();
    e.min_effective_sinr_db = row.at("threshold_db").get<double>();
    e.bytes_per_slot = row.at("bytes_per_slot").get<int>();
    e.eesm_beta = row.at("beta").get<double>();
    entries.push_back(std::move(e));
  }
  return McsTable(std::move(entries));
}

McsTable McsTable::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open MCS table '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace fssim
