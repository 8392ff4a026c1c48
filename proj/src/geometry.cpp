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

#include "fssim/geometry.hpp"

#include <stdexcept>
#include <string>

namespace fssim {

void FrameGeometry::validate() const {
  if (subchannels <= 0 || slot_columns < 2)
    throw std::invalid_argument("frame geometry needs SC >= 1 and DL_sl >= 2");
  if (subbands < 1 || max_subbands < 1 || subbands > max_subbands)
    throw std::invalid_argument("subband count must satisfy 1 <= SB <= MSB");
  if (subchannels % subbands != 0)
    throw std::invalid_argument("SC=" + std::to_string(subchannels) +
                                " is not divisible by SB=" + std::to_string(subbands));
}

std::vector<SubbandSpec> partition_frame(const FrameGeometry& geometry, int num_subcarriers) {
  geometry.validate();
  if (num_subcarriers < geometry.subchannels)
    throw std::invalid_argument("fewer subcarriers than subchannels");

  const int rows = geometry.subchannels_per_subband();
  const auto row_to_subcarrier = [&](int row) {
    return static_cast<int>(static_cast<long long>(row) * num_subcarriers / geometry.subchannels);
  };

  std::vector<SubbandSpec> out;
  out.reserve(geometry.subbands);
  for (int j = 0; j < geometry.subbands; ++j) {
    SubbandSpec sb;
    sb.index = j;
    sb.first_row = j * rows;
    sb.end_row = (j + 1) * rows;
    sb.first_subcarrier = row_to_subcarrier(sb.first_row);
    sb.end_subcarrier = row_to_subcarrier(sb.end_row);
    out.push_back(sb);
  }
  return out;
}

}  // namespace fssim
