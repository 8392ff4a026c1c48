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

#include <vector>

namespace fssim {

/// Downlink slot grid: subchannel rows x slot columns.
struct FrameGeometry {
  int subchannels = 30;    // SC
  int slot_columns = 17;   // DL_sl
  int subbands = 1;        // SB
  int max_subbands = 6;    // MSB

  int subchannels_per_subband() const { return subchannels / subbands; }
  int size_slots() const { return subchannels * slot_columns; }

  /// Throws std::invalid_argument on an inconsistent geometry.
  void validate() const;
};

/// A contiguous block of subchannel rows and the subcarriers they map to
/// under adjacent subcarrier allocation. Ranges are half-open, 0-based.
struct SubbandSpec {
  int index = 0;
  int first_row = 0;
  int end_row = 0;
  int first_subcarrier = 0;
  int end_subcarrier = 0;

  int rows() const { return end_row - first_row; }
  bool contains_subcarrier(int f) const {
    return f >= first_subcarrier && f < end_subcarrier;
  }
};

/// Splits the frame into SB equal-height subbands. Subband rows are mapped
/// onto subcarriers proportionally, so row r covers subcarriers
/// [r*S/SC, (r+1)*S/SC).
std::vector<SubbandSpec> partition_frame(const FrameGeometry& geometry,
                                         int num_subcarriers);

}  // namespace fssim
