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

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "fssim/channel.hpp"
#include "fssim/geometry.hpp"
#include "fssim/phy.hpp"

namespace fssim {

/// A set of MSs served on the same subband and columns, separated by
/// transmit beamforming.
struct SdmaGroup {
  int subband = 0;
  std::vector<int> members;              // MS indices, in insertion order
  std::vector<Eigen::MatrixXcd> weights; // per CSI sample, M x G (may be empty)
  std::vector<LinkResult> links;         // aligned with members
  int metric = 0;                        // bytes per slot column of the group

  int size() const { return static_cast<int>(members.size()); }
  /// Payload per slot of member \p i (0 when it has no feasible MCS).
  int bytes_per_slot(std::size_t i) const { return links.at(i).bytes_per_slot; }
};

struct GroupingResult {
  std::vector<std::vector<SdmaGroup>> per_subband;  // best metric first

  int num_subbands() const { return static_cast<int>(per_subband.size()); }
  /// Best payload per slot each MS reaches in any group, 0 if none. The
  /// vector has at least num_users entries.
  std::vector<int> best_bytes_per_slot(int num_users) const;
};

/// Link parameters shared by every group evaluation.
struct LinkParams {
  double total_power = 1.0;  // P_tot, Watts
  const McsTable* table = nullptr;
};

/// Sum of the members' slot payloads; infeasible members add 0.
int group_metric(const SdmaGroup& group);

/// MinMSE weights and SINR per CSI sample for \p members on \p csi, then MCS
/// selection per member. The transmit power is split equally among members.
SdmaGroup evaluate_group(const SubbandCsi& csi, std::vector<int> members, const LinkParams& link,
                         bool keep_weights = false);

/// Pluggable SDMA grouper.
class Grouper {
 public:
  virtual ~Grouper() = default;
  /// Groups for one subband, best metric first.
  virtual std::vector<SdmaGroup> group_subband(const SubbandCsi& csi, const std::vector<int>& active_ms,
                                               int max_groups) const = 0;
};

/// Greedy best-fit capacity grouper.
///
/// Seeds each group with the best not-yet-covered feasible singleton and keeps
/// adding the MS that raises the group metric most, while it strictly
/// increases and the group has fewer than M members. Groups are produced
/// until every feasible active MS is covered or the cap is reached. Ties go
/// to the lowest MS index.
class GreedyCapacityGrouper final : public Grouper {
 public:
  explicit GreedyCapacityGrouper(LinkParams link) : link_(link) {}

  std::vector<SdmaGroup> group_subband(const SubbandCsi& csi, const std::vector<int>& active_ms,
                                       int max_groups) const override;

 private:
  LinkParams link_;
};

/// Runs \p grouper independently on every subband.
GroupingResult form_groups(const CsiReport& csi, const std::vector<SubbandSpec>& subbands,
                           const std::vector<int>& active_ms, int max_groups_per_subband,
                           const Grouper& grouper);

/// Convenience overload using the greedy grouper.
GroupingResult form_groups(const CsiReport& csi, const std::vector<SubbandSpec>& subbands,
                           const std::vector<int>& active_ms, int max_groups_per_subband,
                           const LinkParams& link);

}  // namespace fssim
