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

#include "fssim/grouping.hpp"

#include <algorithm>
#include <stdexcept>

namespace fssim {

std::vector<int> GroupingResult::best_bytes_per_slot(int num_users) const {
  std::vector<int> best(static_cast<std::size_t>(num_users), 0);
  for (const auto& groups : per_subband)
    for (const auto& g : groups)
      for (std::size_t i = 0; i < g.members.size(); ++i) {
        const auto ms = static_cast<std::size_t>(g.members[i]);
        if (ms >= best.size()) best.resize(ms + 1, 0);
        best[ms] = std::max(best[ms], g.bytes_per_slot(i));
      }
  return best;
}

int group_metric(const SdmaGroup& group) {
  int score = 0;
  for (const auto& link : group.links) score += link.bytes_per_slot;
  return score;
}

SdmaGroup evaluate_group(const SubbandCsi& csi, std::vector<int> members, const LinkParams& link,
                         bool keep_weights) {
  if (link.table == nullptr) throw std::invalid_argument("evaluate_group: no MCS table");
  if (members.empty()) throw std::invalid_argument("evaluate_group: empty group");

  const auto G = static_cast<Eigen::Index>(members.size());
  const Eigen::Index M = csi.samples.at(members.front()).rows();
  const Eigen::Index n = csi.num_samples();
  if (G > M) throw std::invalid_argument("evaluate_group: group larger than the antenna count");

  SdmaGroup group;
  group.subband = csi.subband;
  group.members = std::move(members);

  const double per_member_power = link.total_power / static_cast<double>(G);
  Eigen::MatrixXd sinr(G, n);
  Eigen::MatrixXcd H(M, G);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index g = 0; g < G; ++g) H.col(g) = csi.samples[group.members[g]].col(b);
    Eigen::MatrixXcd W = minmse_weights(H, csi.noise_power, link.total_power);
    sinr.col(b) = compute_sinr(W, H, per_member_power, csi.noise_power);
    if (keep_weights) group.weights.push_back(std::move(W));
  }

  group.links.resize(static_cast<std::size_t>(G));
  for (Eigen::Index g = 0; g < G; ++g) {
    auto& lr = group.links[static_cast<std::size_t>(g)];
    lr.sinr = sinr.row(g).transpose();
    const McsSelection sel = select_mcs(lr.sinr, *link.table);
    lr.effective_sinr = sel.effective_sinr;
    lr.mcs = sel.index;
    lr.bytes_per_slot = sel.index ? (*link.table)[*sel.index].bytes_per_slot : 0;
  }
  group.metric = group_metric(group);
  return group;
}

std::vector<SdmaGroup> GreedyCapacityGrouper::group_subband(const SubbandCsi& csi,
                                                            const std::vector<int>& active_ms,
                                                            int max_groups) const {
  if (max_groups < 1) throw std::invalid_argument("max_groups_per_subband must be >= 1");
  std::vector<SdmaGroup> groups;
  if (active_ms.empty() || csi.num_users() == 0) return groups;

  std::vector<int> active = active_ms;
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  const int antennas = static_cast<int>(csi.samples.front().rows());

  std::vector<SdmaGroup> singles;
  singles.reserve(active.size());
  for (int u : active) singles.push_back(evaluate_group(csi, {u}, link_));

  std::vector<bool> covered(active.size(), false);
  const auto position = [&](int ms) {
    return static_cast<std::size_t>(std::lower_bound(active.begin(), active.end(), ms) - active.begin());
  };

  while (static_cast<int>(groups.size()) < max_groups) {
    std::optional<std::size_t> seed;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (covered[i] || singles[i].metric <= 0) continue;
      if (!seed || singles[i].metric > singles[*seed].metric) seed = i;
    }
    if (!seed) break;

    SdmaGroup group = singles[*seed];
    while (group.size() < antennas) {
      std::optional<SdmaGroup> best;
      for (int c : active) {
        if (std::find(group.members.begin(), group.members.end(), c) != group.members.end()) continue;
        std::vector<int> trial = group.members;
        trial.push_back(c);
        SdmaGroup cand = evaluate_group(csi, std::move(trial), link_);
        if (!best || cand.metric > best->metric) best = std::move(cand);
      }
      if (!best || best->metric <= group.metric) break;
      group = std::move(*best);
    }

    covered[*seed] = true;
    for (std::size_t i = 0; i < group.members.size(); ++i)
      if (group.bytes_per_slot(i) > 0) covered[position(group.members[i])] = true;
    groups.push_back(evaluate_group(csi, group.members, link_, true));
  }

  std::stable_sort(groups.begin(), groups.end(),
                   [](const SdmaGroup& a, const SdmaGroup& b) { return a.metric > b.metric; });
  return groups;
}

GroupingResult form_groups(const CsiReport& csi, const std::vector<SubbandSpec>& subbands,
                           const std::vector<int>& active_ms, int max_groups_per_subband,
                           const Grouper& grouper) {
  GroupingResult result;
  result.per_subband.reserve(subbands.size());
  for (const auto& sb : subbands)
    result.per_subband.push_back(
        grouper.group_subband(subband_csi(csi, sb), active_ms, max_groups_per_subband));
  return result;
}

GroupingResult form_groups(const CsiReport& csi, const std::vector<SubbandSpec>& subbands,
                           const std::vector<int>& active_ms, int max_groups_per_subband,
                           const LinkParams& link) {
  return form_groups(csi, subbands, active_ms, max_groups_per_subband, GreedyCapacityGrouper(link));
}

}  // namespace fssim
