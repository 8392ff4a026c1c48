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

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "fssim/experiment.hpp"
#include "fssim/log.hpp"

namespace fssim {

namespace {

struct Moments {
  double mean = 0.0;
  double ci95 = std::numeric_limits<double>::quiet_NaN();
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  if (x.empty()) return m;
  for (double v : x) m.mean += v;
  m.mean /= static_cast<double>(x.size());
  if (x.size() < 2) return m;
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  const double n = static_cast<double>(x.size());
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  m.ci95 = boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(n);
  return m;
}

}  // namespace

std::vector<CellSummary> summarize(const std::vector<RunMetrics>& rows) {
  using Key = std::tuple<double, int, int, std::string, int>;  // bw, M, K, los, SB
  std::map<Key, std::vector<const RunMetrics*>> cells;
  for (const auto& r : rows)
    if (r.status == "ok") cells[{r.bandwidth_mhz, r.antennas, r.users, r.los, r.subbands}].push_back(&r);

  std::vector<CellSummary> out;
  for (const auto& [key, members] : cells) {
    CellSummary c;
    std::tie(c.bandwidth_mhz, c.antennas, c.users, c.los, c.subbands) = key;
    c.n = static_cast<int>(members.size());
    std::vector<double> goodput, overhead, columns, fairness;
    for (const auto* r : members) {
      goodput.push_back(r->goodput_bytes_per_s);
      overhead.push_back(r->map_overhead);
      columns.push_back(r->map_column_overhead);
      fairness.push_back(r->jain_fairness);
    }
    const Moments g = moments(goodput), o = moments(overhead);
    c.goodput_mean = g.mean;
    c.goodput_ci95 = g.ci95;
    c.overhead_mean = o.mean;
    c.overhead_ci95 = o.ci95;
    c.column_overhead_mean = moments(columns).mean;
    c.fairness_mean = moments(fairness).mean;
    out.push_back(c);
  }

  for (auto& c : out) {
    const CellSummary* baseline = nullptr;
    for (const auto& b : out)
      if (b.subbands == 1 && b.bandwidth_mhz == c.bandwidth_mhz && b.antennas == c.antennas &&
          b.users == c.users && b.los == c.los)
        baseline = &b;
    if (baseline == nullptr) {
      log_warning(fmt::format("no SB=1 baseline for bw={} M={} K={} los={}; gain omitted", c.bandwidth_mhz,
                              c.antennas, c.users, c.los));
      continue;
    }
    if (baseline->goodput_mean > 0.0) {
      c.has_gain = true;
      c.fss_gain = c.goodput_mean / baseline->goodput_mean - 1.0;
    }
  }
  return out;
}

std::string format_gain(double gain) { return fmt::format("{:.1f}%", 100.0 * gain); }

namespace {

std::string ci_text(double ci, const char* spec) {
  return std::isnan(ci) ? std::string("n/a") : fmt::format(fmt::runtime(spec), ci);
}

}  // namespace

std::string report(const std::vector<CellSummary>& cells) {
  std::string out = fmt::format("{:>7} {:>3} {:>4} {:>6} {:>3} {:>5} {:>14} {:>12} {:>9} {:>9} {:>8} {:>9}\n",
                                "bw_MHz", "M", "K", "los", "SB", "n", "goodput_B/s", "ci95", "map_ovh", "ci95",
                                "jain", "fss_gain");
  for (const auto& c : cells) {
    out += fmt::format("{:>7} {:>3} {:>4} {:>6} {:>3} {:>5} {:>14.1f} {:>12} {:>9.4f} {:>9} {:>8.3f} {:>9}\n",
                       c.bandwidth_mhz, c.antennas, c.users, c.los, c.subbands, c.n, c.goodput_mean,
                       ci_text(c.goodput_ci95, "{:.1f}"), c.overhead_mean, ci_text(c.overhead_ci95, "{:.4f}"),
                       c.fairness_mean, c.has_gain ? format_gain(c.fss_gain) : std::string("-"));
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells) {
  out << "bandwidth_mhz,antennas,users,los,subbands,n,goodput_mean,goodput_ci95,map_overhead_mean,"
         "map_overhead_ci95,map_column_overhead_mean,jain_mean,fss_gain\n";
  for (const auto& c : cells)
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", c.bandwidth_mhz, c.antennas, c.users, c.los,
                       c.subbands, c.n, c.goodput_mean, c.goodput_ci95, c.overhead_mean, c.overhead_ci95,
                       c.column_overhead_mean, c.fairness_mean,
                       c.has_gain ? fmt::format("{}", c.fss_gain) : std::string());
}

}  // namespace fssim
