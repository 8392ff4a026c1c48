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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fssim/geometry.hpp"

namespace fssim {

struct AntennaArrayConfig {
  int num_elements = 4;             // M
  double element_spacing = 0.5;     // wavelengths
  double carrier_frequency_hz = 2.5e9;
};

enum class LosMode { los, nlos, mixed };

/// Parameters of the synthetic tapped-delay-line channel.
///
/// Each MS sees L taps with an exponential power-delay profile. Tap l sits at
/// delay l * rms_delay_spread and carries power proportional to exp(-l),
/// normalized to unit total power. Every tap leaves the array along its own
/// angle of departure, spread around the MS direction, and is faded with a
/// circular Gaussian coefficient. LOS stations add a deterministic tap at
/// zero delay along the MS direction, weighted by the Ricean K-factor.
struct ChannelModelConfig {
  int num_users = 12;                // K
  int num_subcarriers = 1024;        // S
  double subcarrier_spacing_hz = 10937.5;
  AntennaArrayConfig array;

  int num_taps = 6;                  // L
  double rms_delay_spread_s = 0.5e-6;
  double angular_spread_deg = 10.0;
  double ricean_k_db = 7.0;
  LosMode los_mode = LosMode::los;

  double cell_radius_m = 288.0;
  double min_distance_m = 35.0;
  double pathloss_exponent_los = 2.6;
  double pathloss_exponent_nlos = 3.5;
  /// Disable placement and pathloss; every MS gets 0 dB. Used by tests.
  bool unit_pathloss = false;

  void validate() const;
};

/// Frequency response of every MS, one M x S matrix per MS. The matrices
/// hold the small-scale response (unit average power per antenna and
/// subcarrier); pathloss is kept separately per MS.
struct ChannelRealization {
  int num_users = 0;
  int num_subcarriers = 0;
  int num_antennas = 0;
  std::vector<Eigen::MatrixXcd> small_scale;
  std::vector<double> pathloss_db;
  std::vector<double> distance_m;
  std::vector<double> direction_rad;
  std::vector<bool> los;

  /// Amplitude scale sqrt(10^(-PL/10)) of MS u.
  double amplitude_gain(int u) const;
  /// Composite channel of MS u at subcarrier f, pathloss included.
  Eigen::VectorXcd channel(int u, int f) const;
};

ChannelRealization generate_channel(const ChannelModelConfig& cfg, std::uint64_t seed);

/// Decimated channel state known at the BS: the composite channel of every
/// Dth subcarrier, starting at subcarrier 0. No estimation noise.
struct CsiReport {
  int decimation = 1;
  double noise_power = 0.0;       // sigma^2, Watts
  std::vector<int> subcarriers;   // sampled indices, ascending
  std::vector<Eigen::MatrixXcd> samples;  // per MS, M x subcarriers.size()

  int num_users() const { return static_cast<int>(samples.size()); }
  int num_samples() const { return static_cast<int>(subcarriers.size()); }
};

CsiReport decimate_csi(const ChannelRealization& ch, int decimation, double noise_power);

/// CSI restricted to one subband: per MS an M x n matrix of the samples that
/// fall inside the subband's subcarrier range.
struct SubbandCsi {
  int subband = 0;
  double noise_power = 0.0;
  std::vector<int> subcarriers;
  std::vector<Eigen::MatrixXcd> samples;

  int num_users() const { return static_cast<int>(samples.size()); }
  int num_samples() const { return static_cast<int>(subcarriers.size()); }
};

/// Throws std::invalid_argument("insufficient CSI resolution") when no
/// sample lands in the subband.
SubbandCsi subband_csi(const CsiReport& csi, const SubbandSpec& subband);

/// Normalized frequency autocorrelation magnitude |R(k)|/R(0) of one MS,
/// summed over antennas, for lags 0..S-1 (biased estimator). Computed with
/// a zero-padded FFT.
Eigen::VectorXd frequency_autocorrelation(const Eigen::MatrixXcd& response);

/// Width (Hz) of the first lag where the normalized autocorrelation drops
/// below 0.5. Returns the full band if it never does.
double coherence_bandwidth_hz(const Eigen::MatrixXcd& response, double subcarrier_spacing_hz);

/// Binary dump: magic "FSCH", u32 version=1, u32 K, u32 S, u32 M, then for
/// each MS, each subcarrier, each antenna: re, im as little-endian f64.
/// Values are the composite channel (pathloss applied).
void write_channel_dump(std::ostream& out, const ChannelRealization& ch);
ChannelRealization read_channel_dump(std::istream& in);

}  // namespace fssim
