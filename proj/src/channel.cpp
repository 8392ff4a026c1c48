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

#include "fssim/channel.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "fssim/random.hpp"

namespace fssim {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kPi = std::numbers::pi;

double los_probability(double d) {
  // Urban macro LOS probability (WINNER-style C2).
  const double e = std::exp(-d / 63.0);
  return std::min(18.0 / d, 1.0) * (1.0 - e) + e;
}

Eigen::VectorXcd steering_vector(int elements, double spacing, double angle) {
  Eigen::VectorXcd a(elements);
  const double phase_step = 2.0 * kPi * spacing * std::sin(angle);
  for (int m = 0; m < elements; ++m) a(m) = std::polar(1.0, phase_step * m);
  return a;
}

}  // namespace

void ChannelModelConfig::validate() const {
  if (num_users <= 0) throw std::invalid_argument("channel: K must be positive");
  if (num_subcarriers <= 0) throw std::invalid_argument("channel: S must be positive");
  if (array.num_elements <= 0) throw std::invalid_argument("channel: M must be positive");
  if (!(array.element_spacing > 0.0))
    throw std::invalid_argument("channel: element spacing must be positive");
  if (num_taps <= 0) throw std::invalid_argument("channel: need at least one tap");
  if (!(rms_delay_spread_s >= 0.0)) throw std::invalid_argument("channel: negative delay spread");
  if (!(cell_radius_m > min_distance_m) || !(min_distance_m > 0.0))
    throw std::invalid_argument("channel: need 0 < min distance < cell radius");
}

double ChannelRealization::amplitude_gain(int u) const {
  return std::pow(10.0, -pathloss_db.at(u) / 20.0);
}

Eigen::VectorXcd ChannelRealization::channel(int u, int f) const {
  return amplitude_gain(u) * small_scale.at(u).col(f);
}

ChannelRealization generate_channel(const ChannelModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int K = cfg.num_users;
  const int S = cfg.num_subcarriers;
  const int M = cfg.array.num_elements;
  const int L = cfg.num_taps;

  ChannelRealization ch;
  ch.num_users = K;
  ch.num_subcarriers = S;
  ch.num_antennas = M;
  ch.small_scale.resize(K);
  ch.pathloss_db.resize(K);
  ch.distance_m.resize(K);
  ch.direction_rad.resize(K);
  ch.los.resize(K);

  std::vector<double> tap_power(L);
  for (int l = 0; l < L; ++l) tap_power[l] = std::exp(-static_cast<double>(l));
  const double total = std::accumulate(tap_power.begin(), tap_power.end(), 0.0);
  for (double& p : tap_power) p /= total;

  const double wavelength = kSpeedOfLight / cfg.array.carrier_frequency_hz;
  const double reference_loss_db = 20.0 * std::log10(4.0 * kPi / wavelength);
  const double spread_rad = cfg.angular_spread_deg * kPi / 180.0;

  // Baseband frequency of every subcarrier, band centred on 0.
  Eigen::VectorXd freq(S);
  for (int f = 0; f < S; ++f) freq(f) = (f - S / 2) * cfg.subcarrier_spacing_hz;

  for (int u = 0; u < K; ++u) {
    Rng rng(stream_seed(seed, 0x636861u, static_cast<std::uint64_t>(u)));

    const double r0 = cfg.min_distance_m;
    const double r1 = cfg.cell_radius_m;
    const double d = std::sqrt(rng.uniform() * (r1 * r1 - r0 * r0) + r0 * r0);
    const double direction = rng.uniform(-kPi / 3.0, kPi / 3.0);
    const double los_draw = rng.uniform();
    bool los = false;
    switch (cfg.los_mode) {
      case LosMode::los: los = true; break;
      case LosMode::nlos: los = false; break;
      case LosMode::mixed: los = los_draw < los_probability(d); break;
    }
    ch.distance_m[u] = d;
    ch.direction_rad[u] = direction;
    ch.los[u] = los;
    const double exponent = los ? cfg.pathloss_exponent_los : cfg.pathloss_exponent_nlos;
    ch.pathloss_db[u] = cfg.unit_pathloss ? 0.0 : reference_loss_db + 10.0 * exponent * std::log10(d);

    const double k_factor = los ? std::pow(10.0, cfg.ricean_k_db / 10.0) : 0.0;
    const double scatter_scale = 1.0 / (1.0 + k_factor);

    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(M, S);
    for (int l = 0; l < L; ++l) {
      const double angle = direction + spread_rad * rng.normal();
      const double sigma = std::sqrt(tap_power[l] * scatter_scale / 2.0);
      const std::complex<double> alpha(sigma * rng.normal(), sigma * rng.normal());
      const double delay = l * cfg.rms_delay_spread_s;
      const Eigen::VectorXcd a = alpha * steering_vector(M, cfg.array.element_spacing, angle);
      for (int f = 0; f < S; ++f)
        H.col(f) += a * std::polar(1.0, -2.0 * kPi * freq(f) * delay);
    }
    if (los) {
      const std::complex<double> direct =
          std::sqrt(k_factor * scatter_scale) * std::polar(1.0, -2.0 * kPi * d / wavelength);
      H.colwise() += direct * steering_vector(M, cfg.array.element_spacing, direction);
    }
    ch.small_scale[u] = std::move(H);
  }
  return ch;
}

CsiReport decimate_csi(const ChannelRealization& ch, int decimation, double noise_power) {
  if (decimation < 1) throw std::invalid_argument("CSI decimation must be >= 1");
  if (decimation > ch.num_subcarriers)
    throw std::invalid_argument("CSI decimation exceeds the number of subcarriers");

  CsiReport csi;
  csi.decimation = decimation;
  csi.noise_power = noise_power;
  for (int f = 0; f < ch.num_subcarriers; f += decimation) csi.subcarriers.push_back(f);

  const auto n = static_cast<Eigen::Index>(csi.subcarriers.size());
  csi.samples.reserve(ch.num_users);
  for (int u = 0; u < ch.num_users; ++u) {
    Eigen::MatrixXcd s(ch.num_antennas, n);
    for (Eigen::Index i = 0; i < n; ++i) s.col(i) = ch.channel(u, csi.subcarriers[i]);
    csi.samples.push_back(std::move(s));
  }
  return csi;
}

SubbandCsi subband_csi(const CsiReport& csi, const SubbandSpec& subband) {
  std::vector<Eigen::Index> picked;
  SubbandCsi out;
  out.subband = subband.index;
  out.noise_power = csi.noise_power;
  for (std::size_t i = 0; i < csi.subcarriers.size(); ++i) {
    if (subband.contains_subcarrier(csi.subcarriers[i])) {
      picked.push_back(static_cast<Eigen::Index>(i));
      out.subcarriers.push_back(csi.subcarriers[i]);
    }
  }
  if (picked.empty()) throw std::invalid_argument("insufficient CSI resolution");

  out.samples.reserve(csi.samples.size());
  for (const auto& s : csi.samples) out.samples.push_back(s(Eigen::all, picked));
  return out;
}

Eigen::VectorXd frequency_autocorrelation(const Eigen::MatrixXcd& response) {
  const auto S = static_cast<std::size_t>(response.cols());
  const std::size_t n = std::bit_ceil(2 * S);
  Eigen::FFT<double> fft;

  std::vector<std::complex<double>> acc(n, 0.0);
  std::vector<std::complex<double>> padded(n), spectrum, lagged;
  for (Eigen::Index m = 0; m < response.rows(); ++m) {
    std::fill(padded.begin(), padded.end(), 0.0);
    for (std::size_t f = 0; f < S; ++f) padded[f] = response(m, static_cast<Eigen::Index>(f));
    fft.fwd(spectrum, padded);
    for (auto& x : spectrum) x = std::norm(x);
    fft.inv(lagged, spectrum);
    for (std::size_t k = 0; k < n; ++k) acc[k] += lagged[k];
  }

  Eigen::VectorXd r(S);
  const double r0 = std::abs(acc[0]);
  for (std::size_t k = 0; k < S; ++k) r(static_cast<Eigen::Index>(k)) = r0 > 0 ? std::abs(acc[k]) / r0 : 0.0;
  return r;
}

double coherence_bandwidth_hz(const Eigen::MatrixXcd& response, double subcarrier_spacing_hz) {
  const Eigen::VectorXd r = frequency_autocorrelation(response);
  for (Eigen::Index k = 1; k < r.size(); ++k)
    if (r(k) < 0.5) return static_cast<double>(k) * subcarrier_spacing_hz;
  return static_cast<double>(r.size()) * subcarrier_spacing_hz;
}

namespace {

static_assert(std::endian::native == std::endian::little, "channel dump assumes little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw std::runtime_error("channel dump truncated");
  return v;
}

constexpr std::array<char, 4> kMagic{'F', 'S', 'C', 'H'};

}  // namespace

void write_channel_dump(std::ostream& out, const ChannelRealization& ch) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ch.num_users));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ch.num_subcarriers));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ch.num_antennas));
  for (int u = 0; u < ch.num_users; ++u) {
    const double g = ch.amplitude_gain(u);
    for (int f = 0; f < ch.num_subcarriers; ++f)
      for (int m = 0; m < ch.num_antennas; ++m) {
        const std::complex<double> h = g * ch.small_scale[u](m, f);
        put(out, h.real());
        put(out, h.imag());
      }
  }
}

ChannelRealization read_channel_dump(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error("not a channel dump");
  if (get<std::uint32_t>(in) != 1) throw std::runtime_error("unsupported channel dump version");
  ChannelRealization ch;
  ch.num_users = static_cast<int>(get<std::uint32_t>(in));
  ch.num_subcarriers = static_cast<int>(get<std::uint32_t>(in));
  ch.num_antennas = static_cast<int>(get<std::uint32_t>(in));
  // The dump carries composite coefficients, so they come back as
  // small-scale values with 0 dB pathloss.
  ch.pathloss_db.assign(ch.num_users, 0.0);
  ch.distance_m.assign(ch.num_users, 0.0);
  ch.direction_rad.assign(ch.num_users, 0.0);
  ch.los.assign(ch.num_users, false);
  for (int u = 0; u < ch.num_users; ++u) {
    Eigen::MatrixXcd H(ch.num_antennas, ch.num_subcarriers);
    for (int f = 0; f < ch.num_subcarriers; ++f)
      for (int m = 0; m < ch.num_antennas; ++m) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        H(m, f) = {re, im};
      }
    ch.small_scale.push_back(std::move(H));
  }
  return ch;
}

}  // namespace fssim
