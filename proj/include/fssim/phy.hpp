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

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fssim {

// ---------------------------------------------------------------------------
// Precoding and SINR
//
// Channels of an SDMA group are stacked as the columns of an M x G matrix, so
// column u holds H_u. Weights use the same layout: column u is W_u.
// ---------------------------------------------------------------------------

/// MinMSE transmit weights for the members stacked in \p channels.
///
/// Raw weights are (H H^H + (G sigma^2 / P_tot) I)^-1 H, evaluated through the
/// equivalent G x G system H (H^H H + alpha I)^-1; each column is then scaled to
/// unit norm. With sigma^2 = 0 this is zero forcing and throws
/// "degenerate zero-noise inversion" if the member channels are linearly
/// dependent.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> minmse_weights(
    const Eigen::MatrixBase<Derived>& channels,
    typename Eigen::NumTraits<typename Derived::Scalar>::Real noise_power,
    typename Eigen::NumTraits<typename Derived::Scalar>::Real total_power) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  const Eigen::Index M = channels.rows();
  const Eigen::Index G = channels.cols();
  if (G < 1) throw std::invalid_argument("minmse_weights: empty group");
  if (G > M) throw std::invalid_argument("minmse_weights: more members than antennas");
  if (!channels.allFinite()) throw std::invalid_argument("minmse_weights: non-finite channel");
  if (noise_power < Real(0) || !(total_power > Real(0)))
    throw std::invalid_argument("minmse_weights: need sigma^2 >= 0 and P_tot > 0");

  const Real alpha = static_cast<Real>(G) * noise_power / total_power;
  Matrix gram = channels.adjoint() * channels;
  gram.diagonal().array() += alpha;

  Matrix raw;
  if (alpha > Real(0)) {
    raw = channels * gram.ldlt().solve(Matrix::Identity(G, G));
  } else {
    Eigen::FullPivLU<Matrix> lu(gram);
    if (!lu.isInvertible()) throw std::domain_error("degenerate zero-noise inversion");
    raw = channels * lu.inverse();
  }
  for (Eigen::Index g = 0; g < G; ++g) {
    const Real n = raw.col(g).norm();
    if (!(n > Real(0))) throw std::domain_error("degenerate zero-noise inversion");
    raw.col(g) /= n;
  }
  return raw;
}

/// Per-member SINR of an SDMA group on one frequency resource:
///
///   gamma_u = P_u |W_u^H H_u|^2 / (sigma^2 + sum_{v != u} P_u |W_v^H H_u|^2)
///
/// \p power holds the received-power scaling P_u of every member (the
/// interference terms use the victim's P_u, as written in the model; with an
/// equal split this is the common per-member power).
template <typename DerivedW, typename DerivedH, typename DerivedP>
Eigen::Matrix<typename Eigen::NumTraits<typename DerivedH::Scalar>::Real, Eigen::Dynamic, 1>
compute_sinr(const Eigen::MatrixBase<DerivedW>& weights, const Eigen::MatrixBase<DerivedH>& channels,
             const Eigen::MatrixBase<DerivedP>& power,
             typename Eigen::NumTraits<typename DerivedH::Scalar>::Real noise_power) {
  using Real = typename Eigen::NumTraits<typename DerivedH::Scalar>::Real;
  if (!(noise_power > Real(0))) throw std::invalid_argument("compute_sinr: sigma^2 must be positive");
  if (weights.rows() != channels.rows() || weights.cols() != channels.cols() ||
      power.size() != channels.cols())
    throw std::invalid_argument("compute_sinr: dimension mismatch");

  // gain(v, u) = |W_v^H H_u|^2
  const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> gain =
      (weights.adjoint() * channels).cwiseAbs2();
  const Eigen::Index G = channels.cols();
  Eigen::Matrix<Real, Eigen::Dynamic, 1> sinr(G);
  for (Eigen::Index u = 0; u < G; ++u) {
    const Real p = power(u);
    const Real interference = gain.col(u).sum() - gain(u, u);
    sinr(u) = p * gain(u, u) / (noise_power + p * interference);
  }
  return sinr;
}

/// Equal-power overload: every member gets \p per_member_power.
template <typename DerivedW, typename DerivedH>
Eigen::Matrix<typename Eigen::NumTraits<typename DerivedH::Scalar>::Real, Eigen::Dynamic, 1>
compute_sinr(const Eigen::MatrixBase<DerivedW>& weights, const Eigen::MatrixBase<DerivedH>& channels,
             typename Eigen::NumTraits<typename DerivedH::Scalar>::Real per_member_power,
             typename Eigen::NumTraits<typename DerivedH::Scalar>::Real noise_power) {
  using Real = typename Eigen::NumTraits<typename DerivedH::Scalar>::Real;
  const Eigen::Matrix<Real, Eigen::Dynamic, 1> p =
      Eigen::Matrix<Real, Eigen::Dynamic, 1>::Constant(channels.cols(), per_member_power);
  return compute_sinr(weights, channels, p, noise_power);
}

// ---------------------------------------------------------------------------
// EESM
// ---------------------------------------------------------------------------

/// gamma_eff = -beta ln( mean_n exp(-gamma_n / beta) ), all values linear.
///
/// Evaluated relative to the smallest sample so the exponentials never
/// underflow for high SINR; the result is kept within [min, mean].
template <typename Derived>
typename Derived::Scalar eesm_effective_sinr(const Eigen::DenseBase<Derived>& samples,
                                             typename Derived::Scalar beta) {
  using Real = typename Derived::Scalar;
  if (samples.size() == 0) throw std::invalid_argument("eesm: empty sample list");
  if (!(beta > Real(0))) throw std::invalid_argument("eesm: beta must be positive");
  const Real lo = samples.minCoeff();
  if (lo < Real(0)) throw std::invalid_argument("eesm: negative SINR sample");
  const Real mean_exp = (-(samples.derived().array() - lo) / beta).exp().mean();
  const Real eff = lo - beta * std::log(mean_exp);
  return std::min(eff, samples.mean());
}

inline double eesm_effective_sinr(const std::vector<double>& samples, double beta) {
  return eesm_effective_sinr(Eigen::Map<const Eigen::VectorXd>(samples.data(),
                                                               static_cast<Eigen::Index>(samples.size())),
                             beta);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// ---------------------------------------------------------------------------
// Modulation and coding
// ---------------------------------------------------------------------------

/// Data symbols carried by one slot (one subchannel x one column).
inline constexpr int kDataSymbolsPerSlot = 48;

struct McsEntry {
  std::string name;
  double min_effective_sinr_db = 0.0;
  int bytes_per_slot = 0;
  double eesm_beta = 1.0;
};

/// Link adaptation table, ordered from most robust to fastest.
class McsTable {
 public:
  McsTable() = default;
  /// Throws std::invalid_argument unless thresholds strictly increase,
  /// payloads never decrease and every field is positive.
  explicit McsTable(std::vector<McsEntry> entries);

  /// QPSK 1/2 ... 64QAM 3/4. Thresholds are calibration values.
  static McsTable defaults();
  /// JSON array of {"name", "threshold_db", "bytes_per_slot", "beta"}.
  static McsTable from_json_file(const std::string& path);
  static McsTable from_json_text(const std::string& text);

  const std::vector<McsEntry>& entries() const { return entries_; }
  const McsEntry& operator[](std::size_t i) const { return entries_.at(i); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<McsEntry> entries_;
};

/// Payload of one slot at \p mcs.
inline int slot_capacity_bytes(const McsEntry& mcs) { return mcs.bytes_per_slot; }

/// Payload of a slot of 48 data symbols: bits/symbol x code rate / 8.
constexpr int slot_payload_bytes(int bits_per_symbol, int rate_num, int rate_den) {
  return kDataSymbolsPerSlot * bits_per_symbol * rate_num / (rate_den * 8);
}

struct McsSelection {
  std::optional<int> index;      // none: even the most robust entry fails
  double effective_sinr = 0.0;   // linear, with the beta of the chosen (or lowest) entry
};

/// Scans from the fastest entry down and returns the first one whose
/// EESM-compressed SINR (with that entry's beta) meets its threshold.
template <typename Derived>
McsSelection select_mcs(const Eigen::DenseBase<Derived>& samples, const McsTable& table) {
  if (table.empty()) throw std::invalid_argument("select_mcs: empty MCS table");
  McsSelection sel;
  for (int i = static_cast<int>(table.size()) - 1; i >= 0; --i) {
    const double eff = eesm_effective_sinr(samples, table[i].eesm_beta);
    sel.effective_sinr = eff;
    if (eff > 0.0 && linear_to_db(eff) >= table[i].min_effective_sinr_db) {
      sel.index = i;
      return sel;
    }
  }
  return sel;
}

inline McsSelection select_mcs(const std::vector<double>& samples, const McsTable& table) {
  return select_mcs(Eigen::Map<const Eigen::VectorXd>(samples.data(),
                                                      static_cast<Eigen::Index>(samples.size())),
                    table);
}

/// Per-member link abstraction for one subband.
struct LinkResult {
  Eigen::VectorXd sinr;           // per CSI sample, linear
  double effective_sinr = 0.0;    // linear, from the selection
  std::optional<int> mcs;         // index into the table
  int bytes_per_slot = 0;         // 0 when infeasible
};

}  // namespace fssim
