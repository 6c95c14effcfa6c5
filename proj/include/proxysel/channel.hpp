// Copyright 2026 The ProxySel Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROXYSEL_CHANNEL_HPP
#define PROXYSEL_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proxysel/parallel.hpp"
#include "proxysel/ru_tree.hpp"

namespace proxysel {

using cplx = std::complex<double>;

/// Per-subcarrier downlink channel matrices for one topology.
///
/// Storage is subcarrier-major, then user, then antenna, so the channel
/// vector of one user on one tone is contiguous. Immutable once filled.
class ChannelSet {
 public:
  ChannelSet() = default;
  ChannelSet(int n_antennas, int n_users, int n_subcarriers);

  int n_antennas() const { return n_antennas_; }
  int n_users() const { return n_users_; }
  int n_subcarriers() const { return n_subcarriers_; }
  double subcarrier_spacing_hz() const { return spacing_hz_; }

  const cplx* h(int subcarrier, int user) const {
    return data_.data() +
           (static_cast<std::size_t>(subcarrier) * n_users_ + user) *
               n_antennas_;
  }
  cplx* h(int subcarrier, int user) {
    return data_.data() +
           (static_cast<std::size_t>(subcarrier) * n_users_ + user) *
               n_antennas_;
  }

  /// Rejects non-finite entries and all-zero user columns. Throws
  /// DomainError naming user/antenna/subcarrier.
  void validate() const;

  bool operator==(const ChannelSet& other) const;

 private:
  int n_antennas_ = 0;
  int n_users_ = 0;
  int n_subcarriers_ = 0;
  double spacing_hz_ = 78.125e3;
  std::vector<cplx> data_;
};

/// Tapped-delay-line Rayleigh model parameters.
///
/// Tap t carries power p_t proportional to exp(-t / delay_spread_taps),
/// normalized to sum to one before the per-user large-scale gain.
struct SynthChannelParams {
  int n_taps = 8;
  double delay_spread_taps = 2.0;
  std::optional<std::vector<double>> per_user_gain_db;  // size K when set
  // Optional distributed-antenna asymmetry: per-user gain offsets for
  // antenna heads of 4 consecutive antennas. Size K x (N_T / 4) when set.
  std::optional<std::vector<std::vector<double>>> per_user_head_gain_db;
  // Optional line-of-sight ray (Rician K-factor, dB). When set, tap 0 gains
  // a half-wavelength ULA steering component at a per-user random angle and
  // the diffuse taps share the remaining power, so E[||h||^2] is unchanged.
  // Unset keeps the pure Rayleigh model. A LoS ray makes the pairwise
  // correlations heterogeneous (beam-separated users become near-orthogonal,
  // co-directional users strongly correlated) instead of concentrating near
  // the i.i.d. Rayleigh mean of ~1/sqrt(N_T).
  std::optional<double> rician_k_db;
  std::uint64_t seed = 0;
};

/// Draws a frequency-selective Rayleigh channel set. Deterministic in
/// (params, N_T, K, L): taps are drawn from one SplitMix64 stream in a
/// fixed order, the DFT to the frequency domain is exact arithmetic.
ChannelSet synth_channels(const SynthChannelParams& params, int n_antennas,
                          int n_users, int levels);

/// Binary ("AXCH1" magic, little-endian f64) or JSON by file extension.
void save_channels(const ChannelSet& cs, const std::string& path);
ChannelSet load_channels(const std::string& path);

/// |h_i[n]^H h_j[n]| / (||h_i[n]|| * ||h_j[n]||), in [0, 1].
/// Throws DomainError on i == j or a zero-norm vector.
double correlation(const ChannelSet& cs, int user_i, int user_j,
                   int subcarrier);

/// Mean of correlation() over the RU's tone range.
double avg_correlation(const ChannelSet& cs, int user_i, int user_j,
                       const RuId& ru);

/// Squared Euclidean norm of h_k[n].
double strength(const ChannelSet& cs, int user, int subcarrier);

/// Per-RU average pairwise correlations, K x K x Q, built once per
/// topology. Symmetric in the user pair; read-only after construction.
class CorrelationTable {
 public:
  CorrelationTable() = default;

  int n_users() const { return n_users_; }
  int ru_count() const { return ru_count_; }

  double avg(int user_i, int user_j, int q) const {
    return table_[(static_cast<std::size_t>(q - 1) * n_users_ + user_i) *
                      n_users_ +
                  user_j];
  }

 private:
  friend CorrelationTable build_correlation_table(const ChannelSet&,
                                                  const RuTree&, ExecPolicy);
  int n_users_ = 0;
  int ru_count_ = 0;
  std::vector<double> table_;
};

CorrelationTable build_correlation_table(const ChannelSet& cs,
                                         const RuTree& tree,
                                         ExecPolicy policy = ExecPolicy::kParallel);

/// K x F table of squared channel norms.
class StrengthTable {
 public:
  StrengthTable() = default;

  double at(int user, int subcarrier) const {
    return table_[static_cast<std::size_t>(user) * n_subcarriers_ +
                  subcarrier];
  }
  int n_users() const { return n_users_; }
  int n_subcarriers() const { return n_subcarriers_; }

 private:
  friend StrengthTable build_strength_table(const ChannelSet&, ExecPolicy);
  int n_users_ = 0;
  int n_subcarriers_ = 0;
  std::vector<double> table_;
};

StrengthTable build_strength_table(const ChannelSet& cs,
                                   ExecPolicy policy = ExecPolicy::kParallel);

}  // namespace proxysel

#endif  // PROXYSEL_CHANNEL_HPP
