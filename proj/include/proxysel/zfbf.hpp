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

#ifndef PROXYSEL_ZFBF_HPP
#define PROXYSEL_ZFBF_HPP

#include <vector>

#include <Eigen/Dense>

#include "proxysel/channel.hpp"
#include "proxysel/parallel.hpp"
#include "proxysel/ru_tree.hpp"

namespace proxysel {

/// Zero-forcing beamformers for one user group on one subcarrier.
///
/// In pseudoinverse form (normalized == false) the columns satisfy
/// h_k^H w_i = delta_ki; normalized() rescales each column to unit norm,
/// which is the projected-direction form.
struct BeamformerSet {
  std::vector<int> group;  // ordered user indices, may be empty
  Eigen::MatrixXcd w;      // n_antennas x |group|
  bool normalized = false;

  BeamformerSet unit_normalized() const;
};

/// Per-user and total rates of one beamformed transmission.
struct RateBreakdown {
  std::vector<std::pair<int, double>> per_user_bits;  // (user, bits/s/Hz)
  double total_bits = 0.0;
  double snr_tx = 0.0;
};

/// Channel columns of `group` on one subcarrier, n_antennas x m.
Eigen::MatrixXcd group_channel_matrix(const ChannelSet& cs,
                                      const std::vector<int>& group,
                                      int subcarrier);

/// Pseudoinverse ZF beamformer of the given channel columns.
/// Throws SingularityError if the columns are rank deficient or the
/// condition number exceeds 1e12.
BeamformerSet zf_beamformer(const Eigen::MatrixXcd& channels);
BeamformerSet zf_beamformer(const ChannelSet& cs, const std::vector<int>& group,
                            int subcarrier);

/// Squared norms of each user's channel projected onto the orthogonal
/// complement of the other group members' channels, computed as the
/// reciprocal diagonal of the inverse Gram matrix. One eigendecomposition
/// of the m x m Gram serves the whole group. Throws SingularityError on a
/// numerically singular group.
std::vector<double> zf_effective_gains(const Eigen::MatrixXcd& channels);

/// Same quantity through the explicit complement projector; the slow
/// reference route used to cross-check zf_effective_gains.
double zf_effective_gain_projector(const Eigen::MatrixXcd& channels,
                                   int member);

/// I - B (B^H B)^{-1} B^H for the columns of `others`.
Eigen::MatrixXcd complement_projector(const Eigen::MatrixXcd& others,
                                      int n_antennas);

/// ZF rate of one group member on one subcarrier:
/// log2(1 + snr_tx * projected-norm^2).
double zf_user_rate(const ChannelSet& cs, int subcarrier,
                    const std::vector<int>& group, int member, double snr_tx);

/// General interference-aware rate of arbitrary beamformers, interference
/// treated as noise. Cross-validates the interference-free ZF rates.
RateBreakdown bf_rate_general(const Eigen::MatrixXcd& channels,
                              const Eigen::MatrixXcd& beamformers,
                              const std::vector<double>& per_stream_powers);

/// Exact ZF group rate summed over the RU's tones, per-user breakdown
/// included. Throws SingularityError naming the first offending tone.
RateBreakdown zf_group_rate_on_ru(const ChannelSet& cs,
                                  const std::vector<int>& group,
                                  const RuId& ru, double snr_tx,
                                  ExecPolicy policy = ExecPolicy::kParallel);

/// As zf_group_rate_on_ru but over an explicit tone list.
RateBreakdown zf_group_rate_on_tones(const ChannelSet& cs,
                                     const std::vector<int>& group,
                                     int tone_start, int tone_end,
                                     double snr_tx,
                                     ExecPolicy policy = ExecPolicy::kParallel);

}  // namespace proxysel

#endif  // PROXYSEL_ZFBF_HPP
