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

#include "proxysel/zfbf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "proxysel/errors.hpp"

namespace proxysel {

namespace {

// Rank-deficiency thresholds. The SVD path compares singular values, the
// Gram path eigenvalues, which are squared singular values.
constexpr double kMaxCondition = 1e12;
constexpr double kMaxGramCondition = kMaxCondition * kMaxCondition;

std::string group_to_string(const std::vector<int>& group) {
  std::string s = "{";
  for (size_t i = 0; i < group.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(group[i]);
  }
  s += "}";
  return s;
}

void check_group(const ChannelSet& cs, const std::vector<int>& group) {
  if (group.empty()) throw DomainError("group is empty");
  if (static_cast<int>(group.size()) > cs.n_antennas()) {
    throw DomainError("group " + group_to_string(group) + " has " +
                      std::to_string(group.size()) + " users but only " +
                      std::to_string(cs.n_antennas()) +
                      " transmit antennas are available");
  }
  std::set<int> seen;
  for (int k : group) {
    if (k < 0 || k >= cs.n_users()) {
      throw DomainError("group member " + std::to_string(k) +
                        " out of range [0, " + std::to_string(cs.n_users()) +
                        ")");
    }
    if (!seen.insert(k).second) {
      throw DomainError("group " + group_to_string(group) +
                        " repeats user " + std::to_string(k));
    }
  }
}

int find_member(const std::vector<int>& group, int member) {
  auto it = std::find(group.begin(), group.end(), member);
  if (it == group.end()) {
    throw DomainError("user " + std::to_string(member) +
                      " is not in group " + group_to_string(group));
  }
  return static_cast<int>(it - group.begin());
}

}  // namespace

BeamformerSet BeamformerSet::unit_normalized() const {
  BeamformerSet out = *this;
  for (int c = 0; c < out.w.cols(); ++c) {
    double norm = out.w.col(c).norm();
    if (norm > 0.0) out.w.col(c) /= norm;
  }
  out.normalized = true;
  return out;
}

Eigen::MatrixXcd group_channel_matrix(const ChannelSet& cs,
                                      const std::vector<int>& group,
                                      int subcarrier) {
  check_group(cs, group);
  if (subcarrier < 0 || subcarrier >= cs.n_subcarriers()) {
    throw DomainError("subcarrier " + std::to_string(subcarrier) +
                      " out of range [0, " +
                      std::to_string(cs.n_subcarriers()) + ")");
  }
  Eigen::MatrixXcd h(cs.n_antennas(), static_cast<int>(group.size()));
  for (size_t c = 0; c < group.size(); ++c) {
    const cplx* col = cs.h(subcarrier, group[c]);
    for (int a = 0; a < cs.n_antennas(); ++a) h(a, static_cast<int>(c)) = col[a];
  }
  return h;
}

BeamformerSet zf_beamformer(const Eigen::MatrixXcd& channels) {
  const int m = static_cast<int>(channels.cols());
  if (m == 0) throw DomainError("group is empty");
  if (channels.rows() < channels.cols()) {
    throw DomainError("cannot zero-force " + std::to_string(m) +
                      " users with " + std::to_string(channels.rows()) +
                      " antennas");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      channels, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(m - 1);
  if (!(smin > 0.0) || smax / smin > kMaxCondition) {
    throw SingularityError("channel matrix is singular (condition " +
                           std::to_string(smin > 0.0 ? smax / smin : 0.0) +
                           " beyond 1e12) for a group of " +
                           std::to_string(m) + " users");
  }
  BeamformerSet out;
  out.w = svd.matrixU() * sv.cwiseInverse().asDiagonal() *
          svd.matrixV().adjoint();
  out.normalized = false;
  return out;
}

BeamformerSet zf_beamformer(const ChannelSet& cs, const std::vector<int>& group,
                            int subcarrier) {
  try {
    BeamformerSet out = zf_beamformer(group_channel_matrix(cs, group, subcarrier));
    out.group = group;
    return out;
  } catch (const SingularityError& e) {
    throw SingularityError("group " + group_to_string(group) +
                           " on subcarrier " + std::to_string(subcarrier) +
                           ": " + e.what());
  }
}

std::vector<double> zf_effective_gains(const Eigen::MatrixXcd& channels) {
  const int m = static_cast<int>(channels.cols());
  if (m == 0) throw DomainError("group is empty");
  if (channels.rows() < channels.cols()) {
    throw DomainError("cannot zero-force " + std::to_string(m) +
                      " users with " + std::to_string(channels.rows()) +
                      " antennas");
  }
  if (m == 1) {
    double g = channels.col(0).squaredNorm();
    if (!(g > 0.0)) throw SingularityError("zero channel vector");
    return {g};
  }
  Eigen::MatrixXcd gram = channels.adjoint() * channels;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw SingularityError("Gram eigendecomposition failed for a group of " +
                           std::to_string(m) + " users");
  }
  const auto& lam = eig.eigenvalues();  // ascending
  const double lmin = lam(0);
  const double lmax = lam(m - 1);
  if (!(lmin > 0.0) || lmax / lmin > kMaxGramCondition) {
    throw SingularityError("channel Gram matrix is singular for a group of " +
                           std::to_string(m) + " users");
  }
  // [G^{-1}]_{kk} = sum_j |V_{kj}|^2 / lambda_j, gain_k is its reciprocal.
  std::vector<double> gains(m);
  const auto& v = eig.eigenvectors();
  for (int k = 0; k < m; ++k) {
    double diag = 0.0;
    for (int j = 0; j < m; ++j) diag += std::norm(v(k, j)) / lam(j);
    gains[k] = 1.0 / diag;
  }
  return gains;
}

Eigen::MatrixXcd complement_projector(const Eigen::MatrixXcd& others,
                                      int n_antennas) {
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n_antennas, n_antennas);
  if (others.cols() == 0) return eye;
  if (others.rows() != n_antennas) {
    throw DomainError("projector basis has " + std::to_string(others.rows()) +
                      " rows, expected " + std::to_string(n_antennas));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(others);
  Eigen::MatrixXcd q = qr.householderQ() *
                       Eigen::MatrixXcd::Identity(
                           n_antennas, static_cast<int>(others.cols()));
  return eye - q * q.adjoint();
}

double zf_effective_gain_projector(const Eigen::MatrixXcd& channels,
                                   int member) {
  const int m = static_cast<int>(channels.cols());
  if (member < 0 || member >= m) {
    throw DomainError("member index " + std::to_string(member) +
                      " out of range [0, " + std::to_string(m) + ")");
  }
  Eigen::MatrixXcd others(channels.rows(), m - 1);
  int c = 0;
  for (int j = 0; j < m; ++j) {
    if (j != member) others.col(c++) = channels.col(j);
  }
  Eigen::MatrixXcd p =
      complement_projector(others, static_cast<int>(channels.rows()));
  return (p * channels.col(member)).squaredNorm();
}

double zf_user_rate(const ChannelSet& cs, int subcarrier,
                    const std::vector<int>& group, int member, double snr_tx) {
  if (!(snr_tx >= 0.0) || !std::isfinite(snr_tx)) {
    throw DomainError("snr_tx must be finite and non-negative");
  }
  int idx = find_member(group, member);
  Eigen::MatrixXcd h = group_channel_matrix(cs, group, subcarrier);
  std::vector<double> gains = zf_effective_gains(h);
  return std::log2(1.0 + snr_tx * gains[idx]);
}

RateBreakdown bf_rate_general(const Eigen::MatrixXcd& channels,
                              const Eigen::MatrixXcd& beamformers,
                              const std::vector<double>& per_stream_powers) {
  const int m = static_cast<int>(channels.cols());
  if (beamformers.cols() != m || beamformers.rows() != channels.rows()) {
    throw DomainError("beamformer matrix shape does not match channels");
  }
  if (static_cast<int>(per_stream_powers.size()) != m) {
    throw DomainError("expected " + std::to_string(m) +
                      " per-stream powers, got " +
                      std::to_string(per_stream_powers.size()));
  }
  for (double p : per_stream_powers) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DomainError("per-stream powers must be finite and non-negative");
    }
  }
  // |h_k^H w_i|^2 for all pairs.
  Eigen::MatrixXcd cross = channels.adjoint() * beamformers;
  RateBreakdown out;
  out.per_user_bits.reserve(m);
  for (int k = 0; k < m; ++k) {
    double signal = per_stream_powers[k] * std::norm(cross(k, k));
    double interference = 0.0;
    for (int i = 0; i < m; ++i) {
      if (i != k) interference += per_stream_powers[i] * std::norm(cross(k, i));
    }
    double rate = std::log2(1.0 + signal / (1.0 + interference));
    out.per_user_bits.emplace_back(k, rate);
    out.total_bits += rate;
  }
  return out;
}

RateBreakdown zf_group_rate_on_tones(const ChannelSet& cs,
                                     const std::vector<int>& group,
                                     int tone_start, int tone_end,
                                     double snr_tx, ExecPolicy policy) {
  check_group(cs, group);
  if (!(snr_tx >= 0.0) || !std::isfinite(snr_tx)) {
    throw DomainError("snr_tx must be finite and non-negative");
  }
  if (tone_start < 0 || tone_end > cs.n_subcarriers() || tone_start >= tone_end) {
    throw DomainError("tone range [" + std::to_string(tone_start) + ", " +
                      std::to_string(tone_end) + ") invalid for " +
                      std::to_string(cs.n_subcarriers()) + " subcarriers");
  }
  const int m = static_cast<int>(group.size());
  const int n_tones = tone_end - tone_start;
  // Per-tone per-user rates are filled independently, then reduced in a
  // fixed order so both execution policies give bit-identical sums.
  std::vector<double> rates(static_cast<size_t>(n_tones) * m, 0.0);
  std::vector<int> bad_tone(n_tones, -1);

#pragma omp parallel for schedule(static) if (policy == ExecPolicy::kParallel)
  for (int t = 0; t < n_tones; ++t) {
    const int tone = tone_start + t;
    Eigen::MatrixXcd h(cs.n_antennas(), m);
    for (int c = 0; c < m; ++c) {
      const cplx* col = cs.h(tone, group[c]);
      for (int a = 0; a < cs.n_antennas(); ++a) h(a, c) = col[a];
    }
    try {
      std::vector<double> gains = zf_effective_gains(h);
      for (int c = 0; c < m; ++c) {
        rates[static_cast<size_t>(t) * m + c] =
            std::log2(1.0 + snr_tx * gains[c]);
      }
    } catch (const SingularityError&) {
      bad_tone[t] = tone;
    }
  }

  for (int t = 0; t < n_tones; ++t) {
    if (bad_tone[t] >= 0) {
      throw SingularityError("group " + group_to_string(group) +
                             " is singular on tone " +
                             std::to_string(bad_tone[t]));
    }
  }

  RateBreakdown out;
  out.snr_tx = snr_tx;
  out.per_user_bits.reserve(m);
  for (int c = 0; c < m; ++c) {
    double sum = 0.0;
    for (int t = 0; t < n_tones; ++t) sum += rates[static_cast<size_t>(t) * m + c];
    out.per_user_bits.emplace_back(group[c], sum);
    out.total_bits += sum;
  }
  return out;
}

RateBreakdown zf_group_rate_on_ru(const ChannelSet& cs,
                                  const std::vector<int>& group,
                                  const RuId& ru, double snr_tx,
                                  ExecPolicy policy) {
  return zf_group_rate_on_tones(cs, group, ru.tone_start, ru.tone_end(),
                                snr_tx, policy);
}

}  // namespace proxysel
