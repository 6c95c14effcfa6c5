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

#include "proxysel/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "proxysel/errors.hpp"
#include "proxysel/rng.hpp"

namespace proxysel {

namespace {

constexpr int kMaxAntennas = 64;
constexpr int kHeadSize = 4;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

ChannelSet::ChannelSet(int n_antennas, int n_users, int n_subcarriers)
    : n_antennas_(n_antennas),
      n_users_(n_users),
      n_subcarriers_(n_subcarriers),
      data_(static_cast<std::size_t>(n_antennas) * n_users * n_subcarriers) {
  if (n_antennas < 1 || n_users < 1 || n_subcarriers < 1) {
    throw DomainError("channel set dimensions must be positive");
  }
}

void ChannelSet::validate() const {
  for (int n = 0; n < n_subcarriers_; ++n) {
    for (int k = 0; k < n_users_; ++k) {
      const cplx* v = h(n, k);
      double norm_sq = 0.0;
      for (int a = 0; a < n_antennas_; ++a) {
        if (!std::isfinite(v[a].real()) || !std::isfinite(v[a].imag())) {
          throw DomainError("non-finite channel entry at subcarrier " +
                            std::to_string(n) + ", user " + std::to_string(k) +
                            ", antenna " + std::to_string(a));
        }
        norm_sq += std::norm(v[a]);
      }
      if (norm_sq == 0.0) {
        throw DomainError("all-zero channel vector for user " +
                          std::to_string(k) + " on subcarrier " +
                          std::to_string(n));
      }
    }
  }
}

bool ChannelSet::operator==(const ChannelSet& other) const {
  return n_antennas_ == other.n_antennas_ && n_users_ == other.n_users_ &&
         n_subcarriers_ == other.n_subcarriers_ &&
         spacing_hz_ == other.spacing_hz_ && data_ == other.data_;
}

ChannelSet synth_channels(const SynthChannelParams& params, int n_antennas,
                          int n_users, int levels) {
  if (n_antennas < 1 || n_antennas > kMaxAntennas) {
    throw DomainError("antenna count must be in [1, " +
                      std::to_string(kMaxAntennas) + "]");
  }
  if (n_users < 1) throw DomainError("user count must be >= 1");
  if (levels < 4 || levels > 7) {
    throw DomainError("level count must be in {4, 5, 6, 7}, got " +
                      std::to_string(levels));
  }
  if (params.n_taps < 1) throw DomainError("n_taps must be >= 1");
  if (!(params.delay_spread_taps > 0.0)) {
    throw DomainError("delay_spread_taps must be positive");
  }
  if (params.per_user_gain_db &&
      static_cast<int>(params.per_user_gain_db->size()) != n_users) {
    throw DomainError("per_user_gain_db must have one entry per user");
  }
  const int n_heads = n_antennas / kHeadSize;
  if (params.per_user_head_gain_db) {
    if (n_antennas % kHeadSize != 0) {
      throw DomainError("head gains need an antenna count divisible by 4");
    }
    if (static_cast<int>(params.per_user_head_gain_db->size()) != n_users) {
      throw DomainError("per_user_head_gain_db must have one row per user");
    }
    for (const auto& row : *params.per_user_head_gain_db) {
      if (static_cast<int>(row.size()) != n_heads) {
        throw DomainError("per_user_head_gain_db rows must have one entry "
                          "per 4-antenna head");
      }
    }
  }

  const int n_tones = 26 * (1 << (levels - 1));
  const int n_taps = params.n_taps;

  // Normalized exponential power-delay profile.
  std::vector<double> tap_power(static_cast<std::size_t>(n_taps));
  double power_sum = 0.0;
  for (int t = 0; t < n_taps; ++t) {
    tap_power[t] = std::exp(-static_cast<double>(t) / params.delay_spread_taps);
    power_sum += tap_power[t];
  }
  for (double& p : tap_power) p /= power_sum;

  double los_frac = 0.0;
  if (params.rician_k_db) {
    if (!std::isfinite(*params.rician_k_db)) {
      throw DomainError("rician_k_db must be finite");
    }
    const double k_rice = db_to_linear(*params.rician_k_db);
    los_frac = k_rice / (k_rice + 1.0);
  }

  // Taps for all (user, antenna) pairs come from one stream in a fixed
  // order, so the result does not depend on how the DFT below is executed.
  // The optional LoS draws come after each user's diffuse taps, keeping the
  // pure Rayleigh output identical to a build without the field.
  SplitMix64 rng(params.seed);
  std::vector<cplx> taps(static_cast<std::size_t>(n_users) * n_antennas *
                         n_taps);
  for (int k = 0; k < n_users; ++k) {
    const double user_gain =
        params.per_user_gain_db ? db_to_linear((*params.per_user_gain_db)[k])
                                : 1.0;
    const auto antenna_gain = [&](int a) {
      double gain = user_gain;
      if (params.per_user_head_gain_db) {
        gain *= db_to_linear((*params.per_user_head_gain_db)[k][a / kHeadSize]);
      }
      return gain;
    };
    for (int a = 0; a < n_antennas; ++a) {
      const double gain = antenna_gain(a) * (1.0 - los_frac);
      for (int t = 0; t < n_taps; ++t) {
        const double sigma = std::sqrt(tap_power[t] * gain / 2.0);
        const double re = sigma * rng.next_gaussian();
        const double im = sigma * rng.next_gaussian();
        taps[(static_cast<std::size_t>(k) * n_antennas + a) * n_taps + t] =
            cplx(re, im);
      }
    }
    if (params.rician_k_db) {
      const double sin_theta = 2.0 * rng.next_double() - 1.0;
      const double phase0 = 2.0 * std::numbers::pi * rng.next_double();
      for (int a = 0; a < n_antennas; ++a) {
        const double amp = std::sqrt(antenna_gain(a) * los_frac);
        const double ph = phase0 + std::numbers::pi * a * sin_theta;
        taps[(static_cast<std::size_t>(k) * n_antennas + a) * n_taps + 0] +=
            amp * cplx(std::cos(ph), std::sin(ph));
      }
    }
  }

  // exp(-j 2 pi m / F) lookup; tap t on tone n uses index (n * t) mod F.
  std::vector<cplx> twiddle(static_cast<std::size_t>(n_tones));
  for (int m = 0; m < n_tones; ++m) {
    const double phase = -2.0 * std::numbers::pi * m / n_tones;
    twiddle[m] = cplx(std::cos(phase), std::sin(phase));
  }

  ChannelSet cs(n_antennas, n_users, n_tones);
  for (int n = 0; n < n_tones; ++n) {
    for (int k = 0; k < n_users; ++k) {
      cplx* out = cs.h(n, k);
      for (int a = 0; a < n_antennas; ++a) {
        const cplx* g =
            &taps[(static_cast<std::size_t>(k) * n_antennas + a) * n_taps];
        cplx acc(0.0, 0.0);
        for (int t = 0; t < n_taps; ++t) {
          acc += g[t] * twiddle[(static_cast<std::size_t>(n) * t) % n_tones];
        }
        out[a] = acc;
      }
    }
  }
  cs.validate();
  return cs;
}

double strength(const ChannelSet& cs, int user, int subcarrier) {
  const cplx* v = cs.h(subcarrier, user);
  double s = 0.0;
  for (int a = 0; a < cs.n_antennas(); ++a) s += std::norm(v[a]);
  return s;
}

double correlation(const ChannelSet& cs, int user_i, int user_j,
                   int subcarrier) {
  if (user_i == user_j) {
    throw DomainError("correlation requires two distinct users");
  }
  const cplx* hi = cs.h(subcarrier, user_i);
  const cplx* hj = cs.h(subcarrier, user_j);
  cplx inner(0.0, 0.0);
  double norm_i = 0.0;
  double norm_j = 0.0;
  for (int a = 0; a < cs.n_antennas(); ++a) {
    inner += std::conj(hi[a]) * hj[a];
    norm_i += std::norm(hi[a]);
    norm_j += std::norm(hj[a]);
  }
  if (norm_i == 0.0 || norm_j == 0.0) {
    throw DomainError("zero-norm channel vector on subcarrier " +
                      std::to_string(subcarrier));
  }
  return std::abs(inner) / std::sqrt(norm_i * norm_j);
}

double avg_correlation(const ChannelSet& cs, int user_i, int user_j,
                       const RuId& ru) {
  double sum = 0.0;
  for (int n = ru.tone_start; n < ru.tone_end(); ++n) {
    sum += correlation(cs, user_i, user_j, n);
  }
  return sum / ru.tone_count;
}

CorrelationTable build_correlation_table(const ChannelSet& cs,
                                         const RuTree& tree,
                                         ExecPolicy policy) {
  const int n_users = cs.n_users();
  const int n_tones = cs.n_subcarriers();
  const int q_count = tree.ru_count();
  if (tree.total_tones() != n_tones) {
    throw DomainError("RU tree spans " + std::to_string(tree.total_tones()) +
                      " tones but the channel set has " +
                      std::to_string(n_tones));
  }

  CorrelationTable table;
  table.n_users_ = n_users;
  table.ru_count_ = q_count;
  table.table_.assign(
      static_cast<std::size_t>(q_count) * n_users * n_users, 1.0);

  // Unordered pairs, one output row each; cells are independent so the
  // parallel path is bit-identical to the serial one.
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n_users) * (n_users - 1) / 2);
  for (int i = 0; i < n_users; ++i) {
    for (int j = i + 1; j < n_users; ++j) pairs.emplace_back(i, j);
  }

  const auto pair_job = [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    // Prefix sums of the per-tone correlation make every RU average an
    // O(1) lookup.
    std::vector<double> prefix(static_cast<std::size_t>(n_tones) + 1, 0.0);
    for (int n = 0; n < n_tones; ++n) {
      prefix[n + 1] = prefix[n] + correlation(cs, i, j, n);
    }
    for (int q = 1; q <= q_count; ++q) {
      const RuId& ru = tree.ru(q);
      const double avg =
          (prefix[ru.tone_end()] - prefix[ru.tone_start]) / ru.tone_count;
      table.table_[(static_cast<std::size_t>(q - 1) * n_users + i) * n_users +
                   j] = avg;
      table.table_[(static_cast<std::size_t>(q - 1) * n_users + j) * n_users +
                   i] = avg;
    }
  };

  const auto n_pairs = static_cast<std::int64_t>(pairs.size());
  if (policy == ExecPolicy::kParallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t p = 0; p < n_pairs; ++p) {
      pair_job(static_cast<std::size_t>(p));
    }
  } else {
    for (std::int64_t p = 0; p < n_pairs; ++p) {
      pair_job(static_cast<std::size_t>(p));
    }
  }
  return table;
}

StrengthTable build_strength_table(const ChannelSet& cs, ExecPolicy policy) {
  const int n_users = cs.n_users();
  const int n_tones = cs.n_subcarriers();
  StrengthTable table;
  table.n_users_ = n_users;
  table.n_subcarriers_ = n_tones;
  table.table_.resize(static_cast<std::size_t>(n_users) * n_tones);

  const auto user_job = [&](int k) {
    for (int n = 0; n < n_tones; ++n) {
      table.table_[static_cast<std::size_t>(k) * n_tones + n] =
          strength(cs, k, n);
    }
  };

  if (policy == ExecPolicy::kParallel) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n_users; ++k) user_job(k);
  } else {
    for (int k = 0; k < n_users; ++k) user_job(k);
  }
  return table;
}

}  // namespace proxysel
