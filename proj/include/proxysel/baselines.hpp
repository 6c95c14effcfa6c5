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

#ifndef PROXYSEL_BASELINES_HPP
#define PROXYSEL_BASELINES_HPP

#include <string>
#include <vector>

#include "proxysel/channel.hpp"
#include "proxysel/ilp.hpp"
#include "proxysel/parallel.hpp"
#include "proxysel/ru_tree.hpp"

namespace proxysel {

struct BaselineResult {
  std::string scheme;
  ScheduleAssignment schedule;  // empty for the per-tone scheme
  std::vector<std::vector<int>> per_tone_groups;  // unconstrained_greedy only
  double zf_rate_total = 0.0;
  double runtime_s = 0.0;
  bool standard_compliant = true;
};

struct SieveResult {
  std::vector<int> group;  // best prefix, sorted ascending
  double zf_rate = 0.0;
  std::vector<int> trajectory;       // users in admission order
  std::vector<double> prefix_rates;  // exact ZF rate after each admission
};

/// Greedy incremental selection over the given tones: start from the best
/// single user, repeatedly add the user giving the largest exact ZF rate,
/// stop at min(n_streams, pool size) members or when every remaining
/// candidate is singular, and return the best prefix of the trajectory.
/// Ties break toward the lowest user index.
SieveResult sieve_select(const ChannelSet& cs,
                         const std::vector<int>& user_pool, int tone_start,
                         int tone_end, int n_streams, double snr_tx);

/// One user per RU: the scheduling ILP restricted to singleton groups,
/// solved to optimality. Single-user proxy rates are exact, so the
/// objective is the true ZF optimum of this scheme.
BaselineResult pure_ofdma(const ChannelSet& cs, const RuTree& tree,
                          double snr_tx, const SolveOptions& opts = {});

/// Level choice of the sequential scheme: min(L-2, floor(log2(K/N_T)) + 1)
/// clamped into [1, L-2].
int sequential_greedy_level(int levels, int n_users, int n_streams);

/// SIEVE per RU across one tree level, left to right, each RU drawing from
/// the users not yet scheduled.
BaselineResult sequential_greedy(const ChannelSet& cs, const RuTree& tree,
                                 int n_streams, double snr_tx);

/// One SIEVE group over the whole band, occupying the root RU.
BaselineResult whole_band_greedy(const ChannelSet& cs, const RuTree& tree,
                                 int n_streams, double snr_tx);

/// Independent SIEVE per subcarrier with the full pool. Not
/// standard-compliant; serves as the performance upper bound.
BaselineResult unconstrained_greedy(const ChannelSet& cs, int n_streams,
                                    double snr_tx,
                                    ExecPolicy policy = ExecPolicy::kParallel);

}  // namespace proxysel

#endif  // PROXYSEL_BASELINES_HPP
