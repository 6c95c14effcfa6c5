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

#ifndef PROXYSEL_PROXY_HPP
#define PROXYSEL_PROXY_HPP

#include <cstdint>
#include <vector>

#include "proxysel/channel.hpp"
#include "proxysel/ru_tree.hpp"

namespace proxysel {

struct ProxyParams {
  double alpha = 0.3;   // compatibility threshold, in [0, 1]
  double snr_tx = 100;  // transmit SNR P, linear, > 0

  void validate() const;
};

/// Multiplexing loss factor 1 - alpha^2 (m-1) / (1 + alpha (m-2)).
/// Exactly 1 for m == 1. Throws DomainError outside m >= 1, 0 <= alpha < 1.
double penalty_factor(int group_size, double alpha);

/// Proxy rate of user k on the RU's tones assuming it shares the RU with
/// group_size - 1 users whose pairwise correlation is at most alpha:
/// sum over tones of log2(1 + P |h_k[n]|^2 * penalty_factor).
double proxy_user_rate(const ChannelSet& cs, int user, int group_size,
                       const RuId& ru, const ProxyParams& params);

/// Sum of proxy_user_rate over the group members with m = |group|.
double proxy_group_rate(const ChannelSet& cs, const std::vector<int>& group,
                        const RuId& ru, const ProxyParams& params);

/// Memoized proxy rates over one channel realization. Entries are filled
/// lazily per (user, ru, group size); not safe for concurrent use.
class ProxyEvaluator {
 public:
  ProxyEvaluator(const StrengthTable& strengths, const RuTree& tree,
                 const ProxyParams& params, int max_group_size);

  /// Proxy rate of `user` on RU q in a group of `group_size`.
  double user_ru_rate(int user, int q, int group_size);

  /// Sum of user_ru_rate over the members with group_size = |group|.
  double group_weight(int q, const std::vector<int>& group);

  const ProxyParams& params() const { return params_; }
  int max_group_size() const { return max_group_size_; }

 private:
  const StrengthTable& strengths_;
  const RuTree& tree_;
  ProxyParams params_;
  int max_group_size_;
  std::vector<double> memo_;
  std::vector<std::uint8_t> filled_;

  size_t slot(int user, int q, int group_size) const;
};

}  // namespace proxysel

#endif  // PROXYSEL_PROXY_HPP
