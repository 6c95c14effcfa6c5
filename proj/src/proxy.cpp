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

#include "proxysel/proxy.hpp"

#include <cmath>
#include <string>

#include "proxysel/errors.hpp"

namespace proxysel {

void ProxyParams::validate() const {
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw DomainError("alpha must satisfy 0 <= alpha <= 1, got " +
                      std::to_string(alpha));
  }
  if (!(snr_tx > 0.0) || !std::isfinite(snr_tx)) {
    throw DomainError("snr_tx must be finite and positive");
  }
}

double penalty_factor(int group_size, double alpha) {
  if (group_size < 1) {
    throw DomainError("group size must be >= 1, got " +
                      std::to_string(group_size));
  }
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw DomainError("alpha must satisfy 0 <= alpha <= 1, got " +
                      std::to_string(alpha));
  }
  if (group_size == 1) return 1.0;
  const double m = group_size;
  return 1.0 - alpha * alpha * (m - 1.0) / (1.0 + alpha * (m - 2.0));
}

double proxy_user_rate(const ChannelSet& cs, int user, int group_size,
                       const RuId& ru, const ProxyParams& params) {
  params.validate();
  if (user < 0 || user >= cs.n_users()) {
    throw DomainError("user " + std::to_string(user) + " out of range [0, " +
                      std::to_string(cs.n_users()) + ")");
  }
  if (ru.tone_end() > cs.n_subcarriers()) {
    throw DomainError("RU " + std::to_string(ru.q) + " ends at tone " +
                      std::to_string(ru.tone_end()) + " but the channel has " +
                      std::to_string(cs.n_subcarriers()) + " subcarriers");
  }
  const double penalty = penalty_factor(group_size, params.alpha);
  double sum = 0.0;
  for (int n = ru.tone_start; n < ru.tone_end(); ++n) {
    sum += std::log2(1.0 + params.snr_tx * strength(cs, user, n) * penalty);
  }
  return sum;
}

double proxy_group_rate(const ChannelSet& cs, const std::vector<int>& group,
                        const RuId& ru, const ProxyParams& params) {
  if (group.empty()) throw DomainError("group is empty");
  double sum = 0.0;
  for (int k : group) {
    sum += proxy_user_rate(cs, k, static_cast<int>(group.size()), ru, params);
  }
  return sum;
}

ProxyEvaluator::ProxyEvaluator(const StrengthTable& strengths,
                               const RuTree& tree, const ProxyParams& params,
                               int max_group_size)
    : strengths_(strengths),
      tree_(tree),
      params_(params),
      max_group_size_(max_group_size) {
  params_.validate();
  if (max_group_size_ < 1) {
    throw DomainError("max group size must be >= 1, got " +
                      std::to_string(max_group_size_));
  }
  if (tree_.total_tones() > strengths_.n_subcarriers()) {
    throw DomainError("tree spans " + std::to_string(tree_.total_tones()) +
                      " tones but the strength table has " +
                      std::to_string(strengths_.n_subcarriers()));
  }
  size_t n = static_cast<size_t>(strengths_.n_users()) * tree_.ru_count() *
             max_group_size_;
  memo_.assign(n, 0.0);
  filled_.assign(n, 0);
}

size_t ProxyEvaluator::slot(int user, int q, int group_size) const {
  return (static_cast<size_t>(user) * tree_.ru_count() + (q - 1)) *
             max_group_size_ +
         (group_size - 1);
}

double ProxyEvaluator::user_ru_rate(int user, int q, int group_size) {
  if (user < 0 || user >= strengths_.n_users()) {
    throw DomainError("user " + std::to_string(user) + " out of range [0, " +
                      std::to_string(strengths_.n_users()) + ")");
  }
  if (group_size < 1 || group_size > max_group_size_) {
    throw DomainError("group size " + std::to_string(group_size) +
                      " out of range [1, " + std::to_string(max_group_size_) +
                      "]");
  }
  const size_t s = slot(user, q, group_size);
  if (!filled_[s]) {
    const RuId& ru = tree_.ru(q);
    const double penalty = penalty_factor(group_size, params_.alpha);
    double sum = 0.0;
    for (int n = ru.tone_start; n < ru.tone_end(); ++n) {
      sum += std::log2(1.0 + params_.snr_tx * strengths_.at(user, n) * penalty);
    }
    memo_[s] = sum;
    filled_[s] = 1;
  }
  return memo_[s];
}

double ProxyEvaluator::group_weight(int q, const std::vector<int>& group) {
  if (group.empty()) throw DomainError("group is empty");
  double sum = 0.0;
  for (int k : group) {
    sum += user_ru_rate(k, q, static_cast<int>(group.size()));
  }
  return sum;
}

}  // namespace proxysel
