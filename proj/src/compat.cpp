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

#include "proxysel/compat.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "proxysel/errors.hpp"
#include "proxysel/rng.hpp"

namespace proxysel {

void SampleParams::validate() const {
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw DomainError("alpha must satisfy 0 <= alpha <= 1, got " +
                      std::to_string(alpha));
  }
  if (t_samples < 0) {
    throw DomainError("t_samples must be >= 0, got " +
                      std::to_string(t_samples));
  }
  if (max_group_size < 1) {
    throw DomainError("max group size must be >= 1, got " +
                      std::to_string(max_group_size));
  }
}

bool is_compatible(const CorrelationTable& corr, const std::vector<int>& group,
                   int q, double alpha) {
  if (group.empty()) throw DomainError("group is empty");
  for (size_t i = 0; i < group.size(); ++i) {
    for (size_t j = i + 1; j < group.size(); ++j) {
      if (group[i] == group[j]) return false;
      if (corr.avg(group[i], group[j], q) > alpha) return false;
    }
  }
  return true;
}

bool is_compatible_with(const CorrelationTable& corr, int q, int candidate,
                        const std::vector<int>& members, double alpha) {
  for (int m : members) {
    if (m == candidate) return false;
    if (corr.avg(candidate, m, q) > alpha) return false;
  }
  return true;
}

namespace {

// One run of the randomized group builder on RU q. Starts from a uniform
// user, then repeatedly scans a fresh permutation of the remaining users
// and admits the first one compatible with every current member. Stops when
// the stream budget is reached or a full scan admits nobody.
std::vector<int> sample_one_group(const CorrelationTable& corr, int q,
                                  double alpha, int target_size,
                                  SplitMix64& rng) {
  const int k_total = corr.n_users();
  std::vector<int> members;
  members.reserve(target_size);
  members.push_back(static_cast<int>(rng.next_below(k_total)));

  std::vector<int> remaining;
  remaining.reserve(k_total - 1);
  for (int u = 0; u < k_total; ++u) {
    if (u != members[0]) remaining.push_back(u);
  }

  while (static_cast<int>(members.size()) < target_size && !remaining.empty()) {
    rng.shuffle(remaining);
    int admitted = -1;
    for (size_t i = 0; i < remaining.size(); ++i) {
      if (is_compatible_with(corr, q, remaining[i], members, alpha)) {
        admitted = static_cast<int>(i);
        break;
      }
    }
    if (admitted < 0) break;
    members.push_back(remaining[admitted]);
    remaining.erase(remaining.begin() + admitted);
  }

  std::sort(members.begin(), members.end());
  return members;
}

}  // namespace

SampleTrace sample_trace(const CorrelationTable& corr, const RuTree& tree,
                         const SampleParams& params, ExecPolicy policy) {
  params.validate();
  if (corr.ru_count() != tree.ru_count()) {
    throw DomainError("correlation table covers " +
                      std::to_string(corr.ru_count()) + " RUs, tree has " +
                      std::to_string(tree.ru_count()));
  }
  const int q_count = tree.ru_count();
  const int target = std::min(params.max_group_size, corr.n_users());

  SampleTrace trace;
  trace.n_users = corr.n_users();
  trace.t_samples = params.t_samples;
  trace.samples_per_ru.assign(q_count, {});

#pragma omp parallel for schedule(dynamic) \
    if (policy == ExecPolicy::kParallel)
  for (int q = 1; q <= q_count; ++q) {
    if (!tree.mu_mimo_allowed(q)) continue;
    SplitMix64 rng(mix_seed(params.seed, static_cast<std::uint64_t>(q)));
    auto& out = trace.samples_per_ru[q - 1];
    out.reserve(params.t_samples);
    for (int t = 0; t < params.t_samples; ++t) {
      out.push_back(sample_one_group(corr, q, params.alpha, target, rng));
    }
  }
  return trace;
}

CandidateCatalog catalog_from_trace(const SampleTrace& trace,
                                    const RuTree& tree, int t_use) {
  if (t_use < 0 || t_use > trace.t_samples) {
    throw DomainError("t_use " + std::to_string(t_use) +
                      " out of range [0, " + std::to_string(trace.t_samples) +
                      "]");
  }
  if (static_cast<int>(trace.samples_per_ru.size()) != tree.ru_count()) {
    throw DomainError("trace covers " +
                      std::to_string(trace.samples_per_ru.size()) +
                      " RUs, tree has " + std::to_string(tree.ru_count()));
  }
  CandidateCatalog catalog = singleton_catalog(trace.n_users, tree);
  for (int q = 1; q <= tree.ru_count(); ++q) {
    const auto& samples = trace.samples_per_ru[q - 1];
    auto& groups = catalog.per_ru[q - 1];
    std::set<std::vector<int>> seen(groups.begin(), groups.end());
    const int count = std::min<int>(t_use, static_cast<int>(samples.size()));
    for (int t = 0; t < count; ++t) {
      if (seen.insert(samples[t]).second) groups.push_back(samples[t]);
    }
  }
  return catalog;
}

CandidateCatalog sample_groups(const CorrelationTable& corr,
                               const RuTree& tree, const SampleParams& params,
                               ExecPolicy policy) {
  return catalog_from_trace(sample_trace(corr, tree, params, policy), tree,
                            params.t_samples);
}

CandidateCatalog singleton_catalog(int n_users, const RuTree& tree) {
  if (n_users < 1) {
    throw DomainError("need at least one user, got " +
                      std::to_string(n_users));
  }
  CandidateCatalog catalog;
  catalog.n_users = n_users;
  catalog.per_ru.assign(tree.ru_count(), {});
  for (auto& groups : catalog.per_ru) {
    groups.reserve(n_users);
    for (int k = 0; k < n_users; ++k) groups.push_back({k});
  }
  return catalog;
}

size_t CandidateCatalog::total_groups() const {
  size_t n = 0;
  for (const auto& groups : per_ru) n += groups.size();
  return n;
}

}  // namespace proxysel
