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

#include "proxysel/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "proxysel/compat.hpp"
#include "proxysel/errors.hpp"
#include "proxysel/proxy.hpp"
#include "proxysel/zfbf.hpp"

namespace proxysel {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Exact ZF sum rate of `group` (sorted) on the tones, -inf if any tone is
// singular for it.
double group_rate_or_neg_inf(const ChannelSet& cs,
                             const std::vector<int>& group, int tone_start,
                             int tone_end, double snr_tx) {
  try {
    return zf_group_rate_on_tones(cs, group, tone_start, tone_end, snr_tx,
                                  ExecPolicy::kSerial)
        .total_bits;
  } catch (const SingularityError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

SieveResult sieve_select(const ChannelSet& cs,
                         const std::vector<int>& user_pool, int tone_start,
                         int tone_end, int n_streams, double snr_tx) {
  if (user_pool.empty()) throw DomainError("user pool is empty");
  if (n_streams < 1) {
    throw DomainError("need at least one spatial stream, got " +
                      std::to_string(n_streams));
  }
  std::vector<int> pool = user_pool;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  const int target = std::min<int>(n_streams, static_cast<int>(pool.size()));
  SieveResult res;
  std::vector<int> current;  // sorted

  while (static_cast<int>(current.size()) < target) {
    int best_user = -1;
    double best_rate = -std::numeric_limits<double>::infinity();
    std::vector<int> best_group;
    for (int k : pool) {
      if (std::binary_search(current.begin(), current.end(), k)) continue;
      std::vector<int> cand = current;
      cand.insert(std::lower_bound(cand.begin(), cand.end(), k), k);
      const double r =
          group_rate_or_neg_inf(cs, cand, tone_start, tone_end, snr_tx);
      if (r > best_rate) {
        best_rate = r;
        best_user = k;
        best_group = std::move(cand);
      }
    }
    if (best_user < 0 || !std::isfinite(best_rate)) break;  // all singular
    current = std::move(best_group);
    res.trajectory.push_back(best_user);
    res.prefix_rates.push_back(best_rate);
  }

  if (res.prefix_rates.empty()) {
    throw SingularityError("every user in the pool is singular on tones [" +
                           std::to_string(tone_start) + ", " +
                           std::to_string(tone_end) + ")");
  }
  size_t best_len = 0;
  for (size_t i = 1; i < res.prefix_rates.size(); ++i) {
    if (res.prefix_rates[i] > res.prefix_rates[best_len]) best_len = i;
  }
  res.group.assign(res.trajectory.begin(),
                   res.trajectory.begin() + best_len + 1);
  std::sort(res.group.begin(), res.group.end());
  res.zf_rate = res.prefix_rates[best_len];
  return res;
}

BaselineResult pure_ofdma(const ChannelSet& cs, const RuTree& tree,
                          double snr_tx, const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  StrengthTable strengths = build_strength_table(cs, ExecPolicy::kSerial);
  ProxyParams params;
  params.alpha = 0.0;
  params.snr_tx = snr_tx;
  ProxyEvaluator rates(strengths, tree, params, 1);
  CandidateCatalog catalog = singleton_catalog(cs.n_users(), tree);
  IlpModel model = build_model(catalog, tree, rates);

  BaselineResult out;
  out.scheme = "pure_ofdma";
  out.schedule = solve(model, opts);
  out.zf_rate_total =
      schedule_zf_rate(cs, tree, out.schedule, snr_tx, ExecPolicy::kSerial);
  out.schedule.objective_zf = out.zf_rate_total;
  out.runtime_s = seconds_since(t0);
  return out;
}

int sequential_greedy_level(int levels, int n_users, int n_streams) {
  if (n_users < 1) throw DomainError("need at least one user");
  if (n_streams < 1) throw DomainError("need at least one spatial stream");
  const double ratio = static_cast<double>(n_users) / n_streams;
  const int raw = static_cast<int>(std::floor(std::log2(ratio))) + 1;
  return std::max(1, std::min(levels - 2, raw));
}

BaselineResult sequential_greedy(const ChannelSet& cs, const RuTree& tree,
                                 int n_streams, double snr_tx) {
  const auto t0 = std::chrono::steady_clock::now();
  const int level = sequential_greedy_level(tree.levels(), cs.n_users(),
                                            n_streams);
  std::vector<int> pool(cs.n_users());
  for (int k = 0; k < cs.n_users(); ++k) pool[k] = k;

  BaselineResult out;
  out.scheme = "sequential_greedy";
  const int q_first = 1 << (level - 1);
  const int q_last = (1 << level) - 1;
  for (int q = q_first; q <= q_last && !pool.empty(); ++q) {
    const RuId& ru = tree.ru(q);
    SieveResult sieve;
    try {
      sieve = sieve_select(cs, pool, ru.tone_start, ru.tone_end(), n_streams,
                           snr_tx);
    } catch (const SingularityError&) {
      continue;  // nobody usable on this RU, leave it empty
    }
    out.schedule.assignments.emplace_back(q, sieve.group);
    out.zf_rate_total += sieve.zf_rate;
    for (int k : sieve.group) {
      pool.erase(std::find(pool.begin(), pool.end(), k));
    }
  }
  out.schedule.objective_zf = out.zf_rate_total;
  out.runtime_s = seconds_since(t0);
  return out;
}

BaselineResult whole_band_greedy(const ChannelSet& cs, const RuTree& tree,
                                 int n_streams, double snr_tx) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int> pool(cs.n_users());
  for (int k = 0; k < cs.n_users(); ++k) pool[k] = k;
  SieveResult sieve =
      sieve_select(cs, pool, 0, tree.total_tones(), n_streams, snr_tx);

  BaselineResult out;
  out.scheme = "whole_band_greedy";
  out.schedule.assignments.emplace_back(1, sieve.group);
  out.zf_rate_total = sieve.zf_rate;
  out.schedule.objective_zf = sieve.zf_rate;
  out.runtime_s = seconds_since(t0);
  return out;
}

BaselineResult unconstrained_greedy(const ChannelSet& cs, int n_streams,
                                    double snr_tx, ExecPolicy policy) {
  const auto t0 = std::chrono::steady_clock::now();
  const int f = cs.n_subcarriers();
  std::vector<int> pool(cs.n_users());
  for (int k = 0; k < cs.n_users(); ++k) pool[k] = k;

  std::vector<std::vector<int>> groups(f);
  std::vector<double> rates(f, 0.0);

#pragma omp parallel for schedule(dynamic, 8) \
    if (policy == ExecPolicy::kParallel)
  for (int n = 0; n < f; ++n) {
    SieveResult sieve = sieve_select(cs, pool, n, n + 1, n_streams, snr_tx);
    groups[n] = sieve.group;
    rates[n] = sieve.zf_rate;
  }

  BaselineResult out;
  out.scheme = "unconstrained_greedy";
  out.per_tone_groups = std::move(groups);
  for (int n = 0; n < f; ++n) out.zf_rate_total += rates[n];
  out.standard_compliant = false;
  out.runtime_s = seconds_since(t0);
  return out;
}

}  // namespace proxysel
