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

#ifndef PROXYSEL_ILP_HPP
#define PROXYSEL_ILP_HPP

#include <string>
#include <vector>

#include "proxysel/channel.hpp"
#include "proxysel/compat.hpp"
#include "proxysel/parallel.hpp"
#include "proxysel/proxy.hpp"
#include "proxysel/ru_tree.hpp"

namespace proxysel {

/// One x variable: candidate group `members` on RU q, objective weight in
/// bits. The y_q activation variables are implicit in the model struct and
/// materialize in the LP export.
struct IlpEntry {
  int q = 0;
  std::vector<int> members;
  double weight = 0.0;
};

/// The binary program: maximize total weight subject to one row per user
/// (each user in at most one chosen group), one capacity row per RU (at
/// most one group on an active RU), and one row per RU conflict edge.
struct IlpModel {
  int n_users = 0;
  int levels = 0;
  std::vector<RuId> rus;          // rus[q-1]
  std::vector<IlpEntry> entries;  // ascending q, catalog order within an RU
  std::vector<int> entry_begin;   // size ru_count+2; RU q owns
                                  // [entry_begin[q], entry_begin[q+1])
  int conflict_edge_count = 0;

  int ru_count() const { return static_cast<int>(rus.size()); }
  size_t var_count() const { return entries.size() + rus.size(); }
  size_t constraint_count() const {
    return static_cast<size_t>(n_users) + rus.size() + conflict_edge_count;
  }
  bool mu_allowed(int q) const { return rus[q - 1].level <= levels - 2; }
  bool rus_conflict(int q1, int q2) const;
};

/// Weights come from the proxy evaluator; throws DomainError on duplicate
/// (q, group) catalog entries or non-finite / negative weights.
IlpModel build_model(const CandidateCatalog& catalog, const RuTree& tree,
                     ProxyEvaluator& rates);

/// Same with explicit per-RU weights, weights_per_ru[q-1][i] matching
/// catalog.per_ru[q-1][i].
IlpModel build_model(const CandidateCatalog& catalog, const RuTree& tree,
                     const std::vector<std::vector<double>>& weights_per_ru);

enum class SolveStatus { kOptimal, kFeasibleWithGap, kInfeasibleModel };

struct ScheduleAssignment {
  std::vector<std::pair<int, std::vector<int>>> assignments;  // (q, members)
  double objective_proxy = 0.0;
  double objective_zf = 0.0;  // filled by schedule_zf_rate, not by solve()
  SolveStatus solve_status = SolveStatus::kOptimal;
  double gap = 0.0;          // relative, 0 when proven optimal
  double upper_bound = 0.0;  // certified bound on the optimum
  double solve_time = 0.0;   // seconds
  long nodes = 0;
};

struct SolveOptions {
  double time_limit_s = 60.0;
  double gap_tol = 0.0;  // relative; 0 solves to proven optimality
  long max_nodes = -1;   // < 0 means unlimited
  int root_dual_iters = 60;
  int node_dual_iters = 8;
};

/// Exact best-first branch and bound. Node bounds come from the Lagrangian
/// relaxation of the user rows, which decomposes into one best group per RU
/// plus a max-weight antichain dynamic program on the RU tree; multipliers
/// are tuned by a few subgradient steps and inherited by child nodes.
/// Deterministic for a fixed model and options.
ScheduleAssignment solve(const IlpModel& model, const SolveOptions& opts = {});

/// Exhaustive oracle: enumerates conflict-free RU subsets and all
/// user-disjoint group assignments on each. Guarded to L <= 4 and at most
/// 10^4 catalog entries; throws DomainError beyond that.
ScheduleAssignment brute_force_schedule(
    const CandidateCatalog& catalog, const RuTree& tree,
    const std::vector<std::vector<double>>& weights_per_ru);
ScheduleAssignment brute_force_schedule(const CandidateCatalog& catalog,
                                        const RuTree& tree,
                                        ProxyEvaluator& rates);

/// Empty iff the schedule satisfies all assignment invariants: each user at
/// most once, at most one group per RU, no conflicting RUs, multi-user
/// groups only on MU-capable RUs and within the antenna budget.
std::vector<std::string> validate(const ScheduleAssignment& schedule,
                                  const CandidateCatalog& catalog,
                                  const RuTree& tree, int n_antennas);

/// LP text format export: Maximize / Subject To / Binary / End sections,
/// variables x_<q>_<member hash> and y_<q>, deterministic order.
std::string export_lp(const IlpModel& model);

/// Exact ZF sum rate of a schedule, singular tones propagate as errors.
double schedule_zf_rate(const ChannelSet& cs, const RuTree& tree,
                        const ScheduleAssignment& schedule, double snr_tx,
                        ExecPolicy policy = ExecPolicy::kParallel);

/// JSON dump with one {ru, members, proxy_rate, zf_rate} object per
/// assignment plus the schedule totals.
std::string schedule_to_json(const ScheduleAssignment& schedule,
                             const IlpModel& model, const ChannelSet& cs,
                             const RuTree& tree, double snr_tx);

}  // namespace proxysel

#endif  // PROXYSEL_ILP_HPP
