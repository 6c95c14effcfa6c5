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

#ifndef PROXYSEL_COMPAT_HPP
#define PROXYSEL_COMPAT_HPP

#include <cstdint>
#include <vector>

#include "proxysel/channel.hpp"
#include "proxysel/parallel.hpp"
#include "proxysel/ru_tree.hpp"

namespace proxysel {

struct SampleParams {
  double alpha = 0.3;       // pairwise average-correlation threshold
  int t_samples = 1000;     // sampling repetitions per MU-capable RU
  int max_group_size = 1;   // spatial stream budget, min(N_T, K) applied
  std::uint64_t seed = 0;

  void validate() const;
};

/// True iff every unordered pair in `group` has RU-averaged correlation at
/// most alpha on RU q. Singletons are always compatible.
bool is_compatible(const CorrelationTable& corr, const std::vector<int>& group,
                   int q, double alpha);

/// Incremental form used by the sampler: `candidate` against every current
/// member. An empty member list is always compatible.
bool is_compatible_with(const CorrelationTable& corr, int q, int candidate,
                        const std::vector<int>& members, double alpha);

/// Candidate groups per RU, indexed by q-1. Every RU starts with the K
/// singletons in user order; MU-capable RUs append the deduplicated sampled
/// groups in first-appearance order. Each group is sorted ascending.
struct CandidateCatalog {
  int n_users = 0;
  std::vector<std::vector<std::vector<int>>> per_ru;

  size_t total_groups() const;
};

/// Raw sampling record: for each MU-capable RU the t_samples groups in
/// generation order, duplicates kept. Catalogs cut from prefixes of one
/// trace are nested, which makes sample-budget sweeps monotone.
struct SampleTrace {
  int n_users = 0;
  int t_samples = 0;
  std::vector<std::vector<std::vector<int>>> samples_per_ru;
};

/// Runs the randomized compatibility sampler on every MU-capable RU.
/// Each RU draws from its own generator seeded with mix_seed(seed, q), so
/// results do not depend on the execution policy.
SampleTrace sample_trace(const CorrelationTable& corr, const RuTree& tree,
                         const SampleParams& params,
                         ExecPolicy policy = ExecPolicy::kParallel);

/// Catalog using only the first t_use samples of each RU's trace.
CandidateCatalog catalog_from_trace(const SampleTrace& trace,
                                    const RuTree& tree, int t_use);

/// sample_trace followed by catalog_from_trace at the full budget.
CandidateCatalog sample_groups(const CorrelationTable& corr,
                               const RuTree& tree, const SampleParams& params,
                               ExecPolicy policy = ExecPolicy::kParallel);

/// Catalog with only the K singletons on every RU.
CandidateCatalog singleton_catalog(int n_users, const RuTree& tree);

}  // namespace proxysel

#endif  // PROXYSEL_COMPAT_HPP
