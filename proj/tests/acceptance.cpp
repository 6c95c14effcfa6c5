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

// Release acceptance gate: nine checks covering structure, numerics, solver
// exactness, the sampling contract, end-to-end performance, and the
// benchmark's directional claims. Each check prints one PASS/FAIL line; the
// binary exits nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "proxysel/baselines.hpp"
#include "proxysel/channel.hpp"
#include "proxysel/compat.hpp"
#include "proxysel/errors.hpp"
#include "proxysel/harness.hpp"
#include "proxysel/ilp.hpp"
#include "proxysel/proxy.hpp"
#include "proxysel/rng.hpp"
#include "proxysel/ru_tree.hpp"
#include "proxysel/zfbf.hpp"

namespace {

using namespace proxysel;
using Clock = std::chrono::steady_clock;

int g_criterion_failures = 0;
bool g_current_ok = true;

// Always-on requirement: never compiled out in Release.
#define REQUIRE(cond, msg)                                                    \
  do {                                                                        \
    if (!(cond)) {                                                            \
      std::fprintf(stderr, "[FAIL] %s:%d %s\n", __FILE__, __LINE__, msg);     \
      g_current_ok = false;                                                   \
    }                                                                         \
  } while (0)

void run_criterion(int number, const char* name, double time_limit_s,
                   void (*body)()) {
  g_current_ok = true;
  const auto t0 = Clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[FAIL] criterion %d threw: %s\n", number, e.what());
    g_current_ok = false;
  }
  const std::chrono::duration<double> dt = Clock::now() - t0;
  if (time_limit_s > 0.0 && dt.count() >= time_limit_s) {
    std::fprintf(stderr, "[FAIL] criterion %d took %.2f s, limit %.0f s\n",
                 number, dt.count(), time_limit_s);
    g_current_ok = false;
  }
  std::printf("criterion %d (%s): %s (%.2f s)\n", number, name,
              g_current_ok ? "PASS" : "FAIL", dt.count());
  std::fflush(stdout);
  if (!g_current_ok) ++g_criterion_failures;
}

Eigen::MatrixXcd random_channels(int nt, int m, SplitMix64& rng) {
  Eigen::MatrixXcd h(nt, m);
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < nt; ++r) {
      h(r, c) =
          cplx(rng.next_gaussian(), rng.next_gaussian()) / std::sqrt(2.0);
    }
  }
  return h;
}

ChannelSet flat_set_from(const Eigen::MatrixXcd& h, int n_subcarriers) {
  ChannelSet cs(static_cast<int>(h.rows()), static_cast<int>(h.cols()),
                n_subcarriers);
  for (int n = 0; n < n_subcarriers; ++n) {
    for (int k = 0; k < h.cols(); ++k) {
      for (int a = 0; a < h.rows(); ++a) cs.h(n, k)[a] = h(a, k);
    }
  }
  return cs;
}

std::vector<int> iota_group(int m) {
  std::vector<int> g(m);
  for (int i = 0; i < m; ++i) g[i] = i;
  return g;
}

// 1. Resource unit structure across all level counts.
void criterion_ru_structure() {
  const int expected_edges[] = {34, 98, 258, 642};
  for (int levels = 4; levels <= 7; ++levels) {
    const RuTree tree = build_tree(levels);
    REQUIRE(tree.ru_count() == (1 << levels) - 1, "Q must be 2^L - 1");
    REQUIRE(tree.total_tones() == 26 * (1 << (levels - 1)),
            "band must span 26 * 2^(L-1) tones");
    for (int q = 1; q <= tree.ru_count(); ++q) {
      const auto [level, idx] = index_to_position(q, levels);
      REQUIRE(position_to_index(level, idx, levels) == q,
              "index/position bijection must round-trip");
      REQUIRE(tree.ru(q).level == level, "stored level must match");
      REQUIRE(tree.ru(q).index_in_level == idx, "stored index must match");
    }
    for (int level = 1; level <= levels; ++level) {
      int next_start = 0;
      for (int idx = 1; idx <= (1 << (level - 1)); ++idx) {
        const RuId& ru = tree.ru(position_to_index(level, idx, levels));
        REQUIRE(ru.tone_start == next_start,
                "level must tile the band without gaps");
        next_start = ru.tone_end();
      }
      REQUIRE(next_start == tree.total_tones(),
              "level must cover the full band");
    }
    REQUIRE(static_cast<int>(tree.conflict_edges().size()) ==
                (levels - 2) * (1 << levels) + 2,
            "conflict edge count must match (L-2)*2^L + 2");
    REQUIRE(static_cast<int>(tree.conflict_edges().size()) ==
                expected_edges[levels - 4],
            "conflict edge count must match the table");
  }
}

// 2. Zero-forcing numerics on random full-rank groups.
void criterion_zf_correctness() {
  SplitMix64 rng(2024);
  int done = 0;
  while (done < 200) {
    const int nt = 2 + static_cast<int>(rng.next_below(15));  // 2..16
    const int m = 1 + static_cast<int>(rng.next_below(nt));   // 1..nt
    const Eigen::MatrixXcd h = random_channels(nt, m, rng);
    BeamformerSet bf;
    try {
      bf = zf_beamformer(h);
    } catch (const SingularityError&) {
      continue;  // re-draw near-singular combinations
    }
    ++done;
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) {
        if (i == k) continue;
        const double resid = std::abs(h.col(k).dot(bf.w.col(i)));
        REQUIRE(resid <= 1e-9 * h.col(k).norm() * bf.w.col(i).norm(),
                "nulling residual must stay below 1e-9");
      }
    }
    if (m < nt) {
      Eigen::MatrixXcd others(nt, m - 1 > 0 ? m - 1 : 1);
      if (m == 1) {
        others = h;
      } else {
        others = h.rightCols(m - 1);
      }
      const Eigen::MatrixXcd p = complement_projector(others, nt);
      REQUIRE((p * p - p).norm() <= 1e-9,
              "projector must be idempotent within 1e-9");
      REQUIRE((p - p.adjoint()).norm() <= 1e-9, "projector must be Hermitian");
    }
    const double snr = 10.0;
    const RateBreakdown general = bf_rate_general(
        h, bf.unit_normalized().w, std::vector<double>(m, snr));
    const ChannelSet cs = flat_set_from(h, 1);
    double per_user_sum = 0.0;
    for (int k = 0; k < m; ++k) {
      per_user_sum += zf_user_rate(cs, 0, iota_group(m), k, snr);
    }
    REQUIRE(std::abs(general.total_bits - per_user_sum) <= 1e-9,
            "interference-aware rate under ZF must equal the "
            "interference-free sum within 1e-9 bits");
  }
}

// 3. Proxy exactness on orthogonal and equicorrelated constructions.
void criterion_proxy_exactness() {
  RuId ru;
  ru.q = 1;
  ru.level = 1;
  ru.tone_start = 0;
  ru.tone_count = 26;

  for (int m : {2, 3, 5, 8}) {
    ChannelSet cs(m, m, 26);
    for (int n = 0; n < 26; ++n) {
      for (int k = 0; k < m; ++k) cs.h(n, k)[k] = 1.0;
    }
    ProxyParams params;
    params.alpha = 0.0;
    params.snr_tx = 10.0;
    const double proxy = proxy_group_rate(cs, iota_group(m), ru, params);
    const double zf =
        zf_group_rate_on_ru(cs, iota_group(m), ru, params.snr_tx).total_bits;
    REQUIRE(std::abs(proxy - zf) <= 1e-6,
            "orthogonal group proxy must match ZF within 1e-6 bits");
  }

  const int nt_max = 8;
  for (double alpha : {0.1, 0.3, 0.5}) {
    for (int m = 2; m <= nt_max - 1; ++m) {
      // Unit-norm channels with pairwise inner product exactly alpha:
      // h_i = sqrt(alpha) u + sqrt(1-alpha) e_i, {u, e_i} orthonormal.
      ChannelSet cs(m + 1, m, 26);
      for (int n = 0; n < 26; ++n) {
        for (int k = 0; k < m; ++k) {
          cs.h(n, k)[0] = std::sqrt(alpha);
          cs.h(n, k)[k + 1] = std::sqrt(1.0 - alpha);
        }
      }
      ProxyParams params;
      params.alpha = alpha;
      params.snr_tx = 25.0;
      const double proxy = proxy_group_rate(cs, iota_group(m), ru, params);
      const double zf =
          zf_group_rate_on_ru(cs, iota_group(m), ru, params.snr_tx)
              .total_bits;
      REQUIRE(std::abs(proxy - zf) <= 1e-6,
              "equicorrelated group proxy must match ZF within 1e-6 bits");
    }
  }
}

// 4. Exact solver agreement with the brute-force oracle.
void criterion_ilp_exactness() {
  const RuTree tree = build_tree(4);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int n_users = 2 + static_cast<int>(s % 4);       // 2..5
    const int n_antennas = 2 + static_cast<int>(s % 3);    // 2..4
    const int t = 1 + static_cast<int>(s % 5);             // 1..5

    SynthChannelParams p;
    p.seed = mix_seed(4000, s);
    const ChannelSet cs = synth_channels(p, n_antennas, n_users, 4);
    const CorrelationTable corr = build_correlation_table(cs, tree);
    const StrengthTable st = build_strength_table(cs);
    SampleParams sp;
    sp.alpha = 0.7;
    sp.t_samples = t;
    sp.max_group_size = std::min(n_antennas, n_users);
    sp.seed = mix_seed(4001, s);
    const CandidateCatalog cat = sample_groups(corr, tree, sp);
    ProxyParams pp;
    pp.alpha = sp.alpha;
    pp.snr_tx = 100.0;
    ProxyEvaluator rates(st, tree, pp, sp.max_group_size);

    const IlpModel model = build_model(cat, tree, rates);
    const ScheduleAssignment exact = solve(model);
    const ScheduleAssignment oracle = brute_force_schedule(cat, tree, rates);
    REQUIRE(exact.solve_status == SolveStatus::kOptimal,
            "small instances must solve to proven optimality");
    REQUIRE(exact.objective_proxy == oracle.objective_proxy,
            "solver objective must equal the brute-force objective exactly");
    REQUIRE(validate(exact, cat, tree, n_antennas).empty(),
            "solver schedule must pass validation");
    REQUIRE(validate(oracle, cat, tree, n_antennas).empty(),
            "oracle schedule must pass validation");
  }
}

// 5. Singleton inclusion makes the proxy objective dominate pure OFDMA.
void criterion_dominance() {
  ScenarioConfig cfg;
  cfg.levels = 4;
  cfg.n_antennas = 4;
  cfg.n_users = 8;
  cfg.alpha = 0.5;
  cfg.t_samples = 50;
  cfg.n_topologies = 3;
  cfg.n_realizations = 2;
  cfg.master_seed = 5005;
  const RunReport rep = run_scenario(cfg);
  REQUIRE(rep.failures.empty(), "no scenario cell may fail");

  std::map<int, double> pure_by_topology;
  for (const auto& c : rep.cells) {
    if (c.scheme == "pure_ofdma") pure_by_topology[c.topology] = c.proxy_bits;
  }
  int checked = 0;
  for (const auto& c : rep.cells) {
    if (c.scheme != "proxyselect") continue;
    REQUIRE(c.dominance_ok, "harness must assert proxy >= pure-OFDMA");
    REQUIRE(c.proxy_bits >= pure_by_topology.at(c.topology) - 1e-9,
            "proxy objective must dominate the pure-OFDMA optimum");
    REQUIRE(c.violations == 0, "schedules must be violation free");
    ++checked;
  }
  REQUIRE(checked == cfg.n_topologies * cfg.n_realizations,
          "every (topology, realization) must be checked");
}

// 6. Sampling contract: compatibility, dedup, size cap, edge budgets.
void criterion_sampling_contract() {
  SynthChannelParams p;
  p.seed = 6006;
  const ChannelSet cs = synth_channels(p, 4, 8, 4);
  const RuTree tree = build_tree(4);
  const CorrelationTable corr = build_correlation_table(cs, tree);

  SampleParams sp;
  sp.alpha = 0.55;
  sp.t_samples = 300;
  sp.max_group_size = 4;
  sp.seed = 42;
  const CandidateCatalog cat = sample_groups(corr, tree, sp);
  for (int q = 1; q <= tree.ru_count(); ++q) {
    std::set<std::vector<int>> seen;
    for (const auto& g : cat.per_ru[q - 1]) {
      REQUIRE(!g.empty() && static_cast<int>(g.size()) <= 4,
              "group size must stay within min(N_T, K)");
      REQUIRE(std::is_sorted(g.begin(), g.end()), "members must be sorted");
      REQUIRE(is_compatible(corr, g, q, sp.alpha),
              "every emitted group must be alpha-compatible on its RU");
      REQUIRE(seen.insert(g).second, "groups must be deduplicated per RU");
    }
    if (!tree.mu_mimo_allowed(q)) {
      REQUIRE(cat.per_ru[q - 1].size() == 8u,
              "SU-only RUs carry exactly the singletons");
    }
  }

  SampleParams one;
  one.alpha = 1.0;
  one.t_samples = 1;
  one.max_group_size = 4;
  const CandidateCatalog full = sample_groups(corr, tree, one);
  for (int q = 1; q <= tree.ru_count(); ++q) {
    if (!tree.mu_mimo_allowed(q)) continue;
    REQUIRE(full.per_ru[q - 1].back().size() == 4u,
            "alpha=1, T=1 must grow one full-size group");
  }

  SampleParams zero;
  zero.alpha = 0.9;
  zero.t_samples = 0;
  zero.max_group_size = 4;
  const CandidateCatalog none = sample_groups(corr, tree, zero);
  REQUIRE(none.total_groups() == 8u * tree.ru_count(),
          "T=0 must yield exactly the singleton catalog");
}

// 7. One full-size topology scheduled end to end inside the time budget.
void criterion_desk_scale() {
  const auto t0 = Clock::now();
  const RuTree tree = build_tree(7);
  SynthChannelParams p;
  p.seed = mix_seed(1, 0);
  const ChannelSet cs = synth_channels(p, 16, 48, 7);
  const CorrelationTable corr = build_correlation_table(cs, tree);
  const StrengthTable st = build_strength_table(cs);
  SampleParams sp;
  sp.alpha = 0.3;
  sp.t_samples = 200;
  sp.max_group_size = 16;
  sp.seed = mix_seed(mix_seed(1, 0), 0);
  const CandidateCatalog cat = sample_groups(corr, tree, sp);
  ProxyParams pp;
  pp.alpha = 0.3;
  pp.snr_tx = 100.0;
  ProxyEvaluator rates(st, tree, pp, 16);
  const IlpModel model = build_model(cat, tree, rates);
  SolveOptions opts;
  opts.time_limit_s = 55.0;
  opts.gap_tol = 0.01;
  const ScheduleAssignment sched = solve(model, opts);
  const std::chrono::duration<double> dt = Clock::now() - t0;

  REQUIRE(sched.solve_status == SolveStatus::kOptimal ||
              sched.gap <= 0.01 + 1e-12,
          "must reach optimality or a gap of at most 1%");
  REQUIRE(validate(sched, cat, tree, 16).empty(),
          "schedule must pass validation");
  REQUIRE(dt.count() < 60.0,
          "L=7, K=48, N_T=16, T=200 must finish inside 60 s");
  std::printf(
      "  desk scale: %.2f s total, %zu catalog groups, status %s, gap %.4f\n",
      dt.count(), cat.total_groups(),
      sched.solve_status == SolveStatus::kOptimal ? "optimal" : "gap",
      sched.gap);
}

// 8. Directional benchmark claims on synthetic indoor-style channels.
void criterion_directional_claims() {
  ScenarioConfig cfg;
  cfg.levels = 5;
  cfg.n_antennas = 8;
  cfg.n_users = 24;
  cfg.alpha = 0.3;
  cfg.t_samples = 300;
  cfg.n_topologies = 20;
  cfg.n_realizations = 3;
  cfg.channel.n_taps = 8;
  // A strong steering ray at 5 dB transmit SNR gives the heterogeneous
  // pairwise correlations of an indoor line-of-sight deployment; i.i.d.
  // Rayleigh channels concentrate every pair near 1/sqrt(N_T), which a 0.3
  // threshold cannot separate.
  cfg.channel.rician_k_db = 8.0;
  cfg.snr = 5.0;
  cfg.snr_is_db = true;
  cfg.master_seed = 1;
  const RunReport rep = run_scenario(cfg);
  REQUIRE(rep.failures.empty(), "no scenario cell may fail");

  const double px = mean_zf(rep, "proxyselect");
  const double pure = mean_zf(rep, "pure_ofdma");
  const double seq = mean_zf(rep, "sequential_greedy");
  const double unc = mean_zf(rep, "unconstrained_greedy");
  const double px_proxy = mean_proxy(rep, "proxyselect");

  std::printf("  mean ZF rate vs pure OFDMA:          %.3fx\n", px / pure);
  std::printf("  mean ZF rate vs sequential greedy:   %.3fx\n", px / seq);
  std::printf("  fraction of unconstrained greedy:    %.3f\n", px / unc);
  std::printf("  proxy objective over achieved ZF:    %.3f\n",
              px_proxy / px);

  for (const auto& c : rep.cells) {
    if (c.failed) continue;
    REQUIRE(c.violations == 0, "all schedules must be violation free");
    if (c.scheme == "proxyselect") {
      REQUIRE(c.dominance_ok, "dominance must hold on every cell");
    }
  }
  REQUIRE(px > pure, "mean ZF rate must beat pure OFDMA");
  REQUIRE(px >= seq, "mean ZF rate must reach sequential greedy");
  REQUIRE(unc >= px, "unconstrained greedy must stay the upper bound");
}

// 9. Monotone mean proxy objective across nested sampling budgets.
void criterion_monotone_sweep() {
  ScenarioConfig cfg;
  cfg.levels = 5;
  cfg.n_antennas = 8;
  cfg.n_users = 16;
  // 0.5 admits enough pairs that the catalog keeps growing across the
  // budgets instead of saturating at the first nonzero T.
  cfg.alpha = 0.5;
  cfg.n_topologies = 2;
  cfg.n_realizations = 1;
  cfg.master_seed = 909;
  cfg.incremental_t = true;
  cfg.schemes = {"proxyselect"};
  const std::vector<int> budgets{0, 50, 150, 600};
  const SweepResult sw = sweep_T(cfg, budgets);
  REQUIRE(sw.rows.size() == budgets.size(), "one row per budget");
  for (size_t i = 0; i + 1 < sw.rows.size(); ++i) {
    REQUIRE(sw.rows[i].mean_proxy_bits <= sw.rows[i + 1].mean_proxy_bits,
            "mean proxy objective must be nondecreasing in T");
  }
  std::printf("  mean proxy bits by T:");
  for (const auto& row : sw.rows) {
    std::printf(" %d:%.1f", static_cast<int>(row.x), row.mean_proxy_bits);
  }
  std::printf("\n");
}

}  // namespace

int main() {
  run_criterion(1, "resource unit structure", 1.0, criterion_ru_structure);
  run_criterion(2, "zero-forcing numerics", 10.0, criterion_zf_correctness);
  run_criterion(3, "proxy exactness", 5.0, criterion_proxy_exactness);
  run_criterion(4, "exact solver vs oracle", 60.0, criterion_ilp_exactness);
  run_criterion(5, "pure-OFDMA dominance", 0.0, criterion_dominance);
  run_criterion(6, "sampling contract", 5.0, criterion_sampling_contract);
  run_criterion(7, "desk-scale performance", 60.0, criterion_desk_scale);
  run_criterion(8, "directional benchmark claims", 600.0,
                criterion_directional_claims);
  run_criterion(9, "monotone sampling sweep", 0.0, criterion_monotone_sweep);

  if (g_criterion_failures > 0) {
    std::printf("%d of 9 criteria FAILED\n", g_criterion_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
