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

// Times each kernel that has both a serial reference path and an OpenMP
// path, and checks the two produce bit-identical results.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proxysel/baselines.hpp"
#include "proxysel/channel.hpp"
#include "proxysel/compat.hpp"
#include "proxysel/harness.hpp"
#include "proxysel/ilp.hpp"
#include "proxysel/parallel.hpp"
#include "proxysel/rng.hpp"
#include "proxysel/ru_tree.hpp"
#include "proxysel/zfbf.hpp"

namespace {

using namespace proxysel;
using Clock = std::chrono::steady_clock;

double best_of(int repeats, const std::function<void()>& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    fn();
    const std::chrono::duration<double> dt = Clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

struct BenchRow {
  std::string name;
  double serial_s = 0.0;
  double parallel_s = 0.0;
  bool identical = false;
};

void print_rows(const std::vector<BenchRow>& rows) {
  std::printf("%-28s %12s %12s %9s %10s\n", "kernel", "serial_s", "parallel_s",
              "speedup", "identical");
  for (const auto& r : rows) {
    std::printf("%-28s %12.4f %12.4f %8.2fx %10s\n", r.name.c_str(),
                r.serial_s, r.parallel_s,
                r.parallel_s > 0.0 ? r.serial_s / r.parallel_s : 0.0,
                r.identical ? "yes" : "NO");
  }
}

bool same_rates(const RateBreakdown& a, const RateBreakdown& b) {
  return a.total_bits == b.total_bits && a.per_user_bits == b.per_user_bits;
}

bool same_corr(const CorrelationTable& a, const CorrelationTable& b) {
  if (a.n_users() != b.n_users() || a.ru_count() != b.ru_count()) return false;
  for (int q = 1; q <= a.ru_count(); ++q) {
    for (int i = 0; i < a.n_users(); ++i) {
      for (int j = 0; j < a.n_users(); ++j) {
        if (a.avg(i, j, q) != b.avg(i, j, q)) return false;
      }
    }
  }
  return true;
}

bool same_strength(const StrengthTable& a, const StrengthTable& b) {
  if (a.n_users() != b.n_users() || a.n_subcarriers() != b.n_subcarriers()) {
    return false;
  }
  for (int k = 0; k < a.n_users(); ++k) {
    for (int n = 0; n < a.n_subcarriers(); ++n) {
      if (a.at(k, n) != b.at(k, n)) return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernel benchmark"};
  int levels = 6;
  int n_antennas = 8;
  int n_users = 24;
  int repeats = 3;
  double snr_db = 20.0;
  std::uint64_t seed = 1;
  app.add_option("--levels,-L", levels, "RU tree levels, 4..7");
  app.add_option("--antennas,-N", n_antennas, "Transmit antennas");
  app.add_option("--users,-K", n_users, "User count");
  app.add_option("--repeats", repeats, "Timing repetitions, best kept");
  app.add_option("--snr-db", snr_db, "Transmit SNR in dB");
  app.add_option("--seed", seed, "Channel seed");
  CLI11_PARSE(app, argc, argv);

  try {
    std::printf("threads available: %d\n\n", hardware_thread_count());

    SynthChannelParams cp;
    cp.seed = seed;
    const ChannelSet cs = synth_channels(cp, n_antennas, n_users, levels);
    const RuTree tree = build_tree(levels);
    const double snr = std::pow(10.0, snr_db / 10.0);
    std::vector<BenchRow> rows;

    CorrelationTable corr_s, corr_p;
    rows.push_back(
        {"correlation_table",
         best_of(repeats,
                 [&] {
                   corr_s = build_correlation_table(cs, tree,
                                                    ExecPolicy::kSerial);
                 }),
         best_of(repeats,
                 [&] {
                   corr_p = build_correlation_table(cs, tree,
                                                    ExecPolicy::kParallel);
                 }),
         false});
    rows.back().identical = same_corr(corr_s, corr_p);

    StrengthTable st_s, st_p;
    rows.push_back(
        {"strength_table",
         best_of(repeats,
                 [&] { st_s = build_strength_table(cs, ExecPolicy::kSerial); }),
         best_of(
             repeats,
             [&] { st_p = build_strength_table(cs, ExecPolicy::kParallel); }),
         false});
    rows.back().identical = same_strength(st_s, st_p);

    // Exact ZF rate over the whole band for one full-size group.
    std::vector<int> group(std::min(n_antennas, n_users));
    for (size_t i = 0; i < group.size(); ++i) group[i] = static_cast<int>(i);
    RateBreakdown zf_s, zf_p;
    rows.push_back(
        {"zf_group_rate_whole_band",
         best_of(repeats,
                 [&] {
                   zf_s = zf_group_rate_on_tones(cs, group, 0,
                                                 cs.n_subcarriers(), snr,
                                                 ExecPolicy::kSerial);
                 }),
         best_of(repeats,
                 [&] {
                   zf_p = zf_group_rate_on_tones(cs, group, 0,
                                                 cs.n_subcarriers(), snr,
                                                 ExecPolicy::kParallel);
                 }),
         false});
    rows.back().identical = same_rates(zf_s, zf_p);

    SampleParams sp;
    sp.alpha = 0.5;
    sp.t_samples = 2000;
    sp.max_group_size = std::min(n_antennas, n_users);
    sp.seed = mix_seed(seed, 0);
    SampleTrace tr_s, tr_p;
    rows.push_back(
        {"sample_trace",
         best_of(repeats,
                 [&] { tr_s = sample_trace(corr_s, tree, sp,
                                           ExecPolicy::kSerial); }),
         best_of(repeats,
                 [&] { tr_p = sample_trace(corr_s, tree, sp,
                                           ExecPolicy::kParallel); }),
         false});
    rows.back().identical = tr_s.samples_per_ru == tr_p.samples_per_ru;

    BaselineResult ug_s, ug_p;
    rows.push_back(
        {"unconstrained_greedy",
         best_of(repeats,
                 [&] {
                   ug_s = unconstrained_greedy(cs, n_antennas, snr,
                                               ExecPolicy::kSerial);
                 }),
         best_of(repeats,
                 [&] {
                   ug_p = unconstrained_greedy(cs, n_antennas, snr,
                                               ExecPolicy::kParallel);
                 }),
         false});
    rows.back().identical = ug_s.zf_rate_total == ug_p.zf_rate_total &&
                            ug_s.per_tone_groups == ug_p.per_tone_groups;

    // End-to-end scenario, topologies dispatched in parallel.
    ScenarioConfig cfg;
    cfg.levels = std::min(levels, 5);
    cfg.n_antennas = n_antennas;
    cfg.n_users = n_users;
    cfg.t_samples = 100;
    cfg.n_topologies = 4;
    cfg.n_realizations = 1;
    cfg.master_seed = seed;
    RunReport rep_s, rep_p;
    rows.push_back(
        {"run_scenario",
         best_of(1, [&] { rep_s = run_scenario(cfg, ExecPolicy::kSerial); }),
         best_of(1, [&] { rep_p = run_scenario(cfg, ExecPolicy::kParallel); }),
         false});
    // Per-cell runtimes vary between runs; compare the scheduling results.
    bool rep_equal = rep_s.cells.size() == rep_p.cells.size() &&
                     rep_s.failures == rep_p.failures;
    if (rep_equal) {
      for (size_t i = 0; i < rep_s.cells.size(); ++i) {
        const RunCell& a = rep_s.cells[i];
        const RunCell& b = rep_p.cells[i];
        rep_equal = rep_equal && a.scheme == b.scheme &&
                    a.proxy_bits == b.proxy_bits && a.zf_bits == b.zf_bits &&
                    a.violations == b.violations && a.status == b.status;
      }
    }
    rows.back().identical = rep_equal;

    print_rows(rows);
    const bool all_ok = std::all_of(rows.begin(), rows.end(),
                                    [](const BenchRow& r) {
                                      return r.identical;
                                    });
    if (!all_ok) {
      std::fprintf(stderr, "error: serial and parallel results differ\n");
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
