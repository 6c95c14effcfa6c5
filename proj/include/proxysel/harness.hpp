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

#ifndef PROXYSEL_HARNESS_HPP
#define PROXYSEL_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "proxysel/channel.hpp"
#include "proxysel/parallel.hpp"

namespace proxysel {

/// Scheme names accepted in ScenarioConfig::schemes.
extern const std::vector<std::string> kAllSchemes;

struct ScenarioConfig {
  int levels = 5;      // L
  int n_antennas = 8;  // N_T
  int n_users = 16;    // K
  double snr = 20.0;
  bool snr_is_db = true;
  double alpha = 0.3;
  int t_samples = 1000;
  int n_topologies = 50;
  int n_realizations = 10;
  SynthChannelParams channel;    // seed field ignored, derived per topology
  std::string channel_file;      // nonempty: load instead of synthesizing
  std::uint64_t master_seed = 1;
  std::vector<std::string> schemes = kAllSchemes;
  double time_limit_s = 60.0;
  bool incremental_t = true;  // sample once at max T, truncate per budget

  double snr_linear() const;
  void validate() const;
  bool operator==(const ScenarioConfig& other) const;
};

/// One (topology, realization, scheme) measurement. Baselines do not vary
/// with the sampling realization and appear once per topology, at
/// realization 0. proxy_bits is absent for the per-tone scheme, whose
/// groups live on single subcarriers, not RUs.
struct RunCell {
  int topology = 0;
  int realization = 0;
  std::string scheme;
  double alpha = 0.0;
  int t_samples = 0;
  bool has_proxy = false;
  double proxy_bits = 0.0;
  double zf_bits = 0.0;
  double runtime_s = 0.0;
  int violations = 0;
  std::string status;  // optimal | feasible_with_gap | heuristic
  double gap = 0.0;
  bool dominance_ok = true;  // proxyselect only: >= pure-OFDMA optimum
  bool failed = false;
  std::string error;

  bool operator==(const RunCell& other) const;
};

struct TopologyStat {
  int topology = 0;
  double synth_s = 0.0;
  double corr_cache_s = 0.0;

  bool operator==(const TopologyStat& other) const;
};

struct RunReport {
  ScenarioConfig config;
  std::vector<RunCell> cells;
  std::vector<TopologyStat> topology_stats;
  std::vector<std::string> failures;

  bool operator==(const RunReport& other) const;
};

/// Full grid run. Reproducible: the report is a function of the config.
/// Per-cell errors are recorded and the run continues.
RunReport run_scenario(const ScenarioConfig& cfg,
                       ExecPolicy policy = ExecPolicy::kParallel);

/// Mean / standard deviation of zf_bits over the successful cells of one
/// scheme, and the empirical CDF as (rate, cumulative fraction) points.
double mean_zf(const RunReport& report, const std::string& scheme);
double stddev_zf(const RunReport& report, const std::string& scheme);
double mean_proxy(const RunReport& report, const std::string& scheme);
std::vector<std::pair<double, double>> zf_cdf(const RunReport& report,
                                              const std::string& scheme);

struct SweepRow {
  double x = 0.0;  // the swept parameter value (alpha or T)
  double mean_proxy_bits = 0.0;
  double mean_zf_bits = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<RunReport> reports;  // one per swept value
};

/// run_scenario per alpha with shared topology seeds.
SweepResult sweep_alpha(const ScenarioConfig& cfg,
                        const std::vector<double>& alphas,
                        ExecPolicy policy = ExecPolicy::kParallel);

/// run_scenario per sampling budget. In incremental mode every budget is a
/// prefix of one trace per (topology, realization), so catalogs are nested
/// and the mean proxy objective cannot decrease with T.
SweepResult sweep_T(const ScenarioConfig& cfg, const std::vector<int>& t_list,
                    ExecPolicy policy = ExecPolicy::kParallel);

/// Writes the report. format "csv": the cell table plus one
/// "<path minus extension>.<scheme>.cdf.csv" per scheme; "json": a single
/// file mirroring the full report, plus the same CDF side files.
void emit(const RunReport& report, const std::string& format,
          const std::string& path);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

/// Flat "key = value" config file, '#' comments. Unknown keys are errors.
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

}  // namespace proxysel

#endif  // PROXYSEL_HARNESS_HPP
