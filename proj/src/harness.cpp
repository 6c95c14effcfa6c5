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

#include "proxysel/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "proxysel/baselines.hpp"
#include "proxysel/compat.hpp"
#include "proxysel/errors.hpp"
#include "proxysel/ilp.hpp"
#include "proxysel/proxy.hpp"
#include "proxysel/rng.hpp"

namespace proxysel {

const std::vector<std::string> kAllSchemes = {
    "proxyselect", "pure_ofdma", "sequential_greedy", "whole_band_greedy",
    "unconstrained_greedy"};

double ScenarioConfig::snr_linear() const {
  return snr_is_db ? std::pow(10.0, snr / 10.0) : snr;
}

void ScenarioConfig::validate() const {
  if (levels < 4 || levels > 7) {
    throw DomainError("levels must be in {4,5,6,7}, got " +
                      std::to_string(levels));
  }
  if (n_antennas < 1) throw DomainError("need at least one antenna");
  if (n_users < 1) throw DomainError("need at least one user");
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw DomainError("alpha must satisfy 0 <= alpha <= 1, got " +
                      std::to_string(alpha));
  }
  if (t_samples < 0) throw DomainError("t_samples must be >= 0");
  if (n_topologies < 1) throw DomainError("n_topologies must be >= 1");
  if (n_realizations < 1) throw DomainError("n_realizations must be >= 1");
  if (!(snr_linear() > 0.0) || !std::isfinite(snr_linear())) {
    throw DomainError("snr must be finite and positive");
  }
  if (!(time_limit_s > 0.0)) throw DomainError("time limit must be positive");
  if (schemes.empty()) throw DomainError("no schemes requested");
  std::set<std::string> seen;
  for (const auto& s : schemes) {
    if (std::find(kAllSchemes.begin(), kAllSchemes.end(), s) ==
        kAllSchemes.end()) {
      throw DomainError("unknown scheme '" + s + "'");
    }
    if (!seen.insert(s).second) {
      throw DomainError("scheme '" + s + "' requested twice");
    }
  }
  if (!channel_file.empty() && n_topologies != 1) {
    throw DomainError(
        "a channel file fixes the topology; use n_topologies = 1");
  }
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return levels == o.levels && n_antennas == o.n_antennas &&
         n_users == o.n_users && snr == o.snr && snr_is_db == o.snr_is_db &&
         alpha == o.alpha && t_samples == o.t_samples &&
         n_topologies == o.n_topologies &&
         n_realizations == o.n_realizations &&
         channel.n_taps == o.channel.n_taps &&
         channel.delay_spread_taps == o.channel.delay_spread_taps &&
         channel.per_user_gain_db == o.channel.per_user_gain_db &&
         channel.per_user_head_gain_db == o.channel.per_user_head_gain_db &&
         channel.rician_k_db == o.channel.rician_k_db &&
         channel_file == o.channel_file && master_seed == o.master_seed &&
         schemes == o.schemes && time_limit_s == o.time_limit_s &&
         incremental_t == o.incremental_t;
}

bool RunCell::operator==(const RunCell& o) const {
  return topology == o.topology && realization == o.realization &&
         scheme == o.scheme && alpha == o.alpha && t_samples == o.t_samples &&
         has_proxy == o.has_proxy && proxy_bits == o.proxy_bits &&
         zf_bits == o.zf_bits && runtime_s == o.runtime_s &&
         violations == o.violations && status == o.status && gap == o.gap &&
         dominance_ok == o.dominance_ok && failed == o.failed &&
         error == o.error;
}

bool TopologyStat::operator==(const TopologyStat& o) const {
  return topology == o.topology && synth_s == o.synth_s &&
         corr_cache_s == o.corr_cache_s;
}

bool RunReport::operator==(const RunReport& o) const {
  return config == o.config && cells == o.cells &&
         topology_stats == o.topology_stats && failures == o.failures;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kFeasibleWithGap:
      return "feasible_with_gap";
    default:
      return "infeasible_model";
  }
}

bool wants(const ScenarioConfig& cfg, const std::string& scheme) {
  return std::find(cfg.schemes.begin(), cfg.schemes.end(), scheme) !=
         cfg.schemes.end();
}

// Proxy objective of an already-built schedule under the scenario's alpha.
double schedule_proxy_rate(ProxyEvaluator& rates,
                           const ScheduleAssignment& schedule) {
  double sum = 0.0;
  for (const auto& [q, members] : schedule.assignments) {
    sum += rates.group_weight(q, members);
  }
  return sum;
}

// Everything shared by the schedulers of one topology.
struct TopologyContext {
  ChannelSet cs;
  RuTree tree;
  CorrelationTable corr;
  StrengthTable strengths;
  std::uint64_t topo_seed = 0;
  TopologyStat stat;
};

TopologyContext make_topology(const ScenarioConfig& cfg, int topo,
                              ExecPolicy policy) {
  TopologyContext ctx;
  ctx.stat.topology = topo;
  ctx.topo_seed = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(topo));
  ctx.tree = build_tree(cfg.levels);

  auto t0 = std::chrono::steady_clock::now();
  if (!cfg.channel_file.empty()) {
    ctx.cs = load_channels(cfg.channel_file);
  } else {
    SynthChannelParams p = cfg.channel;
    p.seed = ctx.topo_seed;
    ctx.cs = synth_channels(p, cfg.n_antennas, cfg.n_users, cfg.levels);
  }
  ctx.stat.synth_s = seconds_since(t0);

  if (ctx.cs.n_users() != cfg.n_users ||
      ctx.cs.n_antennas() != cfg.n_antennas ||
      ctx.cs.n_subcarriers() != ctx.tree.total_tones()) {
    throw DomainError("channels are " + std::to_string(ctx.cs.n_antennas()) +
                      " antennas x " + std::to_string(ctx.cs.n_users()) +
                      " users x " + std::to_string(ctx.cs.n_subcarriers()) +
                      " tones but the scenario needs " +
                      std::to_string(cfg.n_antennas) + " x " +
                      std::to_string(cfg.n_users) + " x " +
                      std::to_string(ctx.tree.total_tones()));
  }

  t0 = std::chrono::steady_clock::now();
  ctx.corr = build_correlation_table(ctx.cs, ctx.tree, policy);
  ctx.stat.corr_cache_s = seconds_since(t0);
  ctx.strengths = build_strength_table(ctx.cs, policy);
  return ctx;
}

// The pure-OFDMA optimum used for the dominance check; identical weights to
// the singleton entries of any ProxySelect model on the same channels.
double pure_ofdma_objective(const TopologyContext& ctx,
                            const ScenarioConfig& cfg) {
  ProxyParams p0;
  p0.alpha = 0.0;
  p0.snr_tx = cfg.snr_linear();
  ProxyEvaluator rates(ctx.strengths, ctx.tree, p0, 1);
  IlpModel model = build_model(singleton_catalog(cfg.n_users, ctx.tree),
                               ctx.tree, rates);
  SolveOptions so;
  so.time_limit_s = cfg.time_limit_s;
  return solve(model, so).objective_proxy;
}

RunCell make_cell(const ScenarioConfig& cfg, int topo, int realization,
                  const std::string& scheme, int t_samples) {
  RunCell c;
  c.topology = topo;
  c.realization = realization;
  c.scheme = scheme;
  c.alpha = cfg.alpha;
  c.t_samples = t_samples;
  return c;
}

// One ProxySelect run from an already-built catalog. `runtime_so_far`
// carries the sampling time that produced the catalog.
RunCell proxyselect_cell(const ScenarioConfig& cfg, TopologyContext& ctx,
                         ProxyEvaluator& rates, int topo, int realization,
                         int t_samples, const CandidateCatalog& catalog,
                         double runtime_so_far, double pure_objective,
                         ExecPolicy policy) {
  RunCell cell = make_cell(cfg, topo, realization, "proxyselect", t_samples);
  const auto t0 = std::chrono::steady_clock::now();
  IlpModel model = build_model(catalog, ctx.tree, rates);
  SolveOptions so;
  so.time_limit_s = cfg.time_limit_s;
  ScheduleAssignment sched = solve(model, so);
  cell.runtime_s = runtime_so_far + seconds_since(t0);

  cell.has_proxy = true;
  cell.proxy_bits = sched.objective_proxy;
  cell.zf_bits =
      schedule_zf_rate(ctx.cs, ctx.tree, sched, cfg.snr_linear(), policy);
  cell.violations = static_cast<int>(
      validate(sched, catalog, ctx.tree, cfg.n_antennas).size());
  cell.status = status_name(sched.solve_status);
  cell.gap = sched.gap;
  cell.dominance_ok = sched.objective_proxy >= pure_objective - 1e-9;
  return cell;
}

RunCell baseline_to_cell(const ScenarioConfig& cfg, TopologyContext& ctx,
                         ProxyEvaluator& rates, int topo,
                         const BaselineResult& br) {
  RunCell cell = make_cell(cfg, topo, 0, br.scheme, cfg.t_samples);
  cell.zf_bits = br.zf_rate_total;
  cell.runtime_s = br.runtime_s;
  if (br.scheme == "unconstrained_greedy") {
    cell.status = "heuristic";  // per-tone groups, no RU schedule to check
    return cell;
  }
  CandidateCatalog counts_only;
  counts_only.n_users = cfg.n_users;
  cell.violations = static_cast<int>(
      validate(br.schedule, counts_only, ctx.tree, cfg.n_antennas).size());
  cell.has_proxy = true;
  if (br.scheme == "pure_ofdma") {
    cell.proxy_bits = br.schedule.objective_proxy;
    cell.status = status_name(br.schedule.solve_status);
    cell.gap = br.schedule.gap;
  } else {
    cell.proxy_bits = schedule_proxy_rate(rates, br.schedule);
    cell.status = "heuristic";
  }
  return cell;
}

BaselineResult run_baseline(const ScenarioConfig& cfg, TopologyContext& ctx,
                            const std::string& scheme, ExecPolicy policy) {
  const double snr = cfg.snr_linear();
  if (scheme == "pure_ofdma") {
    SolveOptions so;
    so.time_limit_s = cfg.time_limit_s;
    return pure_ofdma(ctx.cs, ctx.tree, snr, so);
  }
  if (scheme == "sequential_greedy") {
    return sequential_greedy(ctx.cs, ctx.tree, cfg.n_antennas, snr);
  }
  if (scheme == "whole_band_greedy") {
    return whole_band_greedy(ctx.cs, ctx.tree, cfg.n_antennas, snr);
  }
  return unconstrained_greedy(ctx.cs, cfg.n_antennas, snr, policy);
}

struct TopologyOutput {
  std::vector<RunCell> cells;
  TopologyStat stat;
  std::vector<std::string> failures;
};

void record_failure(TopologyOutput& out, RunCell cell,
                    const std::string& what) {
  cell.failed = true;
  cell.error = what;
  out.failures.push_back("topology " + std::to_string(cell.topology) +
                         " scheme " + cell.scheme + " realization " +
                         std::to_string(cell.realization) + ": " + what);
  out.cells.push_back(std::move(cell));
}

TopologyOutput run_topology(const ScenarioConfig& cfg, int topo,
                            ExecPolicy policy) {
  TopologyOutput out;
  TopologyContext ctx = make_topology(cfg, topo, policy);
  out.stat = ctx.stat;

  const int max_group = std::min(cfg.n_antennas, cfg.n_users);
  ProxyParams pp;
  pp.alpha = cfg.alpha;
  pp.snr_tx = cfg.snr_linear();
  ProxyEvaluator rates(ctx.strengths, ctx.tree, pp, max_group);

  double pure_objective = 0.0;
  if (wants(cfg, "proxyselect")) {
    pure_objective = pure_ofdma_objective(ctx, cfg);
  }

  for (const auto& scheme : cfg.schemes) {
    if (scheme == "proxyselect") {
      for (int r = 0; r < cfg.n_realizations; ++r) {
        RunCell cell = make_cell(cfg, topo, r, scheme, cfg.t_samples);
        try {
          const std::uint64_t real_seed =
              mix_seed(ctx.topo_seed, static_cast<std::uint64_t>(r));
          const std::uint64_t sample_seed =
              cfg.incremental_t
                  ? real_seed
                  : mix_seed(real_seed,
                             static_cast<std::uint64_t>(cfg.t_samples));
          const auto t0 = std::chrono::steady_clock::now();
          SampleParams sp;
          sp.alpha = cfg.alpha;
          sp.t_samples = cfg.t_samples;
          sp.max_group_size = max_group;
          sp.seed = sample_seed;
          CandidateCatalog catalog =
              sample_groups(ctx.corr, ctx.tree, sp, policy);
          const double sample_s = seconds_since(t0);
          out.cells.push_back(proxyselect_cell(cfg, ctx, rates, topo, r,
                                               cfg.t_samples, catalog,
                                               sample_s, pure_objective,
                                               policy));
        } catch (const std::exception& e) {
          record_failure(out, std::move(cell), e.what());
        }
      }
    } else {
      RunCell cell = make_cell(cfg, topo, 0, scheme, cfg.t_samples);
      try {
        BaselineResult br = run_baseline(cfg, ctx, scheme, policy);
        out.cells.push_back(baseline_to_cell(cfg, ctx, rates, topo, br));
      } catch (const std::exception& e) {
        record_failure(out, std::move(cell), e.what());
      }
    }
  }
  return out;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& cfg, ExecPolicy policy) {
  cfg.validate();
  RunReport report;
  report.config = cfg;

  std::vector<TopologyOutput> outs(cfg.n_topologies);
#pragma omp parallel for schedule(dynamic) \
    if (policy == ExecPolicy::kParallel && cfg.n_topologies > 1)
  for (int topo = 0; topo < cfg.n_topologies; ++topo) {
    try {
      outs[topo] = run_topology(cfg, topo, policy);
    } catch (const std::exception& e) {
      outs[topo].stat.topology = topo;
      outs[topo].failures.push_back("topology " + std::to_string(topo) +
                                    ": " + e.what());
    }
  }

  for (auto& out : outs) {
    report.cells.insert(report.cells.end(), out.cells.begin(),
                        out.cells.end());
    report.topology_stats.push_back(out.stat);
    report.failures.insert(report.failures.end(), out.failures.begin(),
                           out.failures.end());
  }
  return report;
}

namespace {

std::vector<double> scheme_values(const RunReport& report,
                                  const std::string& scheme, bool proxy) {
  std::vector<double> vals;
  for (const auto& c : report.cells) {
    if (c.failed || c.scheme != scheme) continue;
    if (proxy && !c.has_proxy) continue;
    vals.push_back(proxy ? c.proxy_bits : c.zf_bits);
  }
  return vals;
}

double mean_of(const std::vector<double>& vals) {
  if (vals.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (double v : vals) sum += v;
  return sum / static_cast<double>(vals.size());
}

}  // namespace

double mean_zf(const RunReport& report, const std::string& scheme) {
  return mean_of(scheme_values(report, scheme, false));
}

double mean_proxy(const RunReport& report, const std::string& scheme) {
  return mean_of(scheme_values(report, scheme, true));
}

double stddev_zf(const RunReport& report, const std::string& scheme) {
  std::vector<double> vals = scheme_values(report, scheme, false);
  if (vals.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double mean = mean_of(vals);
  double ss = 0.0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(vals.size()));
}

std::vector<std::pair<double, double>> zf_cdf(const RunReport& report,
                                              const std::string& scheme) {
  std::vector<double> vals = scheme_values(report, scheme, false);
  std::sort(vals.begin(), vals.end());
  std::vector<std::pair<double, double>> pts;
  pts.reserve(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) {
    pts.emplace_back(vals[i], static_cast<double>(i + 1) /
                                  static_cast<double>(vals.size()));
  }
  return pts;
}

SweepResult sweep_alpha(const ScenarioConfig& cfg,
                        const std::vector<double>& alphas, ExecPolicy policy) {
  if (alphas.empty()) throw DomainError("alpha list is empty");
  SweepResult res;
  for (double a : alphas) {
    ScenarioConfig c = cfg;
    c.alpha = a;
    RunReport rep = run_scenario(c, policy);
    res.rows.push_back(
        {a, mean_proxy(rep, "proxyselect"), mean_zf(rep, "proxyselect")});
    res.reports.push_back(std::move(rep));
  }
  return res;
}

namespace {

// Shared-trace sweep: one trace per (topology, realization) at the largest
// budget, truncated per T. Catalogs are nested across T by construction.
SweepResult sweep_T_incremental(const ScenarioConfig& cfg,
                                const std::vector<int>& t_list,
                                ExecPolicy policy) {
  const int t_max = *std::max_element(t_list.begin(), t_list.end());
  const size_t n_t = t_list.size();

  struct PerTopology {
    std::vector<std::vector<RunCell>> cells_per_t;
    std::vector<RunCell> baseline_cells;
    TopologyStat stat;
    std::vector<std::string> failures;
  };
  std::vector<PerTopology> outs(cfg.n_topologies);

#pragma omp parallel for schedule(dynamic) \
    if (policy == ExecPolicy::kParallel && cfg.n_topologies > 1)
  for (int topo = 0; topo < cfg.n_topologies; ++topo) {
    auto& out = outs[topo];
    out.cells_per_t.resize(n_t);
    try {
      TopologyContext ctx = make_topology(cfg, topo, policy);
      out.stat = ctx.stat;
      const int max_group = std::min(cfg.n_antennas, cfg.n_users);
      ProxyParams pp;
      pp.alpha = cfg.alpha;
      pp.snr_tx = cfg.snr_linear();
      ProxyEvaluator rates(ctx.strengths, ctx.tree, pp, max_group);
      const double pure_objective = wants(cfg, "proxyselect")
                                        ? pure_ofdma_objective(ctx, cfg)
                                        : 0.0;

      for (const auto& scheme : cfg.schemes) {
        if (scheme == "proxyselect") continue;
        RunCell cell = make_cell(cfg, topo, 0, scheme, cfg.t_samples);
        try {
          BaselineResult br = run_baseline(cfg, ctx, scheme, policy);
          out.baseline_cells.push_back(
              baseline_to_cell(cfg, ctx, rates, topo, br));
        } catch (const std::exception& e) {
          cell.failed = true;
          cell.error = e.what();
          out.failures.push_back("topology " + std::to_string(topo) +
                                 " scheme " + scheme + ": " + e.what());
          out.baseline_cells.push_back(std::move(cell));
        }
      }

      if (wants(cfg, "proxyselect")) {
        for (int r = 0; r < cfg.n_realizations; ++r) {
          const std::uint64_t real_seed =
              mix_seed(ctx.topo_seed, static_cast<std::uint64_t>(r));
          SampleParams sp;
          sp.alpha = cfg.alpha;
          sp.t_samples = t_max;
          sp.max_group_size = max_group;
          sp.seed = real_seed;
          SampleTrace trace;
          try {
            trace = sample_trace(ctx.corr, ctx.tree, sp, policy);
          } catch (const std::exception& e) {
            for (size_t ti = 0; ti < n_t; ++ti) {
              RunCell cell =
                  make_cell(cfg, topo, r, "proxyselect", t_list[ti]);
              cell.failed = true;
              cell.error = e.what();
              out.cells_per_t[ti].push_back(std::move(cell));
            }
            out.failures.push_back("topology " + std::to_string(topo) +
                                   " realization " + std::to_string(r) +
                                   ": " + std::string(e.what()));
            continue;
          }
          for (size_t ti = 0; ti < n_t; ++ti) {
            RunCell cell = make_cell(cfg, topo, r, "proxyselect", t_list[ti]);
            try {
              const auto t0 = std::chrono::steady_clock::now();
              CandidateCatalog catalog =
                  catalog_from_trace(trace, ctx.tree, t_list[ti]);
              const double cut_s = seconds_since(t0);
              out.cells_per_t[ti].push_back(proxyselect_cell(
                  cfg, ctx, rates, topo, r, t_list[ti], catalog, cut_s,
                  pure_objective, policy));
            } catch (const std::exception& e) {
              cell.failed = true;
              cell.error = e.what();
              out.failures.push_back(
                  "topology " + std::to_string(topo) + " realization " +
                  std::to_string(r) + " T=" + std::to_string(t_list[ti]) +
                  ": " + std::string(e.what()));
              out.cells_per_t[ti].push_back(std::move(cell));
            }
          }
        }
      }
    } catch (const std::exception& e) {
      out.stat.topology = topo;
      out.failures.push_back("topology " + std::to_string(topo) + ": " +
                             e.what());
    }
  }

  SweepResult res;
  for (size_t ti = 0; ti < n_t; ++ti) {
    RunReport rep;
    rep.config = cfg;
    rep.config.t_samples = t_list[ti];
    for (const auto& out : outs) {
      for (const auto& c : out.cells_per_t[ti]) rep.cells.push_back(c);
      for (RunCell c : out.baseline_cells) {
        c.t_samples = t_list[ti];
        rep.cells.push_back(std::move(c));
      }
      rep.topology_stats.push_back(out.stat);
      rep.failures.insert(rep.failures.end(), out.failures.begin(),
                          out.failures.end());
    }
    res.rows.push_back({static_cast<double>(t_list[ti]),
                        mean_proxy(rep, "proxyselect"),
                        mean_zf(rep, "proxyselect")});
    res.reports.push_back(std::move(rep));
  }
  return res;
}

}  // namespace

SweepResult sweep_T(const ScenarioConfig& cfg, const std::vector<int>& t_list,
                    ExecPolicy policy) {
  if (t_list.empty()) throw DomainError("T list is empty");
  for (int t : t_list) {
    if (t < 0) throw DomainError("T must be >= 0, got " + std::to_string(t));
  }
  cfg.validate();
  if (cfg.incremental_t) return sweep_T_incremental(cfg, t_list, policy);

  SweepResult res;
  for (int t : t_list) {
    ScenarioConfig c = cfg;
    c.t_samples = t;
    RunReport rep = run_scenario(c, policy);
    res.rows.push_back({static_cast<double>(t), mean_proxy(rep, "proxyselect"),
                        mean_zf(rep, "proxyselect")});
    res.reports.push_back(std::move(rep));
  }
  return res;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string strip_extension(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash)) {
    return path;
  }
  return path.substr(0, dot);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path);
}

void emit_cdf_files(const RunReport& report, const std::string& base) {
  for (const auto& scheme : kAllSchemes) {
    const auto pts = zf_cdf(report, scheme);
    if (pts.empty()) continue;
    std::string csv = "rate,cumulative_fraction\n";
    for (const auto& [rate, frac] : pts) {
      csv += fmt_double(rate) + "," + fmt_double(frac) + "\n";
    }
    write_file(base + "." + scheme + ".cdf.csv", csv);
  }
}

nlohmann::json config_to_json(const ScenarioConfig& c) {
  nlohmann::json ch = {{"n_taps", c.channel.n_taps},
                       {"delay_spread_taps", c.channel.delay_spread_taps}};
  if (c.channel.per_user_gain_db) {
    ch["per_user_gain_db"] = *c.channel.per_user_gain_db;
  } else {
    ch["per_user_gain_db"] = nullptr;
  }
  if (c.channel.per_user_head_gain_db) {
    ch["per_user_head_gain_db"] = *c.channel.per_user_head_gain_db;
  } else {
    ch["per_user_head_gain_db"] = nullptr;
  }
  if (c.channel.rician_k_db) {
    ch["rician_k_db"] = *c.channel.rician_k_db;
  } else {
    ch["rician_k_db"] = nullptr;
  }
  return {{"levels", c.levels},
          {"n_antennas", c.n_antennas},
          {"n_users", c.n_users},
          {"snr", c.snr},
          {"snr_is_db", c.snr_is_db},
          {"alpha", c.alpha},
          {"t_samples", c.t_samples},
          {"n_topologies", c.n_topologies},
          {"n_realizations", c.n_realizations},
          {"channel", ch},
          {"channel_file", c.channel_file},
          {"master_seed", c.master_seed},
          {"schemes", c.schemes},
          {"time_limit_s", c.time_limit_s},
          {"incremental_t", c.incremental_t}};
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  c.levels = j.at("levels").get<int>();
  c.n_antennas = j.at("n_antennas").get<int>();
  c.n_users = j.at("n_users").get<int>();
  c.snr = j.at("snr").get<double>();
  c.snr_is_db = j.at("snr_is_db").get<bool>();
  c.alpha = j.at("alpha").get<double>();
  c.t_samples = j.at("t_samples").get<int>();
  c.n_topologies = j.at("n_topologies").get<int>();
  c.n_realizations = j.at("n_realizations").get<int>();
  const auto& ch = j.at("channel");
  c.channel.n_taps = ch.at("n_taps").get<int>();
  c.channel.delay_spread_taps = ch.at("delay_spread_taps").get<double>();
  if (!ch.at("per_user_gain_db").is_null()) {
    c.channel.per_user_gain_db =
        ch.at("per_user_gain_db").get<std::vector<double>>();
  }
  if (!ch.at("per_user_head_gain_db").is_null()) {
    c.channel.per_user_head_gain_db =
        ch.at("per_user_head_gain_db").get<std::vector<std::vector<double>>>();
  }
  if (!ch.at("rician_k_db").is_null()) {
    c.channel.rician_k_db = ch.at("rician_k_db").get<double>();
  }
  c.channel_file = j.at("channel_file").get<std::string>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.schemes = j.at("schemes").get<std::vector<std::string>>();
  c.time_limit_s = j.at("time_limit_s").get<double>();
  c.incremental_t = j.at("incremental_t").get<bool>();
  return c;
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"topology", c.topology},
                     {"realization", c.realization},
                     {"scheme", c.scheme},
                     {"alpha", c.alpha},
                     {"t_samples", c.t_samples},
                     {"has_proxy", c.has_proxy},
                     {"proxy_bits", c.proxy_bits},
                     {"zf_bits", c.zf_bits},
                     {"runtime_s", c.runtime_s},
                     {"violations", c.violations},
                     {"status", c.status},
                     {"gap", c.gap},
                     {"dominance_ok", c.dominance_ok},
                     {"failed", c.failed},
                     {"error", c.error}});
  }
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& s : report.topology_stats) {
    stats.push_back({{"topology", s.topology},
                     {"synth_s", s.synth_s},
                     {"corr_cache_s", s.corr_cache_s}});
  }
  nlohmann::json aggregates;
  for (const auto& scheme : kAllSchemes) {
    const auto pts = zf_cdf(report, scheme);
    if (pts.empty()) continue;
    nlohmann::json cdf = nlohmann::json::array();
    for (const auto& [rate, frac] : pts) cdf.push_back({rate, frac});
    aggregates[scheme] = {{"mean_zf", mean_zf(report, scheme)},
                          {"stddev_zf", stddev_zf(report, scheme)},
                          {"cdf", cdf}};
  }
  nlohmann::json j = {{"config", config_to_json(report.config)},
                      {"cells", cells},
                      {"topology_stats", stats},
                      {"failures", report.failures},
                      {"aggregates", aggregates}};
  return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    RunReport report;
    report.config = config_from_json(j.at("config"));
    for (const auto& jc : j.at("cells")) {
      RunCell c;
      c.topology = jc.at("topology").get<int>();
      c.realization = jc.at("realization").get<int>();
      c.scheme = jc.at("scheme").get<std::string>();
      c.alpha = jc.at("alpha").get<double>();
      c.t_samples = jc.at("t_samples").get<int>();
      c.has_proxy = jc.at("has_proxy").get<bool>();
      c.proxy_bits = jc.at("proxy_bits").get<double>();
      c.zf_bits = jc.at("zf_bits").get<double>();
      c.runtime_s = jc.at("runtime_s").get<double>();
      c.violations = jc.at("violations").get<int>();
      c.status = jc.at("status").get<std::string>();
      c.gap = jc.at("gap").get<double>();
      c.dominance_ok = jc.at("dominance_ok").get<bool>();
      c.failed = jc.at("failed").get<bool>();
      c.error = jc.at("error").get<std::string>();
      report.cells.push_back(std::move(c));
    }
    for (const auto& js : j.at("topology_stats")) {
      TopologyStat s;
      s.topology = js.at("topology").get<int>();
      s.synth_s = js.at("synth_s").get<double>();
      s.corr_cache_s = js.at("corr_cache_s").get<double>();
      report.topology_stats.push_back(s);
    }
    report.failures = j.at("failures").get<std::vector<std::string>>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad report JSON: ") + e.what());
  }
}

void emit(const RunReport& report, const std::string& format,
          const std::string& path) {
  if (format == "csv") {
    std::string csv =
        "topology,realization,scheme,alpha,T,proxy_bits,zf_bits,runtime_s,"
        "violations\n";
    for (const auto& c : report.cells) {
      if (c.failed) continue;  // failures are carried by the JSON mirror
      csv += std::to_string(c.topology) + "," +
             std::to_string(c.realization) + "," + c.scheme + "," +
             fmt_double(c.alpha) + "," + std::to_string(c.t_samples) + "," +
             (c.has_proxy ? fmt_double(c.proxy_bits) : std::string()) + "," +
             fmt_double(c.zf_bits) + "," + fmt_double(c.runtime_s) + "," +
             std::to_string(c.violations) + "\n";
    }
    write_file(path, csv);
  } else if (format == "json") {
    write_file(path, report_to_json(report));
  } else {
    throw DomainError("format must be csv or json, got '" + format + "'");
  }
  emit_cdf_files(report, strip_extension(path));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& v, int lineno) {
  size_t pos = 0;
  long x;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(lineno) +
                     ": expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) {
    throw ParseError("line " + std::to_string(lineno) +
                     ": trailing characters after integer '" + v + "'");
  }
  return x;
}

double parse_double(const std::string& v, int lineno) {
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(lineno) +
                     ": expected a number, got '" + v + "'");
  }
  if (pos != v.size()) {
    throw ParseError("line " + std::to_string(lineno) +
                     ": trailing characters after number '" + v + "'");
  }
  return x;
}

bool parse_bool(const std::string& v, int lineno) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("line " + std::to_string(lineno) +
                   ": expected true/false, got '" + v + "'");
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "levels") {
      cfg.levels = static_cast<int>(parse_long(val, lineno));
    } else if (key == "n_antennas") {
      cfg.n_antennas = static_cast<int>(parse_long(val, lineno));
    } else if (key == "n_users") {
      cfg.n_users = static_cast<int>(parse_long(val, lineno));
    } else if (key == "snr_db") {
      cfg.snr = parse_double(val, lineno);
      cfg.snr_is_db = true;
    } else if (key == "snr_linear") {
      cfg.snr = parse_double(val, lineno);
      cfg.snr_is_db = false;
    } else if (key == "alpha") {
      cfg.alpha = parse_double(val, lineno);
    } else if (key == "t_samples") {
      cfg.t_samples = static_cast<int>(parse_long(val, lineno));
    } else if (key == "n_topologies") {
      cfg.n_topologies = static_cast<int>(parse_long(val, lineno));
    } else if (key == "n_realizations") {
      cfg.n_realizations = static_cast<int>(parse_long(val, lineno));
    } else if (key == "n_taps") {
      cfg.channel.n_taps = static_cast<int>(parse_long(val, lineno));
    } else if (key == "delay_spread_taps") {
      cfg.channel.delay_spread_taps = parse_double(val, lineno);
    } else if (key == "rician_k_db") {
      cfg.channel.rician_k_db = parse_double(val, lineno);
    } else if (key == "master_seed") {
      try {
        size_t pos = 0;
        cfg.master_seed = std::stoull(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": expected an unsigned integer, got '" + val + "'");
      }
    } else if (key == "channel_file") {
      cfg.channel_file = val;
    } else if (key == "time_limit_s") {
      cfg.time_limit_s = parse_double(val, lineno);
    } else if (key == "incremental_t") {
      cfg.incremental_t = parse_bool(val, lineno);
    } else if (key == "schemes") {
      cfg.schemes.clear();
      std::istringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const std::string name = trim(item);
        if (!name.empty()) cfg.schemes.push_back(name);
      }
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" +
                       key + "'");
    }
  }
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace proxysel
