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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "proxysel/baselines.hpp"
#include "proxysel/channel.hpp"
#include "proxysel/compat.hpp"
#include "proxysel/errors.hpp"
#include "proxysel/harness.hpp"
#include "proxysel/ilp.hpp"
#include "proxysel/proxy.hpp"
#include "proxysel/rng.hpp"
#include "proxysel/ru_tree.hpp"

namespace {

using namespace proxysel;

// Scenario flags shared by run / sweep-alpha / sweep-t. Values given on the
// command line override the config file.
struct ScenarioFlags {
  std::string config_file;
  int levels = 0;
  int n_antennas = 0;
  int n_users = 0;
  double snr_db = 0.0;
  double snr_linear = 0.0;
  double alpha = 0.0;
  int t_samples = 0;
  int n_topologies = 0;
  int n_realizations = 0;
  int n_taps = 0;
  double delay_spread = 0.0;
  double rician_k_db = 0.0;
  std::uint64_t master_seed = 0;
  std::string channel_file;
  double time_limit_s = 0.0;
  std::string schemes;
  bool independent_t = false;
  bool serial = false;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags* f) {
  cmd->add_option("--config", f->config_file,
                  "Scenario config file (key = value lines)");
  cmd->add_option("--levels,-L", f->levels, "RU tree levels, 4..7");
  cmd->add_option("--antennas,-N", f->n_antennas, "Transmit antennas N_T");
  cmd->add_option("--users,-K", f->n_users, "User count K");
  cmd->add_option("--snr-db", f->snr_db, "Transmit SNR in dB");
  cmd->add_option("--snr-linear", f->snr_linear, "Transmit SNR, linear");
  cmd->add_option("--alpha,-a", f->alpha, "Compatibility threshold in [0,1]");
  cmd->add_option("--t-samples,-T", f->t_samples,
                  "Sampling repetitions per RU");
  cmd->add_option("--topologies", f->n_topologies, "Topology count");
  cmd->add_option("--realizations", f->n_realizations,
                  "Sampling realizations per topology");
  cmd->add_option("--n-taps", f->n_taps, "Channel taps");
  cmd->add_option("--delay-spread", f->delay_spread,
                  "Power-delay decay constant, in taps");
  cmd->add_option("--rician-k-db", f->rician_k_db,
                  "Line-of-sight Rician K factor in dB (omit for Rayleigh)");
  cmd->add_option("--master-seed", f->master_seed, "Master seed");
  cmd->add_option("--channel-file", f->channel_file,
                  "Load channels from file instead of synthesizing");
  cmd->add_option("--time-limit", f->time_limit_s,
                  "Solver time limit per instance, seconds");
  cmd->add_option("--schemes", f->schemes,
                  "Comma-separated scheme list (default: all)");
  cmd->add_flag("--independent-t", f->independent_t,
                "Resample from scratch per T in sweep-t");
  cmd->add_flag("--serial", f->serial, "Disable the parallel execution path");
}

ScenarioConfig build_config(const CLI::App* cmd, const ScenarioFlags& f) {
  ScenarioConfig cfg;
  if (!f.config_file.empty()) cfg = parse_config_file(f.config_file);
  if (cmd->count("--levels")) cfg.levels = f.levels;
  if (cmd->count("--antennas")) cfg.n_antennas = f.n_antennas;
  if (cmd->count("--users")) cfg.n_users = f.n_users;
  if (cmd->count("--snr-db")) {
    cfg.snr = f.snr_db;
    cfg.snr_is_db = true;
  }
  if (cmd->count("--snr-linear")) {
    cfg.snr = f.snr_linear;
    cfg.snr_is_db = false;
  }
  if (cmd->count("--alpha")) cfg.alpha = f.alpha;
  if (cmd->count("--t-samples")) cfg.t_samples = f.t_samples;
  if (cmd->count("--topologies")) cfg.n_topologies = f.n_topologies;
  if (cmd->count("--realizations")) cfg.n_realizations = f.n_realizations;
  if (cmd->count("--n-taps")) cfg.channel.n_taps = f.n_taps;
  if (cmd->count("--delay-spread")) {
    cfg.channel.delay_spread_taps = f.delay_spread;
  }
  if (cmd->count("--rician-k-db")) cfg.channel.rician_k_db = f.rician_k_db;
  if (cmd->count("--master-seed")) cfg.master_seed = f.master_seed;
  if (cmd->count("--channel-file")) cfg.channel_file = f.channel_file;
  if (cmd->count("--time-limit")) cfg.time_limit_s = f.time_limit_s;
  if (cmd->count("--schemes")) {
    cfg.schemes.clear();
    std::stringstream ss(f.schemes);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) cfg.schemes.push_back(item);
    }
  }
  if (cmd->count("--independent-t")) cfg.incremental_t = false;
  cfg.validate();
  return cfg;
}

ExecPolicy policy_of(const ScenarioFlags& f) {
  return f.serial ? ExecPolicy::kSerial : ExecPolicy::kParallel;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

int scheme_summary(const RunReport& rep) {
  int dominance_failures = 0;
  for (const auto& scheme : kAllSchemes) {
    const double mz = mean_zf(rep, scheme);
    if (std::isnan(mz)) continue;
    std::printf("%-22s mean_zf=%14.2f stddev_zf=%12.2f", scheme.c_str(), mz,
                stddev_zf(rep, scheme));
    const double mp = mean_proxy(rep, scheme);
    if (!std::isnan(mp)) std::printf(" mean_proxy=%14.2f", mp);
    std::printf("\n");
  }
  for (const auto& c : rep.cells) {
    if (c.scheme == "proxyselect" && !c.failed && !c.dominance_ok) {
      ++dominance_failures;
    }
  }
  std::printf("dominance: %s\n",
              dominance_failures == 0 ? "ok" : "VIOLATED");
  if (!rep.failures.empty()) {
    std::printf("failures: %zu\n", rep.failures.size());
    for (const auto& fl : rep.failures) std::printf("  %s\n", fl.c_str());
  }
  return dominance_failures == 0 ? 0 : 1;
}

int cmd_run(const CLI::App* cmd, const ScenarioFlags& f,
            const std::string& out, const std::string& format) {
  ScenarioConfig cfg = build_config(cmd, f);
  RunReport rep = run_scenario(cfg, policy_of(f));
  if (!out.empty()) emit(rep, format, out);
  return scheme_summary(rep);
}

std::string sweep_rows_csv(const std::string& x_name, const SweepResult& sw) {
  std::string csv = x_name + ",mean_proxy_bits,mean_zf_bits\n";
  char buf[128];
  for (const auto& row : sw.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", row.x,
                  row.mean_proxy_bits, row.mean_zf_bits);
    csv += buf;
  }
  return csv;
}

int cmd_sweep_alpha(const CLI::App* cmd, const ScenarioFlags& f,
                    const std::vector<double>& alphas, const std::string& out,
                    bool emit_reports) {
  ScenarioConfig cfg = build_config(cmd, f);
  SweepResult sw = sweep_alpha(cfg, alphas, policy_of(f));
  const std::string csv = sweep_rows_csv("alpha", sw);
  if (!out.empty()) {
    write_text(out, csv);
    if (emit_reports) {
      for (const auto& rep : sw.reports) {
        char suffix[64];
        std::snprintf(suffix, sizeof(suffix), ".alpha%g.json",
                      rep.config.alpha);
        write_text(out + suffix, report_to_json(rep));
      }
    }
  }
  std::fputs(csv.c_str(), stdout);
  return 0;
}

int cmd_sweep_t(const CLI::App* cmd, const ScenarioFlags& f,
                const std::vector<int>& t_list, const std::string& out,
                bool emit_reports) {
  ScenarioConfig cfg = build_config(cmd, f);
  SweepResult sw = sweep_T(cfg, t_list, policy_of(f));
  const std::string csv = sweep_rows_csv("T", sw);
  if (!out.empty()) {
    write_text(out, csv);
    if (emit_reports) {
      for (const auto& rep : sw.reports) {
        char suffix[64];
        std::snprintf(suffix, sizeof(suffix), ".T%d.json",
                      rep.config.t_samples);
        write_text(out + suffix, report_to_json(rep));
      }
    }
  }
  std::fputs(csv.c_str(), stdout);
  return 0;
}

int cmd_synth(const ScenarioFlags& f, const CLI::App* cmd, int topology,
              const std::string& out) {
  SynthChannelParams p;
  if (cmd->count("--n-taps")) p.n_taps = f.n_taps;
  if (cmd->count("--delay-spread")) p.delay_spread_taps = f.delay_spread;
  if (cmd->count("--rician-k-db")) p.rician_k_db = f.rician_k_db;
  const std::uint64_t master = cmd->count("--master-seed") ? f.master_seed : 1;
  p.seed = mix_seed(master, static_cast<std::uint64_t>(topology));
  const int levels = cmd->count("--levels") ? f.levels : 5;
  const int nt = cmd->count("--antennas") ? f.n_antennas : 8;
  const int k = cmd->count("--users") ? f.n_users : 16;
  ChannelSet cs = synth_channels(p, nt, k, levels);
  save_channels(cs, out);
  std::printf("wrote %s: %d antennas, %d users, %d subcarriers\n",
              out.c_str(), cs.n_antennas(), cs.n_users(), cs.n_subcarriers());
  return 0;
}

int cmd_export_lp(const CLI::App* cmd, const ScenarioFlags& f, int topology,
                  const std::string& out) {
  ScenarioConfig cfg = build_config(cmd, f);
  RuTree tree = build_tree(cfg.levels);
  const std::uint64_t topo_seed =
      mix_seed(cfg.master_seed, static_cast<std::uint64_t>(topology));
  ChannelSet cs;
  if (!cfg.channel_file.empty()) {
    cs = load_channels(cfg.channel_file);
  } else {
    SynthChannelParams p = cfg.channel;
    p.seed = topo_seed;
    cs = synth_channels(p, cfg.n_antennas, cfg.n_users, cfg.levels);
  }
  CorrelationTable corr = build_correlation_table(cs, tree, policy_of(f));
  StrengthTable st = build_strength_table(cs, policy_of(f));
  SampleParams sp;
  sp.alpha = cfg.alpha;
  sp.t_samples = cfg.t_samples;
  sp.max_group_size = std::min(cfg.n_antennas, cfg.n_users);
  sp.seed = mix_seed(topo_seed, 0);
  CandidateCatalog cat = sample_groups(corr, tree, sp, policy_of(f));
  ProxyParams pp;
  pp.alpha = cfg.alpha;
  pp.snr_tx = cfg.snr_linear();
  ProxyEvaluator rates(st, tree, pp, sp.max_group_size);
  IlpModel model = build_model(cat, tree, rates);
  write_text(out, export_lp(model));
  std::printf("wrote %s: %zu variables, %zu constraints\n", out.c_str(),
              model.var_count(), model.constraint_count());
  return 0;
}

int cmd_validate(const std::string& schedule_path, int levels, int n_antennas,
                 int n_users) {
  std::ifstream in(schedule_path, std::ios::binary);
  if (!in) throw ParseError("cannot read schedule file " + schedule_path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad schedule JSON: " + std::string(e.what()));
  }
  ScheduleAssignment schedule;
  try {
    for (const auto& ja : j.at("assignments")) {
      schedule.assignments.emplace_back(
          ja.at("ru").get<int>(), ja.at("members").get<std::vector<int>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad schedule JSON: " + std::string(e.what()));
  }
  RuTree tree = build_tree(levels);
  CandidateCatalog counts_only;
  counts_only.n_users = n_users;
  const auto violations = validate(schedule, counts_only, tree, n_antennas);
  if (violations.empty()) {
    std::printf("ok: %zu assignments, no violations\n",
                schedule.assignments.size());
    return 0;
  }
  for (const auto& v : violations) std::printf("violation: %s\n", v.c_str());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ProxySelect scheduling laboratory"};
  app.require_subcommand(1);

  ScenarioFlags rf, saf, stf, sf, ef;
  std::string run_out, run_format = "csv";
  auto* run = app.add_subcommand("run", "Run a benchmark scenario");
  add_scenario_flags(run, &rf);
  run->add_option("--out,-o", run_out, "Report path (plus CDF side files)");
  run->add_option("--format", run_format, "Report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::vector<double> alphas;
  std::string sa_out;
  bool sa_reports = false;
  auto* sa = app.add_subcommand("sweep-alpha",
                                "Mean rates across compatibility thresholds");
  add_scenario_flags(sa, &saf);
  sa->add_option("--alphas", alphas, "Threshold values")
      ->required()
      ->delimiter(',');
  sa->add_option("--out,-o", sa_out, "Rows CSV path");
  sa->add_flag("--emit-reports", sa_reports,
               "Also write one JSON report per value");

  std::vector<int> t_list;
  std::string st_out;
  bool st_reports = false;
  auto* st = app.add_subcommand("sweep-t",
                                "Mean rates across sampling budgets");
  add_scenario_flags(st, &stf);
  st->add_option("--t-list", t_list, "Sampling budgets")
      ->required()
      ->delimiter(',');
  st->add_option("--out,-o", st_out, "Rows CSV path");
  st->add_flag("--emit-reports", st_reports,
               "Also write one JSON report per value");

  int synth_topology = 0;
  std::string synth_out;
  auto* sy = app.add_subcommand("synth-channels",
                                "Write one topology's channels to a file");
  add_scenario_flags(sy, &sf);
  sy->add_option("--topology", synth_topology, "Topology index");
  sy->add_option("--out,-o", synth_out, "Channel file (.bin or .json)")
      ->required();

  int lp_topology = 0;
  std::string lp_out;
  auto* ex = app.add_subcommand("export-lp",
                                "Write one topology's model in LP format");
  add_scenario_flags(ex, &ef);
  ex->add_option("--topology", lp_topology, "Topology index");
  ex->add_option("--out,-o", lp_out, "LP file path")->required();

  std::string v_schedule;
  int v_levels = 5, v_antennas = 8, v_users = 16;
  auto* va = app.add_subcommand("validate",
                                "Check a schedule JSON for rule violations");
  va->add_option("--schedule", v_schedule, "Schedule JSON path")->required();
  va->add_option("--levels,-L", v_levels, "RU tree levels, 4..7");
  va->add_option("--antennas,-N", v_antennas, "Antenna budget N_T");
  va->add_option("--users,-K", v_users, "User count K");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run, rf, run_out, run_format);
    if (sa->parsed()) {
      return cmd_sweep_alpha(sa, saf, alphas, sa_out, sa_reports);
    }
    if (st->parsed()) return cmd_sweep_t(st, stf, t_list, st_out, st_reports);
    if (sy->parsed()) return cmd_synth(sf, sy, synth_topology, synth_out);
    if (ex->parsed()) return cmd_export_lp(ex, ef, lp_topology, lp_out);
    if (va->parsed()) {
      return cmd_validate(v_schedule, v_levels, v_antennas, v_users);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
