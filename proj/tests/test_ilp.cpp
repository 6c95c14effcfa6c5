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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "proxysel/channel.hpp"
#include "proxysel/compat.hpp"
#include "proxysel/errors.hpp"
#include "proxysel/ilp.hpp"
#include "proxysel/proxy.hpp"
#include "proxysel/rng.hpp"
#include "proxysel/ru_tree.hpp"

using namespace proxysel;

namespace {

// Uniform random weights per catalog entry, reproducible.
std::vector<std::vector<double>> random_weights(const CandidateCatalog& cat,
                                                std::uint64_t seed,
                                                double scale = 100.0) {
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> w(cat.per_ru.size());
  for (size_t q = 0; q < cat.per_ru.size(); ++q) {
    w[q].resize(cat.per_ru[q].size());
    for (auto& x : w[q]) x = scale * rng.next_double();
  }
  return w;
}

CandidateCatalog random_catalog(int n_users, const RuTree& tree, int t,
                                int max_size, std::uint64_t seed) {
  SynthChannelParams p;
  p.seed = seed;
  const ChannelSet cs = synth_channels(p, max_size, n_users, tree.levels());
  const CorrelationTable corr = build_correlation_table(cs, tree);
  SampleParams sp;
  sp.alpha = 0.8;
  sp.t_samples = t;
  sp.max_group_size = max_size;
  sp.seed = mix_seed(seed, 1);
  return sample_groups(corr, tree, sp);
}

}  // namespace

TEST_CASE("singleton model matches the printed size formula") {
  const RuTree tree = build_tree(4);
  const CandidateCatalog cat = singleton_catalog(3, tree);
  const IlpModel model = build_model(cat, tree, random_weights(cat, 2, 10.0));
  CHECK(model.var_count() == 15u * 3u + 15u);
  CHECK(model.constraint_count() == 3u + 15u + 34u);
  CHECK(model.constraint_count() == 52u);
}

TEST_CASE("model rejects duplicates and bad weights") {
  const RuTree tree = build_tree(4);
  CandidateCatalog cat = singleton_catalog(2, tree);
  auto w = random_weights(cat, 3, 10.0);

  CandidateCatalog dup = cat;
  dup.per_ru[0].push_back({0});  // user 0 twice on RU 1
  auto wd = w;
  wd[0].push_back(1.0);
  CHECK_THROWS_AS(build_model(dup, tree, wd), DomainError);

  auto wn = w;
  wn[2][1] = -1.0;
  CHECK_THROWS_AS(build_model(cat, tree, wn), DomainError);
  wn[2][1] = std::nan("");
  CHECK_THROWS_AS(build_model(cat, tree, wn), DomainError);
}

TEST_CASE("solver equals brute force on random small instances") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    const RuTree tree = build_tree(4);
    const int n_users = 2 + static_cast<int>(s % 4);
    const CandidateCatalog cat =
        random_catalog(n_users, tree, 1 + static_cast<int>(s % 5), 3, 400 + s);
    const auto w = random_weights(cat, 500 + s);
    const IlpModel model = build_model(cat, tree, w);
    const ScheduleAssignment exact = solve(model);
    const ScheduleAssignment oracle = brute_force_schedule(cat, tree, w);
    CHECK(exact.solve_status == SolveStatus::kOptimal);
    CHECK(exact.gap == 0.0);
    CHECK(exact.objective_proxy == oracle.objective_proxy);
    CHECK(validate(exact, cat, tree, 3).empty());
  }
}

TEST_CASE("all-zero weights solve to an empty optimal schedule") {
  const RuTree tree = build_tree(4);
  const CandidateCatalog cat = singleton_catalog(3, tree);
  std::vector<std::vector<double>> w(cat.per_ru.size());
  for (size_t q = 0; q < cat.per_ru.size(); ++q) {
    w[q].assign(cat.per_ru[q].size(), 0.0);
  }
  const ScheduleAssignment sched = solve(build_model(cat, tree, w));
  CHECK(sched.objective_proxy == 0.0);
  CHECK(sched.solve_status == SolveStatus::kOptimal);
  CHECK(validate(sched, cat, tree, 3).empty());
}

TEST_CASE("one dominant disjoint placement per user wins") {
  const RuTree tree = build_tree(4);
  const CandidateCatalog cat = singleton_catalog(2, tree);
  std::vector<std::vector<double>> w(cat.per_ru.size());
  for (size_t q = 0; q < cat.per_ru.size(); ++q) {
    w[q].assign(cat.per_ru[q].size(), 0.001);
  }
  // User 0 on RU 2, user 1 on RU 3: disjoint halves, huge weights.
  w[1][0] = 50.0;
  w[2][1] = 70.0;
  const ScheduleAssignment sched = solve(build_model(cat, tree, w));
  CHECK(sched.objective_proxy == doctest::Approx(120.0).epsilon(1e-12));
  std::set<std::pair<int, int>> picks;
  for (const auto& [q, members] : sched.assignments) {
    REQUIRE(members.size() == 1);
    picks.insert({q, members[0]});
  }
  CHECK(picks.count({2, 0}) == 1);
  CHECK(picks.count({3, 1}) == 1);
}

TEST_CASE("solutions never violate the assignment rules") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const RuTree tree = build_tree(4);
    const CandidateCatalog cat = random_catalog(5, tree, 5, 3, 600 + s);
    const auto w = random_weights(cat, 700 + s);
    const ScheduleAssignment sched = solve(build_model(cat, tree, w));
    const auto violations = validate(sched, cat, tree, 3);
    CHECK(violations.empty());
  }
}

TEST_CASE("validate names each violation class") {
  const RuTree tree = build_tree(4);
  const CandidateCatalog cat = singleton_catalog(4, tree);

  ScheduleAssignment ok;
  CHECK(validate(ok, cat, tree, 2).empty());

  ScheduleAssignment dup_user;
  dup_user.assignments = {{2, {0}}, {3, {0}}};
  auto v = validate(dup_user, cat, tree, 2);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("user 0") != std::string::npos);

  ScheduleAssignment conflict;
  conflict.assignments = {{1, {0}}, {2, {1}}};
  v = validate(conflict, cat, tree, 2);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("overlap") != std::string::npos);

  ScheduleAssignment mu_on_leaf;
  mu_on_leaf.assignments = {{9, {0, 1}}};
  v = validate(mu_on_leaf, cat, tree, 2);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("MU-capable") != std::string::npos);

  ScheduleAssignment too_big;
  too_big.assignments = {{1, {0, 1, 2}}};
  v = validate(too_big, cat, tree, 2);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("antenna") != std::string::npos);

  ScheduleAssignment two_groups;
  two_groups.assignments = {{2, {0}}, {2, {1}}};
  v = validate(two_groups, cat, tree, 2);
  CHECK(!v.empty());
}

TEST_CASE("time limit yields an incumbent with a certified bound") {
  const RuTree tree = build_tree(4);
  // Large enough to not finish in ~zero time.
  const CandidateCatalog cat = random_catalog(6, tree, 60, 4, 801);
  const auto w = random_weights(cat, 802);
  const IlpModel model = build_model(cat, tree, w);
  SolveOptions opts;
  opts.time_limit_s = 1e-9;
  const ScheduleAssignment sched = solve(model, opts);
  CHECK(sched.objective_proxy <= sched.upper_bound + 1e-9);
  if (sched.solve_status == SolveStatus::kFeasibleWithGap) {
    CHECK(sched.gap >= 0.0);
  }
  CHECK(validate(sched, cat, tree, 4).empty());

  // And the same model solved without a limit is at least as good.
  const ScheduleAssignment full = solve(model);
  CHECK(full.objective_proxy >= sched.objective_proxy - 1e-9);
  CHECK(full.objective_proxy <= sched.upper_bound + 1e-9);
}

TEST_CASE("deterministic resolves of one model") {
  const RuTree tree = build_tree(4);
  const CandidateCatalog cat = random_catalog(5, tree, 10, 3, 900);
  const auto w = random_weights(cat, 901);
  const IlpModel model = build_model(cat, tree, w);
  const ScheduleAssignment a = solve(model);
  const ScheduleAssignment b = solve(model);
  CHECK(a.objective_proxy == b.objective_proxy);
  CHECK(a.assignments == b.assignments);
}

TEST_CASE("lp export carries the full model deterministically") {
  const RuTree tree = build_tree(4);
  const CandidateCatalog cat = random_catalog(3, tree, 3, 3, 1000);
  const auto w = random_weights(cat, 1001);
  const IlpModel model = build_model(cat, tree, w);
  const std::string lp = export_lp(model);
  CHECK(lp == export_lp(model));

  CHECK(lp.find("Maximize") != std::string::npos);
  CHECK(lp.find("Subject To") != std::string::npos);
  CHECK(lp.find("Binary") != std::string::npos);
  CHECK(lp.compare(lp.size() - 4, 4, "End\n") == 0);

  // One declaration per variable in the Binary section.
  const size_t bin_at = lp.find("Binary");
  size_t declared = 0;
  std::stringstream ss(lp.substr(bin_at));
  std::string tok;
  while (ss >> tok) {
    if (tok[0] == 'x' || tok[0] == 'y') ++declared;
  }
  CHECK(declared == model.var_count());

  // Constraint rows: one name per row, c1..cN convention not required;
  // count inequality signs in the Subject To section instead.
  const size_t st_at = lp.find("Subject To");
  const std::string body = lp.substr(st_at, bin_at - st_at);
  size_t rows = 0;
  for (size_t pos = body.find("<="); pos != std::string::npos;
       pos = body.find("<=", pos + 2)) {
    ++rows;
  }
  CHECK(rows == model.constraint_count());
}

TEST_CASE("schedule json lists assignments with both rates") {
  SynthChannelParams p;
  p.seed = 1100;
  const ChannelSet cs = synth_channels(p, 3, 4, 4);
  const RuTree tree = build_tree(4);
  const CorrelationTable corr = build_correlation_table(cs, tree);
  const StrengthTable st = build_strength_table(cs);
  SampleParams sp;
  sp.alpha = 0.9;
  sp.t_samples = 10;
  sp.max_group_size = 3;
  const CandidateCatalog cat = sample_groups(corr, tree, sp);
  ProxyParams pp;
  pp.alpha = sp.alpha;
  pp.snr_tx = 10.0;
  ProxyEvaluator rates(st, tree, pp, 3);
  const IlpModel model = build_model(cat, tree, rates);
  ScheduleAssignment sched = solve(model);
  const std::string json = schedule_to_json(sched, model, cs, tree, pp.snr_tx);
  CHECK(json.find("\"assignments\"") != std::string::npos);
  CHECK(json.find("\"ru\"") != std::string::npos);
  CHECK(json.find("\"members\"") != std::string::npos);
  CHECK(json.find("\"proxy_rate\"") != std::string::npos);
  CHECK(json.find("\"zf_rate\"") != std::string::npos);
}

TEST_CASE("brute force refuses oversized instances") {
  const RuTree tree = build_tree(5);
  const CandidateCatalog cat = singleton_catalog(2, tree);
  CHECK_THROWS_AS(brute_force_schedule(cat, tree, random_weights(cat, 1)),
                  DomainError);
}
