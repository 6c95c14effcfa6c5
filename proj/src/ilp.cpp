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

#include "proxysel/ilp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>

#include <json.hpp>

#include "proxysel/errors.hpp"
#include "proxysel/zfbf.hpp"

namespace proxysel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string members_to_string(const std::vector<int>& members) {
  std::string s = "{";
  for (size_t i = 0; i < members.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(members[i]);
  }
  s += "}";
  return s;
}

bool tone_overlap(const RuId& a, const RuId& b) {
  return a.tone_start < b.tone_end() && b.tone_start < a.tone_end();
}

// Branching and greedy preference: heaviest first, then lowest RU index,
// then lexicographically smallest member list.
bool var_preferred(const IlpEntry& a, const IlpEntry& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.q != b.q) return a.q < b.q;
  return a.members < b.members;
}

IlpModel build_model_impl(
    const CandidateCatalog& catalog, const RuTree& tree,
    const std::vector<std::vector<double>>* explicit_weights,
    ProxyEvaluator* rates) {
  if (catalog.n_users < 1) throw DomainError("catalog has no users");
  if (static_cast<int>(catalog.per_ru.size()) != tree.ru_count()) {
    throw DomainError("catalog covers " +
                      std::to_string(catalog.per_ru.size()) + " RUs, tree has " +
                      std::to_string(tree.ru_count()));
  }
  if (explicit_weights &&
      explicit_weights->size() != catalog.per_ru.size()) {
    throw DomainError("weights cover " +
                      std::to_string(explicit_weights->size()) +
                      " RUs, catalog has " +
                      std::to_string(catalog.per_ru.size()));
  }

  IlpModel m;
  m.n_users = catalog.n_users;
  m.levels = tree.levels();
  m.rus = tree.rus();
  m.conflict_edge_count = static_cast<int>(tree.conflict_edges().size());
  m.entry_begin.assign(tree.ru_count() + 2, 0);

  for (int q = 1; q <= tree.ru_count(); ++q) {
    m.entry_begin[q] = static_cast<int>(m.entries.size());
    const auto& groups = catalog.per_ru[q - 1];
    if (explicit_weights && (*explicit_weights)[q - 1].size() != groups.size()) {
      throw DomainError("RU " + std::to_string(q) + " has " +
                        std::to_string(groups.size()) + " groups but " +
                        std::to_string((*explicit_weights)[q - 1].size()) +
                        " weights");
    }
    std::set<std::vector<int>> seen;
    for (size_t i = 0; i < groups.size(); ++i) {
      const auto& g = groups[i];
      if (g.empty()) {
        throw DomainError("empty group on RU " + std::to_string(q));
      }
      for (int k : g) {
        if (k < 0 || k >= m.n_users) {
          throw DomainError("group " + members_to_string(g) + " on RU " +
                            std::to_string(q) + " references user " +
                            std::to_string(k) + " outside [0, " +
                            std::to_string(m.n_users) + ")");
        }
      }
      if (!std::is_sorted(g.begin(), g.end()) ||
          std::adjacent_find(g.begin(), g.end()) != g.end()) {
        throw DomainError("group " + members_to_string(g) + " on RU " +
                          std::to_string(q) +
                          " is not a sorted set of distinct users");
      }
      if (!seen.insert(g).second) {
        throw DomainError("duplicate catalog entry " + members_to_string(g) +
                          " on RU " + std::to_string(q));
      }
      if (g.size() >= 2 && !tree.mu_mimo_allowed(q)) {
        throw DomainError("multi-user group " + members_to_string(g) +
                          " on RU " + std::to_string(q) +
                          " which is below the MU-capable levels");
      }
      double w = explicit_weights
                     ? (*explicit_weights)[q - 1][i]
                     : rates->group_weight(q, g);
      if (!std::isfinite(w) || w < 0.0) {
        throw DomainError("weight of group " + members_to_string(g) +
                          " on RU " + std::to_string(q) +
                          " is not finite and non-negative");
      }
      m.entries.push_back({q, g, w});
    }
  }
  m.entry_begin[tree.ru_count() + 1] = static_cast<int>(m.entries.size());
  if (m.entries.empty()) throw DomainError("catalog is empty");
  return m;
}

// Best-first branch and bound over the x variables. The bound at a node is
// the Lagrangian relaxation of the per-user rows: for fixed multipliers the
// remaining problem is one best reduced-weight group per RU plus a
// max-weight antichain on the RU tree, solved by a linear-time DP. A few
// projected subgradient steps tighten the multipliers, warm-started from
// the parent node.
class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& m, const SolveOptions& opts)
      : m_(m), opts_(opts) {
    n_vars_ = static_cast<int>(m_.entries.size());
    q_count_ = m_.ru_count();
    words_ = (m_.n_users + 63) / 64;
    masks_.assign(static_cast<size_t>(n_vars_) * words_, 0);
    for (int v = 0; v < n_vars_; ++v) {
      for (int k : m_.entries[v].members) {
        masks_[static_cast<size_t>(v) * words_ + (k >> 6)] |= 1ull
                                                              << (k & 63);
      }
    }
    global_order_.resize(n_vars_);
    for (int v = 0; v < n_vars_; ++v) global_order_[v] = v;
    std::sort(global_order_.begin(), global_order_.end(), [this](int a, int b) {
      return var_preferred(m_.entries[a], m_.entries[b]);
    });
    status_.assign(n_vars_, 0);
    forced_ru_.assign(q_count_ + 1, -1);
    used_.assign(words_, 0);
    val_.assign(q_count_ + 1, kNegInf);
    arg_.assign(q_count_ + 1, -1);
    best_.assign(q_count_ + 1, 0.0);
    forced_flag_.assign(q_count_ + 1, 0);
  }

  ScheduleAssignment run() {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0)
          .count();
    };

    Node root;
    root.id = ++node_counter_;
    root.lambda.assign(m_.n_users, 0.0);
    apply_decisions(root);
    eval_bound(root, opts_.root_dual_iters);
    try_improve_incumbent(root);

    std::priority_queue<Node, std::vector<Node>, NodeLess> heap;
    if (root.bound > lb_ + tol_abs()) heap.push(std::move(root));

    bool proven = true;
    double frontier_bound = lb_;
    while (!heap.empty()) {
      if (elapsed() > opts_.time_limit_s ||
          (opts_.max_nodes >= 0 && nodes_explored_ >= opts_.max_nodes)) {
        proven = false;
        frontier_bound = heap.top().bound;
        break;
      }
      if (heap.top().bound <= lb_ + tol_abs()) break;  // frontier exhausted
      Node node = heap.top();
      heap.pop();
      ++nodes_explored_;

      if (!apply_decisions(node)) continue;
      int branch_var = pick_branch_var(node);
      if (branch_var < 0) continue;  // fully decided, harvested at creation

      for (int value = 1; value >= 0; --value) {
        Node child;
        child.id = ++node_counter_;
        child.decisions = node.decisions;
        child.decisions.emplace_back(branch_var, static_cast<signed char>(value));
        child.lambda = node.lambda;
        if (!apply_decisions(child)) continue;
        if (!eval_bound(child, opts_.node_dual_iters)) continue;
        try_improve_incumbent(child);
        if (child.bound > lb_ + tol_abs()) heap.push(std::move(child));
      }
    }

    ScheduleAssignment out;
    for (int v : inc_vars_) {
      out.assignments.emplace_back(m_.entries[v].q, m_.entries[v].members);
    }
    out.objective_proxy = lb_;
    out.nodes = nodes_explored_;
    out.solve_time = elapsed();
    if (proven) {
      out.solve_status = SolveStatus::kOptimal;
      out.gap = 0.0;
      out.upper_bound = lb_;
    } else {
      out.solve_status = SolveStatus::kFeasibleWithGap;
      out.upper_bound = std::max(lb_, frontier_bound);
      out.gap = (out.upper_bound - lb_) / std::max(1.0, std::fabs(lb_));
    }
    return out;
  }

 private:
  struct Node {
    double bound = 0.0;
    long id = 0;
    std::vector<std::pair<int, signed char>> decisions;
    std::vector<double> lambda;
    std::vector<int> dual_sel;  // ascending variable ids
  };
  struct NodeLess {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound < b.bound;
      return a.id > b.id;  // FIFO among equal bounds
    }
  };

  double tol_abs() const {
    return opts_.gap_tol * std::max(1.0, std::fabs(lb_));
  }

  const std::uint64_t* mask(int v) const {
    return &masks_[static_cast<size_t>(v) * words_];
  }

  bool mask_disjoint(const std::uint64_t* a, const std::uint64_t* b) const {
    for (int w = 0; w < words_; ++w) {
      if (a[w] & b[w]) return false;
    }
    return true;
  }

  // Rebuilds the per-variable status and the forced-variable summary from a
  // node's decision path. Returns false when the forced set is infeasible.
  bool apply_decisions(const Node& node) {
    std::fill(status_.begin(), status_.end(), 0);
    std::fill(forced_ru_.begin(), forced_ru_.end(), -1);
    std::fill(used_.begin(), used_.end(), 0);
    forced_vars_.clear();
    for (auto [v, value] : node.decisions) {
      status_[v] = value ? 1 : -1;
      if (value) forced_vars_.push_back(v);
    }
    for (int v : forced_vars_) {
      const int q = m_.entries[v].q;
      if (forced_ru_[q] >= 0) return false;  // two groups on one RU
      for (int u : forced_vars_) {
        if (u >= v) continue;
        if (tone_overlap(m_.rus[q - 1], m_.rus[m_.entries[u].q - 1])) {
          return false;  // conflicting RUs
        }
      }
      if (!mask_disjoint(mask(v), used_.data())) return false;  // user reuse
      forced_ru_[q] = v;
      for (int w = 0; w < words_; ++w) used_[w] |= mask(v)[w];
    }
    return true;
  }

  // Lagrangian dual value at the node's multipliers plus a few subgradient
  // steps; keeps the tightest bound seen. Requires apply_decisions first.
  // Returns false when the node is infeasible.
  bool eval_bound(Node& node, int iters) {
    double best_theta = std::numeric_limits<double>::infinity();
    std::vector<double> best_lambda = node.lambda;
    std::vector<int> best_sel;
    std::vector<double> lambda = node.lambda;
    double mu = 1.0;
    double prev_theta = std::numeric_limits<double>::infinity();
    std::vector<int> sel;
    std::vector<int> use_count(m_.n_users);

    for (int it = 0; it <= iters; ++it) {
      double theta;
      if (!dual_subproblem(lambda, &theta, &sel)) return false;
      if (theta < best_theta) {
        best_theta = theta;
        best_lambda = lambda;
        best_sel = sel;
      }
      if (it == iters || theta <= lb_) break;

      std::fill(use_count.begin(), use_count.end(), 0);
      for (int v : sel) {
        for (int k : m_.entries[v].members) ++use_count[k];
      }
      double gnorm2 = 0.0;
      for (int k = 0; k < m_.n_users; ++k) {
        const double g = 1.0 - use_count[k];
        gnorm2 += g * g;
      }
      if (gnorm2 == 0.0) break;
      const double step = mu * (theta - std::max(lb_, 0.0)) / gnorm2;
      if (!(step > 0.0)) break;
      for (int k = 0; k < m_.n_users; ++k) {
        lambda[k] = std::max(0.0, lambda[k] - step * (1.0 - use_count[k]));
      }
      if (theta >= prev_theta - 1e-12) mu *= 0.7;
      prev_theta = theta;
    }

    node.bound = best_theta;
    node.lambda = std::move(best_lambda);
    node.dual_sel = std::move(best_sel);
    std::sort(node.dual_sel.begin(), node.dual_sel.end());
    return true;
  }

  // Per-RU best reduced weight followed by the antichain DP. Forced
  // variables pin their RU; users already consumed by forced variables
  // disable every other variable containing them.
  bool dual_subproblem(const std::vector<double>& lambda, double* theta,
                       std::vector<int>* sel) {
    for (int q = 1; q <= q_count_; ++q) {
      if (forced_ru_[q] >= 0) {
        const int v = forced_ru_[q];
        val_[q] = reduced_weight(v, lambda);
        arg_[q] = v;
        continue;
      }
      double best = kNegInf;
      int arg = -1;
      for (int v = m_.entry_begin[q]; v < m_.entry_begin[q + 1]; ++v) {
        if (status_[v] != 0) continue;
        if (!mask_disjoint(mask(v), used_.data())) continue;
        const double r = reduced_weight(v, lambda);
        if (r > best) {
          best = r;
          arg = v;
        }
      }
      val_[q] = best;
      arg_[q] = arg;
    }

    for (int q = q_count_; q >= 1; --q) {
      const bool leaf = 2 * q > q_count_;
      if (forced_ru_[q] >= 0) {
        if (!leaf && (forced_flag_[2 * q] || forced_flag_[2 * q + 1])) {
          return false;  // forced ancestor and descendant
        }
        best_[q] = val_[q];
        forced_flag_[q] = 1;
      } else if (leaf) {
        best_[q] = std::max(0.0, val_[q]);
        forced_flag_[q] = 0;
      } else {
        const double children = best_[2 * q] + best_[2 * q + 1];
        if (forced_flag_[2 * q] || forced_flag_[2 * q + 1]) {
          best_[q] = children;
          forced_flag_[q] = 1;
        } else {
          best_[q] = std::max(children, val_[q]);
          forced_flag_[q] = 0;
        }
      }
    }

    double lambda_sum = 0.0;
    for (double l : lambda) lambda_sum += l;
    *theta = lambda_sum + best_[1];

    sel->clear();
    extract_stack_.clear();
    extract_stack_.push_back(1);
    while (!extract_stack_.empty()) {
      const int q = extract_stack_.back();
      extract_stack_.pop_back();
      const bool leaf = 2 * q > q_count_;
      if (forced_ru_[q] >= 0) {
        sel->push_back(arg_[q]);
      } else if (leaf) {
        if (val_[q] > 0.0) sel->push_back(arg_[q]);
      } else {
        const double children = best_[2 * q] + best_[2 * q + 1];
        const bool child_forced =
            forced_flag_[2 * q] || forced_flag_[2 * q + 1];
        if (!child_forced && val_[q] > children) {
          sel->push_back(arg_[q]);
        } else {
          extract_stack_.push_back(2 * q);
          extract_stack_.push_back(2 * q + 1);
        }
      }
    }
    return true;
  }

  double reduced_weight(int v, const std::vector<double>& lambda) const {
    double r = m_.entries[v].weight;
    for (int k : m_.entries[v].members) r -= lambda[k];
    return r;
  }

  // Turns the dual selection into a feasible schedule: forced variables
  // first, then the dual picks (swapping in the best user-disjoint sibling
  // on an RU when the pick reuses a user), then a greedy sweep over all
  // variables by weight. Requires apply_decisions state.
  void try_improve_incumbent(const Node& node) {
    chosen_.clear();
    ru_used_.assign(q_count_ + 1, 0);
    greedy_used_ = used_;
    for (int v : forced_vars_) {
      chosen_.push_back(v);
      ru_used_[m_.entries[v].q] = 1;
    }

    repair_order_ = node.dual_sel;
    std::sort(repair_order_.begin(), repair_order_.end(),
              [this](int a, int b) {
                return var_preferred(m_.entries[a], m_.entries[b]);
              });
    for (int v : repair_order_) {
      if (status_[v] == 1) continue;  // already in as a forced variable
      add_or_replace(v);
    }
    for (int v : global_order_) {
      if (status_[v] == -1 || ru_used_[m_.entries[v].q]) continue;
      if (!compatible_with_chosen(v)) continue;
      admit(v);
    }

    std::sort(chosen_.begin(), chosen_.end());
    double value = 0.0;
    for (int v : chosen_) value += m_.entries[v].weight;
    if (value > lb_) {
      lb_ = value;
      inc_vars_ = chosen_;
    }
  }

  bool compatible_with_chosen(int v) const {
    if (!mask_disjoint(mask(v), greedy_used_.data())) return false;
    const RuId& ru = m_.rus[m_.entries[v].q - 1];
    for (int u : chosen_) {
      if (tone_overlap(ru, m_.rus[m_.entries[u].q - 1])) return false;
    }
    return true;
  }

  void admit(int v) {
    chosen_.push_back(v);
    ru_used_[m_.entries[v].q] = 1;
    for (int w = 0; w < words_; ++w) greedy_used_[w] |= mask(v)[w];
  }

  void add_or_replace(int v) {
    const int q = m_.entries[v].q;
    if (ru_used_[q]) return;
    const RuId& ru = m_.rus[q - 1];
    for (int u : chosen_) {
      if (tone_overlap(ru, m_.rus[m_.entries[u].q - 1])) return;
    }
    if (mask_disjoint(mask(v), greedy_used_.data())) {
      admit(v);
      return;
    }
    int alt = -1;
    for (int u = m_.entry_begin[q]; u < m_.entry_begin[q + 1]; ++u) {
      if (status_[u] == -1) continue;
      if (!mask_disjoint(mask(u), greedy_used_.data())) continue;
      if (alt < 0 || m_.entries[u].weight > m_.entries[alt].weight) alt = u;
    }
    if (alt >= 0) admit(alt);
  }

  // Largest-weight undecided variable of the dual selection, falling back
  // to the largest-weight free variable anywhere.
  int pick_branch_var(const Node& node) {
    int best = -1;
    for (int v : node.dual_sel) {
      if (status_[v] != 0) continue;
      if (best < 0 || var_preferred(m_.entries[v], m_.entries[best])) best = v;
    }
    if (best >= 0) return best;
    for (int v : global_order_) {
      if (status_[v] == 0) return v;
    }
    return -1;
  }

  const IlpModel& m_;
  SolveOptions opts_;
  int n_vars_ = 0;
  int q_count_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> masks_;
  std::vector<int> global_order_;

  std::vector<signed char> status_;
  std::vector<int> forced_ru_;
  std::vector<int> forced_vars_;
  std::vector<std::uint64_t> used_;
  std::vector<double> val_;
  std::vector<int> arg_;
  std::vector<double> best_;
  std::vector<std::uint8_t> forced_flag_;
  std::vector<int> extract_stack_;
  std::vector<int> chosen_;
  std::vector<int> repair_order_;
  std::vector<std::uint8_t> ru_used_;
  std::vector<std::uint64_t> greedy_used_;

  double lb_ = 0.0;
  std::vector<int> inc_vars_;
  long node_counter_ = 0;
  long nodes_explored_ = 0;
};

}  // namespace

bool IlpModel::rus_conflict(int q1, int q2) const {
  if (q1 == q2) return false;
  return tone_overlap(rus[q1 - 1], rus[q2 - 1]);
}

IlpModel build_model(const CandidateCatalog& catalog, const RuTree& tree,
                     ProxyEvaluator& rates) {
  return build_model_impl(catalog, tree, nullptr, &rates);
}

IlpModel build_model(const CandidateCatalog& catalog, const RuTree& tree,
                     const std::vector<std::vector<double>>& weights_per_ru) {
  return build_model_impl(catalog, tree, &weights_per_ru, nullptr);
}

ScheduleAssignment solve(const IlpModel& model, const SolveOptions& opts) {
  if (model.entries.empty()) throw DomainError("model has no variables");
  if (!(opts.time_limit_s > 0.0)) {
    throw DomainError("time limit must be positive");
  }
  if (!(opts.gap_tol >= 0.0)) throw DomainError("gap tolerance must be >= 0");
  return BranchAndBound(model, opts).run();
}

namespace {

struct BruteState {
  const IlpModel* m;
  std::vector<std::uint64_t> used;
  std::vector<int> chosen;
  double best_value = 0.0;
  std::vector<int> best_vars;
  int words = 0;

  bool disjoint(int v) const {
    for (int k : m->entries[v].members) {
      if (used[k >> 6] & (1ull << (k & 63))) return false;
    }
    return true;
  }
  void flip(int v) {
    for (int k : m->entries[v].members) used[k >> 6] ^= 1ull << (k & 63);
  }
};

void brute_assign(BruteState& st, const std::vector<int>& rus, size_t idx,
                  double sum) {
  if (idx == rus.size()) {
    if (sum > st.best_value) {
      st.best_value = sum;
      st.best_vars = st.chosen;
    }
    return;
  }
  const int q = rus[idx];
  for (int v = st.m->entry_begin[q]; v < st.m->entry_begin[q + 1]; ++v) {
    if (!st.disjoint(v)) continue;
    st.flip(v);
    st.chosen.push_back(v);
    brute_assign(st, rus, idx + 1, sum + st.m->entries[v].weight);
    st.chosen.pop_back();
    st.flip(v);
  }
}

ScheduleAssignment brute_force_impl(const IlpModel& model,
                                    const RuTree& tree) {
  if (tree.levels() > 4) {
    throw DomainError("brute force is limited to trees of at most 4 levels, "
                      "got " +
                      std::to_string(tree.levels()));
  }
  if (model.entries.size() > 10000) {
    throw DomainError("brute force is limited to 10^4 catalog entries, got " +
                      std::to_string(model.entries.size()));
  }
  const auto t0 = std::chrono::steady_clock::now();

  BruteState st;
  st.m = &model;
  st.words = (model.n_users + 63) / 64;
  st.used.assign(st.words, 0);

  for (const auto& rus : enumerate_schedulable_ru_sets(tree)) {
    brute_assign(st, rus, 0, 0.0);
  }

  ScheduleAssignment out;
  std::sort(st.best_vars.begin(), st.best_vars.end());
  for (int v : st.best_vars) {
    out.assignments.emplace_back(model.entries[v].q, model.entries[v].members);
  }
  out.objective_proxy = st.best_value;
  out.solve_status = SolveStatus::kOptimal;
  out.gap = 0.0;
  out.upper_bound = st.best_value;
  out.solve_time = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return out;
}

}  // namespace

ScheduleAssignment brute_force_schedule(
    const CandidateCatalog& catalog, const RuTree& tree,
    const std::vector<std::vector<double>>& weights_per_ru) {
  return brute_force_impl(build_model(catalog, tree, weights_per_ru), tree);
}

ScheduleAssignment brute_force_schedule(const CandidateCatalog& catalog,
                                        const RuTree& tree,
                                        ProxyEvaluator& rates) {
  return brute_force_impl(build_model(catalog, tree, rates), tree);
}

std::vector<std::string> validate(const ScheduleAssignment& schedule,
                                  const CandidateCatalog& catalog,
                                  const RuTree& tree, int n_antennas) {
  std::vector<std::string> out;
  const int q_count = tree.ru_count();
  std::map<int, int> ru_uses;
  std::map<int, std::vector<int>> user_rus;
  std::vector<int> valid_qs;

  for (const auto& [q, members] : schedule.assignments) {
    if (q < 1 || q > q_count) {
      out.push_back("RU " + std::to_string(q) + " out of range [1, " +
                    std::to_string(q_count) + "]");
      continue;
    }
    ++ru_uses[q];
    valid_qs.push_back(q);
    if (members.empty()) {
      out.push_back("empty group on RU " + std::to_string(q));
      continue;
    }
    std::set<int> distinct;
    for (int k : members) {
      if (k < 0 || k >= catalog.n_users) {
        out.push_back("user " + std::to_string(k) + " on RU " +
                      std::to_string(q) + " out of range [0, " +
                      std::to_string(catalog.n_users) + ")");
        continue;
      }
      if (!distinct.insert(k).second) {
        out.push_back("user " + std::to_string(k) + " repeated in group " +
                      members_to_string(members) + " on RU " +
                      std::to_string(q));
        continue;
      }
      user_rus[k].push_back(q);
    }
    if (static_cast<int>(members.size()) > n_antennas) {
      out.push_back("group " + members_to_string(members) + " on RU " +
                    std::to_string(q) + " exceeds the " +
                    std::to_string(n_antennas) + " antenna budget");
    }
    if (members.size() >= 2 && !tree.mu_mimo_allowed(q)) {
      out.push_back("multi-user group on RU " + std::to_string(q) +
                    " at level " + std::to_string(tree.ru(q).level) +
                    " which is below the MU-capable levels (allowed levels "
                    "are 1.." +
                    std::to_string(tree.levels() - 2) + ")");
    }
  }

  for (const auto& [q, n] : ru_uses) {
    if (n > 1) {
      out.push_back("RU " + std::to_string(q) + " carries " +
                    std::to_string(n) + " groups, at most one is allowed");
    }
  }
  for (const auto& [k, rus] : user_rus) {
    if (rus.size() > 1) {
      std::string s = "user " + std::to_string(k) + " assigned to RUs";
      for (int q : rus) s += " " + std::to_string(q);
      out.push_back(s);
    }
  }
  std::sort(valid_qs.begin(), valid_qs.end());
  valid_qs.erase(std::unique(valid_qs.begin(), valid_qs.end()),
                 valid_qs.end());
  for (size_t i = 0; i < valid_qs.size(); ++i) {
    for (size_t j = i + 1; j < valid_qs.size(); ++j) {
      if (tree.conflicts(valid_qs[i], valid_qs[j])) {
        out.push_back("RUs " + std::to_string(valid_qs[i]) + " and " +
                      std::to_string(valid_qs[j]) +
                      " overlap in tones but are both assigned");
      }
    }
  }
  return out;
}

namespace {

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

std::string group_hash_name(int q, const std::vector<int>& members) {
  // FNV-1a over the decimal member list; stable across platforms.
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&h](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  };
  for (int k : members) {
    for (char c : std::to_string(k)) feed(c);
    feed(',');
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "x_%d_%016llx", q,
                static_cast<unsigned long long>(h));
  return buf;
}

// Flushes `term` onto `line`, wrapping near 200 columns.
void append_term(std::string& body, std::string& line,
                 const std::string& term) {
  if (line.size() + term.size() > 200) {
    body += line;
    body += "\n";
    line = "    ";
  }
  line += term;
}

}  // namespace

std::string export_lp(const IlpModel& model) {
  std::vector<std::string> x_names(model.entries.size());
  for (size_t v = 0; v < model.entries.size(); ++v) {
    x_names[v] = group_hash_name(model.entries[v].q, model.entries[v].members);
  }

  std::string body = "Maximize\n";
  {
    std::string line = " obj:";
    for (size_t v = 0; v < model.entries.size(); ++v) {
      append_term(body, line,
                  (v == 0 ? " " : " + ") + format_weight(model.entries[v].weight) +
                      " " + x_names[v]);
    }
    body += line;
    body += "\n";
  }

  body += "Subject To\n";
  for (int k = 0; k < model.n_users; ++k) {
    std::string line = " u" + std::to_string(k) + ":";
    bool any = false;
    for (size_t v = 0; v < model.entries.size(); ++v) {
      const auto& mem = model.entries[v].members;
      if (std::binary_search(mem.begin(), mem.end(), k)) {
        append_term(body, line, (any ? " + " : " ") + x_names[v]);
        any = true;
      }
    }
    if (!any) line += " 0 y_1";
    line += " <= 1";
    body += line;
    body += "\n";
  }
  for (int q = 1; q <= model.ru_count(); ++q) {
    std::string line = " r" + std::to_string(q) + ":";
    bool any = false;
    for (int v = model.entry_begin[q]; v < model.entry_begin[q + 1]; ++v) {
      append_term(body, line, (any ? " + " : " ") + x_names[v]);
      any = true;
    }
    line += " - y_" + std::to_string(q) + " <= 0";
    body += line;
    body += "\n";
  }
  int edge = 0;
  for (int q1 = 1; q1 <= model.ru_count(); ++q1) {
    for (int q2 = q1 + 1; q2 <= model.ru_count(); ++q2) {
      if (!model.rus_conflict(q1, q2)) continue;
      body += " c" + std::to_string(edge++) + ": y_" + std::to_string(q1) +
              " + y_" + std::to_string(q2) + " <= 1\n";
    }
  }

  body += "Binary\n";
  for (const auto& name : x_names) {
    body += " " + name + "\n";
  }
  for (int q = 1; q <= model.ru_count(); ++q) {
    body += " y_" + std::to_string(q) + "\n";
  }
  body += "End\n";
  return body;
}

double schedule_zf_rate(const ChannelSet& cs, const RuTree& tree,
                        const ScheduleAssignment& schedule, double snr_tx,
                        ExecPolicy policy) {
  double total = 0.0;
  for (const auto& [q, members] : schedule.assignments) {
    total +=
        zf_group_rate_on_ru(cs, members, tree.ru(q), snr_tx, policy).total_bits;
  }
  return total;
}

std::string schedule_to_json(const ScheduleAssignment& schedule,
                             const IlpModel& model, const ChannelSet& cs,
                             const RuTree& tree, double snr_tx) {
  nlohmann::json arr = nlohmann::json::array();
  double zf_total = 0.0;
  for (const auto& [q, members] : schedule.assignments) {
    double proxy = 0.0;
    bool found = false;
    for (int v = model.entry_begin[q]; v < model.entry_begin[q + 1]; ++v) {
      if (model.entries[v].members == members) {
        proxy = model.entries[v].weight;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DomainError("assignment " + members_to_string(members) +
                        " on RU " + std::to_string(q) +
                        " is not a model variable");
    }
    const double zf =
        zf_group_rate_on_ru(cs, members, tree.ru(q), snr_tx).total_bits;
    zf_total += zf;
    arr.push_back({{"ru", q},
                   {"members", members},
                   {"proxy_rate", proxy},
                   {"zf_rate", zf}});
  }
  const char* status = schedule.solve_status == SolveStatus::kOptimal
                           ? "optimal"
                           : schedule.solve_status == SolveStatus::kFeasibleWithGap
                                 ? "feasible_with_gap"
                                 : "infeasible_model";
  nlohmann::json j = {{"assignments", arr},
                      {"objective_proxy", schedule.objective_proxy},
                      {"objective_zf", zf_total},
                      {"status", status},
                      {"gap", schedule.gap},
                      {"upper_bound", schedule.upper_bound},
                      {"solve_time", schedule.solve_time},
                      {"nodes", schedule.nodes}};
  return j.dump(2);
}

}  // namespace proxysel
