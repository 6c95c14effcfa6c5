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

#include "proxysel/ru_tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "proxysel/errors.hpp"

namespace proxysel {

namespace {

constexpr int kTonesPerLeaf = 26;

bool ranges_overlap(const RuId& a, const RuId& b) {
  return a.tone_start < b.tone_end() && b.tone_start < a.tone_end();
}

}  // namespace

const RuId& RuTree::ru(int q) const {
  if (q < 1 || q > ru_count()) {
    throw DomainError("RU index q=" + std::to_string(q) + " outside [1, " +
                      std::to_string(ru_count()) + "]");
  }
  return rus_[static_cast<std::size_t>(q - 1)];
}

bool RuTree::conflicts(int q1, int q2) const {
  if (q1 == q2) return false;
  return ranges_overlap(ru(q1), ru(q2));
}

bool RuTree::mu_mimo_allowed(int q) const {
  return ru(q).level <= levels_ - 2;
}

RuTree build_tree_unchecked(int levels) {
  if (levels < 1) {
    throw DomainError("RU tree needs at least one level, got " +
                      std::to_string(levels));
  }
  RuTree tree;
  tree.levels_ = levels;
  const int q_count = (1 << levels) - 1;
  tree.rus_.reserve(static_cast<std::size_t>(q_count));
  for (int q = 1; q <= q_count; ++q) {
    const auto [level, idx] = index_to_position(q, levels);
    RuId ru;
    ru.q = q;
    ru.level = level;
    ru.index_in_level = idx;
    ru.tone_count = kTonesPerLeaf * (1 << (levels - level));
    ru.tone_start = (idx - 1) * ru.tone_count;
    tree.rus_.push_back(ru);
  }
  // Ancestor/descendant pairs are exactly the overlapping tone ranges.
  for (int q1 = 1; q1 <= q_count; ++q1) {
    for (int q2 = q1 + 1; q2 <= q_count; ++q2) {
      if (ranges_overlap(tree.rus_[q1 - 1], tree.rus_[q2 - 1])) {
        tree.conflict_edges_.emplace_back(q1, q2);
      }
    }
  }
  return tree;
}

RuTree build_tree(int levels) {
  if (levels < 4 || levels > 7) {
    throw DomainError("level count must be in {4, 5, 6, 7}, got " +
                      std::to_string(levels));
  }
  return build_tree_unchecked(levels);
}

std::pair<int, int> index_to_position(int q, int levels) {
  const int q_count = (1 << levels) - 1;
  if (q < 1 || q > q_count) {
    throw DomainError("RU index q=" + std::to_string(q) + " outside [1, " +
                      std::to_string(q_count) + "]");
  }
  int level = 1;
  while ((1 << level) - 1 < q) ++level;  // level = ceil(log2(q + 1))
  const int idx = q + 1 - (1 << (level - 1));
  return {level, idx};
}

int position_to_index(int level, int index_in_level, int levels) {
  if (level < 1 || level > levels) {
    throw DomainError("level " + std::to_string(level) + " outside [1, " +
                      std::to_string(levels) + "]");
  }
  const int width = 1 << (level - 1);
  if (index_in_level < 1 || index_in_level > width) {
    throw DomainError("index_in_level " + std::to_string(index_in_level) +
                      " outside [1, " + std::to_string(width) + "]");
  }
  return width + index_in_level - 1;
}

namespace {

// Antichains of the subtree rooted at q, each as a sorted q-list. The
// count obeys a(h) = a(h-1)^2 + 1 with a(0) = 1, so L = 5 already yields
// 458330 subsets; the public entry point refuses anything larger.
void collect_antichains(const RuTree& tree, int q,
                        std::vector<std::vector<int>>& out) {
  out.clear();
  const int q_count = tree.ru_count();
  const int left = 2 * q;
  const int right = 2 * q + 1;
  if (left > q_count) {  // leaf
    out.push_back({});
    out.push_back({q});
    return;
  }
  std::vector<std::vector<int>> left_sets, right_sets;
  collect_antichains(tree, left, left_sets);
  collect_antichains(tree, right, right_sets);
  out.reserve(left_sets.size() * right_sets.size() + 1);
  for (const auto& ls : left_sets) {
    for (const auto& rs : right_sets) {
      std::vector<int> merged;
      merged.reserve(ls.size() + rs.size());
      merged.insert(merged.end(), ls.begin(), ls.end());
      merged.insert(merged.end(), rs.begin(), rs.end());
      out.push_back(std::move(merged));
    }
  }
  out.push_back({q});
}

}  // namespace

std::vector<std::vector<int>> enumerate_schedulable_ru_sets(
    const RuTree& tree) {
  if (tree.levels() > 5) {
    throw DomainError(
        "schedulable RU set enumeration is limited to L <= 5 trees, got L=" +
        std::to_string(tree.levels()));
  }
  std::vector<std::vector<int>> sets;
  collect_antichains(tree, 1, sets);
  for (auto& s : sets) std::sort(s.begin(), s.end());
  return sets;
}

}  // namespace proxysel
