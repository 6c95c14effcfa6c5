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
#include <set>
#include <vector>

#include <doctest.h>

#include "proxysel/errors.hpp"
#include "proxysel/ru_tree.hpp"

using namespace proxysel;

namespace {

// Independent overlap predicate on raw tone ranges.
bool ranges_overlap(const RuId& a, const RuId& b) {
  return a.tone_start < b.tone_end() && b.tone_start < a.tone_end();
}

}  // namespace

TEST_CASE("ru counts and tone totals per level count") {
  for (int levels = 4; levels <= 7; ++levels) {
    const RuTree tree = build_tree(levels);
    CHECK(tree.ru_count() == (1 << levels) - 1);
    CHECK(tree.total_tones() == 26 * (1 << (levels - 1)));
  }
}

TEST_CASE("build_tree rejects nonstandard level counts") {
  CHECK_THROWS_AS(build_tree(3), DomainError);
  CHECK_THROWS_AS(build_tree(8), DomainError);
  CHECK_THROWS_AS(build_tree(0), DomainError);
  CHECK_NOTHROW(build_tree_unchecked(2));
}

TEST_CASE("index/position bijection round-trips everywhere") {
  for (int levels = 4; levels <= 7; ++levels) {
    const int q_max = (1 << levels) - 1;
    for (int q = 1; q <= q_max; ++q) {
      const auto [level, idx] = index_to_position(q, levels);
      CHECK(level >= 1);
      CHECK(level <= levels);
      CHECK(idx >= 1);
      CHECK(idx <= (1 << (level - 1)));
      CHECK(position_to_index(level, idx, levels) == q);
    }
    CHECK_THROWS_AS(index_to_position(0, levels), DomainError);
    CHECK_THROWS_AS(index_to_position(q_max + 1, levels), DomainError);
  }
}

TEST_CASE("q=5 sits at level 3, second position") {
  const auto [level, idx] = index_to_position(5, 4);
  CHECK(level == 3);
  CHECK(idx == 2);
}

TEST_CASE("every level tiles the band exactly") {
  for (int levels = 4; levels <= 7; ++levels) {
    const RuTree tree = build_tree(levels);
    const int total = tree.total_tones();
    for (int level = 1; level <= levels; ++level) {
      const int width = 26 * (1 << (levels - level));
      int expected_start = 0;
      for (int idx = 1; idx <= (1 << (level - 1)); ++idx) {
        const RuId& ru = tree.ru(position_to_index(level, idx, levels));
        CHECK(ru.level == level);
        CHECK(ru.index_in_level == idx);
        CHECK(ru.tone_count == width);
        CHECK(ru.tone_start == expected_start);
        expected_start += width;
      }
      CHECK(expected_start == total);
    }
  }
}

TEST_CASE("conflict edge counts match the closed form") {
  const int expected[] = {34, 98, 258, 642};
  for (int levels = 4; levels <= 7; ++levels) {
    const RuTree tree = build_tree(levels);
    CHECK(static_cast<int>(tree.conflict_edges().size()) ==
          expected[levels - 4]);
    CHECK(static_cast<int>(tree.conflict_edges().size()) ==
          (levels - 2) * (1 << levels) + 2);
  }
}

TEST_CASE("conflict edges are exactly the overlapping ordered pairs") {
  const RuTree tree = build_tree(5);
  std::set<std::pair<int, int>> expected;
  for (int q1 = 1; q1 <= tree.ru_count(); ++q1) {
    for (int q2 = q1 + 1; q2 <= tree.ru_count(); ++q2) {
      if (ranges_overlap(tree.ru(q1), tree.ru(q2))) expected.insert({q1, q2});
    }
  }
  const std::set<std::pair<int, int>> actual(tree.conflict_edges().begin(),
                                             tree.conflict_edges().end());
  CHECK(actual == expected);
  for (const auto& [q1, q2] : expected) {
    CHECK(tree.conflicts(q1, q2));
    CHECK(tree.conflicts(q2, q1));
  }
  CHECK_FALSE(tree.conflicts(2, 3));  // sibling halves are disjoint
}

TEST_CASE("mu-mimo allowed on the top L-2 levels only") {
  for (int levels = 4; levels <= 7; ++levels) {
    const RuTree tree = build_tree(levels);
    for (int q = 1; q <= tree.ru_count(); ++q) {
      CHECK(tree.mu_mimo_allowed(q) == (tree.ru(q).level <= levels - 2));
    }
  }
}

TEST_CASE("leaves are exactly the indices with 2q > Q") {
  const int levels = 4;
  const RuTree tree = build_tree(levels);
  const int q_max = tree.ru_count();
  for (int q = 1; q <= q_max; ++q) {
    const bool is_leaf = tree.ru(q).level == levels;
    CHECK(is_leaf == (2 * q > q_max));
  }
}

TEST_CASE("schedulable ru sets are the tree antichains") {
  const RuTree tree = build_tree_unchecked(3);
  const auto sets = enumerate_schedulable_ru_sets(tree);

  // Oracle: test all subsets of the 7 RUs for pairwise tone disjointness.
  int expected_count = 0;
  for (int mask = 0; mask < (1 << 7); ++mask) {
    bool ok = true;
    for (int a = 0; a < 7 && ok; ++a) {
      if (!(mask & (1 << a))) continue;
      for (int b = a + 1; b < 7 && ok; ++b) {
        if (!(mask & (1 << b))) continue;
        ok = !ranges_overlap(tree.ru(a + 1), tree.ru(b + 1));
      }
    }
    expected_count += ok;
  }
  CHECK(static_cast<int>(sets.size()) == expected_count);

  std::set<std::vector<int>> unique_sets(sets.begin(), sets.end());
  CHECK(unique_sets.size() == sets.size());
  CHECK(unique_sets.count({}) == 1);

  for (const auto& s : sets) {
    for (size_t a = 0; a < s.size(); ++a) {
      for (size_t b = a + 1; b < s.size(); ++b) {
        CHECK_FALSE(tree.conflicts(s[a], s[b]));
      }
    }
  }
}

TEST_CASE("enumerate_schedulable_ru_sets guards large trees") {
  CHECK_THROWS_AS(enumerate_schedulable_ru_sets(build_tree(6)), DomainError);
}
