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

#ifndef PROXYSEL_RU_TREE_HPP
#define PROXYSEL_RU_TREE_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace proxysel {

/// One resource unit in the binary RU partition.
///
/// RUs are indexed two ways: by (level, index_in_level) with level 1 at the
/// root, and by the scalar index q in [1, 2^L - 1] following the heap order
/// q = 2^(level-1) + index_in_level - 1. Tone offsets are 0-based.
struct RuId {
  int q = 0;
  int level = 0;
  int index_in_level = 0;  // 1-based, left to right
  int tone_start = 0;
  int tone_count = 0;

  int tone_end() const { return tone_start + tone_count; }  // exclusive
};

/// The full L-level RU binary tree with its conflict graph.
///
/// Immutable after construction; safe for concurrent reads.
class RuTree {
 public:
  int levels() const { return levels_; }
  int ru_count() const { return static_cast<int>(rus_.size()); }  // Q
  int total_tones() const { return rus_[0].tone_count; }          // root span

  const RuId& ru(int q) const;  // q in [1, Q]
  const std::vector<RuId>& rus() const { return rus_; }

  /// Unordered RU pairs (q, q') with overlapping tone ranges, q < q'.
  const std::vector<std::pair<int, int>>& conflict_edges() const {
    return conflict_edges_;
  }

  bool conflicts(int q1, int q2) const;

  /// MU-MIMO is allowed on levels 1..L-2 only; the two bottom levels are
  /// SU-only.
  bool mu_mimo_allowed(int q) const;

 private:
  friend RuTree build_tree(int levels);
  friend RuTree build_tree_unchecked(int levels);

  int levels_ = 0;
  std::vector<RuId> rus_;
  std::vector<std::pair<int, int>> conflict_edges_;
};

/// Builds the RU tree for a standard level count L in {4, 5, 6, 7}.
/// Throws DomainError for any other L.
RuTree build_tree(int levels);

/// Builds an RU tree of any level count L >= 1. Used by oracles and tests
/// that want tiny trees; production code goes through build_tree.
RuTree build_tree_unchecked(int levels);

/// (level, index_in_level) for scalar index q. Throws DomainError if q is
/// outside [1, 2^levels - 1].
std::pair<int, int> index_to_position(int q, int levels);

/// Scalar index q for (level, index_in_level). Inverse of index_to_position.
int position_to_index(int level, int index_in_level, int levels);

/// All pairwise conflict-free RU subsets (antichains of the tree), the
/// empty set included. Guarded to L <= 5; larger trees throw DomainError.
std::vector<std::vector<int>> enumerate_schedulable_ru_sets(const RuTree& tree);

}  // namespace proxysel

#endif  // PROXYSEL_RU_TREE_HPP
