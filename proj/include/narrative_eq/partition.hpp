// Copyright 2026 The narrative_eq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef NARRATIVE_EQ_PARTITION_HPP_
#define NARRATIVE_EQ_PARTITION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "narrative_eq/ambiguity_rules.hpp"
#include "narrative_eq/core_model.hpp"
#include "narrative_eq/rational.hpp"

namespace narrative_eq {

inline constexpr int kDefaultClassCap = 22;

// kDefaultClassCap unless NARRATIVE_EQ_CAP holds a positive integer.
int default_class_cap();

struct EngineOptions {
  int class_cap = default_class_cap();
  int workers = 1;
};

struct Scenario {
  ModelSpace space;
  RuleSelector rule;
  Rational bias;
  EngineOptions engine;

  // InputError unless b > 0 and the rule is valid for the space.
  void validate() const;
};

Scenario make_scenario(const History& history, const Rational& bias, RuleSelector rule = {},
                       SpaceOptions options = {});

// Bit c set: a boundary between classes c and c+1.
using CutMask = std::uint64_t;

struct Partition {
  std::vector<ClassRange> cells;

  static Partition from_cuts(CutMask cuts, int class_count);
  static Partition babbling(int class_count) { return from_cuts(0, class_count); }
  static Partition finest(int class_count);

  int steps() const { return static_cast<int>(cells.size()); }
  int class_count() const { return cells.empty() ? 0 : cells.back().last + 1; }
  CutMask cuts() const;
  std::vector<int> cut_positions() const;
  int cell_of(int class_index) const;
  // ContractError unless the cells tile 0..class_count-1 in order.
  void validate(int class_count) const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Orders by step count, then by the ascending list of cut positions.
bool canonical_less(CutMask a, CutMask b);

struct PartitionProfile {
  std::vector<ClassRange> cells;
  std::vector<Action> actions;

  Partition partition() const { return Partition{cells}; }
  int steps() const { return static_cast<int>(cells.size()); }
};

// Best responses over every class range, computed on first use.
class ActionTable {
 public:
  ActionTable(const ModelSpace& space, const RuleSelector& rule);

  const Action& at(int first, int last);
  // Fills every entry; afterwards at() is safe to call from several threads.
  void prefill(int workers);
  int class_count() const { return class_count_; }

 private:
  const ModelSpace& space_;
  const RuleSelector& rule_;
  int class_count_;
  std::vector<std::optional<Action>> memo_;
};

PartitionProfile make_profile(const ModelSpace& space, const RuleSelector& rule,
                              const Partition& partition);
PartitionProfile make_profile(const ModelSpace& space, ActionTable& actions,
                              const Partition& partition);

// Incentive constraints between adjacent cells [s..c] and [c+1..e]:
//   mid - mean[c+1] <= b <= mid - mean[c],  mid = (a[s..c] + a[c+1..e]) / 2.
// Bounds are stored as ranks into one sorted table of distinct values.
class ConstraintTable {
 public:
  struct Entry {
    int lo = 0;
    int hi = 0;
    bool ordered = true;  // a[s..c] < a[c+1..e]
  };

  ConstraintTable(const ModelSpace& space, ActionTable& actions, int workers = 1);

  int class_count() const { return class_count_; }
  const Entry& at(int s, int c, int e) const {
    return entries_[(static_cast<std::size_t>(s) * class_count_ + c) * class_count_ + e];
  }
  const Rational& value(int rank) const { return values_[static_cast<std::size_t>(rank)]; }
  int rank_count() const { return static_cast<int>(values_.size()); }
  // Smallest rank whose value is strictly positive.
  int first_positive_rank() const { return first_positive_; }

 private:
  int class_count_;
  std::vector<Entry> entries_;
  std::vector<Rational> values_;
  int first_positive_ = 0;
};

}  // namespace narrative_eq

#endif  // NARRATIVE_EQ_PARTITION_HPP_
