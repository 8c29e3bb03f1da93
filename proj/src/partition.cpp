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


#include "narrative_eq/partition.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>
#include <thread>

#include "narrative_eq/errors.hpp"

namespace narrative_eq {

int default_class_cap() {
  const char* env = std::getenv("NARRATIVE_EQ_CAP");
  if (env == nullptr || *env == '\0') return kDefaultClassCap;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 63) throw InputError("NARRATIVE_EQ_CAP must be an integer in 1..63");
  return static_cast<int>(v);
}

void Scenario::validate() const {
  if (bias.sign() <= 0) throw InputError("bias must be positive");
  rule.validate(space);
  if (engine.workers < 1) throw InputError("worker count must be at least 1");
  if (engine.class_cap < 1) throw InputError("class cap must be positive");
}

Scenario make_scenario(const History& history, const Rational& bias, RuleSelector rule,
                       SpaceOptions options) {
  Scenario s{ModelSpace(history, std::move(options)), std::move(rule), bias, {}};
  s.validate();
  return s;
}

Partition Partition::from_cuts(CutMask cuts, int class_count) {
  if (class_count < 1 || class_count > 64) throw ContractError("class count out of range");
  if (class_count < 64 && (cuts >> (class_count - 1)) != 0) {
    throw ContractError("cut beyond the last class");
  }
  Partition p;
  int start = 0;
  for (int c = 0; c < class_count - 1; ++c) {
    if (cuts & (CutMask{1} << c)) {
      p.cells.push_back({start, c});
      start = c + 1;
    }
  }
  p.cells.push_back({start, class_count - 1});
  return p;
}

Partition Partition::finest(int class_count) {
  Partition p;
  for (int c = 0; c < class_count; ++c) p.cells.push_back({c, c});
  return p;
}

CutMask Partition::cuts() const {
  CutMask m = 0;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) m |= CutMask{1} << cells[i].last;
  return m;
}

std::vector<int> Partition::cut_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) out.push_back(cells[i].last);
  return out;
}

int Partition::cell_of(int class_index) const {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].contains(class_index)) return static_cast<int>(i);
  }
  throw ContractError("class " + std::to_string(class_index) + " not covered by the partition");
}

void Partition::validate(int class_count) const {
  if (cells.empty()) throw ContractError("partition has no cells");
  int next = 0;
  for (const ClassRange& r : cells) {
    if (r.first != next || r.last < r.first) {
      throw ContractError("cells must be nonempty, contiguous and in class order");
    }
    next = r.last + 1;
  }
  if (next != class_count) throw ContractError("cells do not cover every class");
}

bool canonical_less(CutMask a, CutMask b) {
  int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  // Same count: compare ascending position lists lexicographically.
  while (a != 0 && b != 0) {
    int x = std::countr_zero(a), y = std::countr_zero(b);
    if (x != y) return x < y;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

ActionTable::ActionTable(const ModelSpace& space, const RuleSelector& rule)
    : space_(space),
      rule_(rule),
      class_count_(space.class_count()),
      memo_(static_cast<std::size_t>(class_count_) * class_count_) {}

const Action& ActionTable::at(int first, int last) {
  if (first < 0 || last >= class_count_ || first > last) throw ContractError("bad class range");
  auto& slot = memo_[static_cast<std::size_t>(first) * class_count_ + last];
  if (!slot) slot = best_response(space_, rule_, MinimalFeasibleSet{{first, last}});
  return *slot;
}

void ActionTable::prefill(int workers) {
  std::vector<std::pair<int, int>> todo;
  for (int s = 0; s < class_count_; ++s) {
    for (int e = s; e < class_count_; ++e) {
      if (!memo_[static_cast<std::size_t>(s) * class_count_ + e]) todo.emplace_back(s, e);
    }
  }
  workers = std::max(1, std::min<int>(workers, static_cast<int>(todo.size())));
  if (workers == 1) {
    for (auto [s, e] : todo) at(s, e);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([this, &todo, w, workers] {
      for (std::size_t i = static_cast<std::size_t>(w); i < todo.size();
           i += static_cast<std::size_t>(workers)) {
        at(todo[i].first, todo[i].second);
      }
    });
  }
  for (auto& t : pool) t.join();
}

PartitionProfile make_profile(const ModelSpace& space, ActionTable& actions,
                              const Partition& partition) {
  partition.validate(space.class_count());
  PartitionProfile p;
  p.cells = partition.cells;
  for (const ClassRange& r : partition.cells) p.actions.push_back(actions.at(r.first, r.last));
  return p;
}

PartitionProfile make_profile(const ModelSpace& space, const RuleSelector& rule,
                              const Partition& partition) {
  ActionTable table(space, rule);
  return make_profile(space, table, partition);
}

ConstraintTable::ConstraintTable(const ModelSpace& space, ActionTable& actions, int workers)
    : class_count_(space.class_count()) {
  const int C = class_count_;
  actions.prefill(workers);
  entries_.resize(static_cast<std::size_t>(C) * C * C);
  std::vector<Rational> lower(entries_.size()), upper(entries_.size());
  for (int s = 0; s < C; ++s) {
    for (int c = s; c + 1 < C; ++c) {
      const Rational& left = actions.at(s, c).value;
      for (int e = c + 1; e < C; ++e) {
        const Rational& right = actions.at(c + 1, e).value;
        std::size_t i = (static_cast<std::size_t>(s) * C + c) * C + e;
        Rational mid = (left + right) / Rational(2);
        lower[i] = mid - space.bliss_class(c + 1).mean;
        upper[i] = mid - space.bliss_class(c).mean;
        entries_[i].ordered = left < right;
        values_.push_back(lower[i]);
        values_.push_back(upper[i]);
      }
    }
  }
  values_.push_back(Rational(0));
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  auto rank = [this](const Rational& v) {
    return static_cast<int>(std::lower_bound(values_.begin(), values_.end(), v) - values_.begin());
  };
  for (int s = 0; s < C; ++s) {
    for (int c = s; c + 1 < C; ++c) {
      for (int e = c + 1; e < C; ++e) {
        std::size_t i = (static_cast<std::size_t>(s) * C + c) * C + e;
        entries_[i].lo = rank(lower[i]);
        entries_[i].hi = rank(upper[i]);
      }
    }
  }
  first_positive_ = rank(Rational(0)) + 1;
}

}  // namespace narrative_eq
