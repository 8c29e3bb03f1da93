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


#ifndef NARRATIVE_EQ_EQUILIBRIUM_HPP_
#define NARRATIVE_EQ_EQUILIBRIUM_HPP_

#include <string>
#include <vector>

#include "narrative_eq/partition.hpp"

namespace narrative_eq {

struct Violation {
  int class_index = 0;
  int current_cell = 0;
  int preferred_cell = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct EquilibriumReport {
  PartitionProfile profile;
  int steps = 0;
  bool ic_ok = false;
  std::vector<Violation> violations;
};

// Exact check of every class against every cell's action.  ContractError if
// the profile is malformed or, for exact rules, its actions are not the best
// responses of its cells.
EquilibriumReport check_equilibrium(const PartitionProfile& profile, const Scenario& scenario);

// Cut masks of all equilibria, ordered by canonical_less.  ResourceError above
// the class cap.
std::vector<CutMask> equilibrium_cuts(const Scenario& scenario);

std::vector<EquilibriumReport> enumerate_equilibria(const Scenario& scenario);

// Largest step count.  Throws InvariantError if some n <= N has no equilibrium.
int max_steps(const Scenario& scenario);

// Equilibria not strictly refined by another equilibrium.
std::vector<EquilibriumReport> most_informative(const Scenario& scenario);

struct TraceStep {
  std::string event;  // "merge" or "move"
  int moved_class = -1;
  PartitionProfile profile;
};

struct ReduceResult {
  std::vector<TraceStep> trace;
  PartitionProfile result;
};

// Merges the two rightmost cells, then shifts leftmost classes of deviating
// cells leftwards until no deviation remains.
ReduceResult reduce_step(const PartitionProfile& profile, const Scenario& scenario);

std::string describe(const Violation& v, const ModelSpace& space);

}  // namespace narrative_eq

#endif  // NARRATIVE_EQ_EQUILIBRIUM_HPP_
