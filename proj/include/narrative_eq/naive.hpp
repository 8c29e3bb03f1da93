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


#ifndef NARRATIVE_EQ_NAIVE_HPP_
#define NARRATIVE_EQ_NAIVE_HPP_

#include <vector>

#include "narrative_eq/equilibrium.hpp"

namespace narrative_eq {

// The proposal if it fits the history at least as well as the true model.
Model naive_response(const Model& true_model, const Model& proposal, const History& history);

struct NaiveProposal {
  Model proposal;
  Rational gain;  // sender payoff at the adopted mean minus payoff at the true mean
};

// A sender-optimal proposal the naive receiver adopts; the true model itself
// when nothing beats telling the truth.
NaiveProposal naive_best_proposal(const ModelSpace& space, const Model& true_model,
                                  const Rational& bias);

struct GroupGain {
  int size = 0;
  int successes = 0;
  int class_index = 0;
  std::uint64_t count = 0;
  Model representative;
  Rational equilibrium_gain;
  Rational naive_gain;
  Rational naive_action;
};

struct PersuasionReport {
  std::vector<Model> naive_set;
  std::vector<Model> equilibrium_set;
  // A class is listed when any of its models is in the set.
  std::vector<int> naive_classes;
  std::vector<int> equilibrium_classes;
  bool subset_ok = false;
  bool strict = false;
  // Gains are shared by every model of a group.
  std::vector<GroupGain> per_group_gain;
  bool prop_asserted = false;  // false for rules other than MLEU
};

// ContractError if the profile is not an equilibrium of the scenario;
// InvariantError if the rule is MLEU and the equilibrium set escapes the naive set.
PersuasionReport persuasion_sets(const Scenario& scenario, const PartitionProfile& equilibrium);

}  // namespace narrative_eq

#endif  // NARRATIVE_EQ_NAIVE_HPP_
