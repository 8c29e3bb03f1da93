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


#ifndef NARRATIVE_EQ_AMBIGUITY_RULES_HPP_
#define NARRATIVE_EQ_AMBIGUITY_RULES_HPP_

#include <span>
#include <string>
#include <vector>

#include "narrative_eq/core_model.hpp"
#include "narrative_eq/rational.hpp"

namespace narrative_eq {

enum class RuleKind { kMleu, kMeu, kBayesian, kSmooth };

struct WeightEntry {
  Model model;
  Rational weight;
};

struct RuleSelector {
  RuleKind kind = RuleKind::kMleu;
  // Per-model prior weights; unlisted models get default_weight.
  std::vector<WeightEntry> weights;
  Rational default_weight{1};
  double smooth_alpha = 1.0;
  double tolerance = 1e-9;

  static RuleSelector mleu() { return {}; }
  static RuleSelector meu();
  static RuleSelector bayesian();
  static RuleSelector smooth(double alpha, double tolerance = 1e-9);

  std::string name() const;
  bool exact() const { return kind != RuleKind::kSmooth; }
  // InputError on bad parameters or weights naming models outside the space.
  void validate(const ModelSpace& space) const;
};

// Smooth actions carry exact = false; their value is the exact binary
// expansion of the double the search returned.
struct Action {
  Rational value;
  bool exact = true;

  friend bool operator==(const Action&, const Action&) = default;
};

struct Moment {
  Rational mean;
  Rational variance;
};

struct WeightedMoment {
  Rational mean;
  Rational variance;
  Rational weight;
};

// Maximizer of a -> min_i -(var_i + (mean_i - a)^2).
Rational meu_maximizer(std::span<const Moment> members);
// Weight-renormalized average of the means.
Rational weighted_mean(std::span<const WeightedMoment> members);
// Maximizer of sum_i w_i phi(-(var_i + (mean_i - a)^2)), phi(x) = -exp(-alpha x)/alpha.
double smooth_maximizer(std::span<const WeightedMoment> members, double alpha, double tolerance);

// One entry per model group in the set, weights summed over concrete models.
std::vector<WeightedMoment> weighted_members(const ModelSpace& space, MinimalFeasibleSet set,
                                             const RuleSelector& rule);

Rational mleu_action(const ModelSpace& space, MinimalFeasibleSet set);
Rational meu_action(const ModelSpace& space, MinimalFeasibleSet set);
Rational bayesian_action(const ModelSpace& space, MinimalFeasibleSet set, const RuleSelector& rule);
double smooth_action(const ModelSpace& space, MinimalFeasibleSet set, const RuleSelector& rule);

Action best_response(const ModelSpace& space, const RuleSelector& rule, MinimalFeasibleSet set);

}  // namespace narrative_eq

#endif  // NARRATIVE_EQ_AMBIGUITY_RULES_HPP_
