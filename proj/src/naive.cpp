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


#include "narrative_eq/naive.hpp"

#include <algorithm>

#include "narrative_eq/errors.hpp"

namespace narrative_eq {
namespace {

// Sender payoff up to the variance term, which cancels in every gain.
Rational sender_loss(const Rational& mean, const Rational& bias, const Rational& action) {
  Rational d = mean + bias - action;
  return d * d;
}

struct Choice {
  const ModelGroup* group = nullptr;
  Rational gain;
};

Choice best_group(const ModelSpace& space, const ModelGroup& truth, const Rational& bias) {
  const Rational& mean = truth.summary.mean;
  const Rational base = sender_loss(mean, bias, mean);
  Choice best{&truth, Rational(0)};
  for (const BlissClass& c : space.classes()) {
    for (const ModelGroup& g : c.members) {
      if (g.summary.likelihood < truth.summary.likelihood) continue;
      Rational gain = base - sender_loss(mean, bias, g.summary.mean);
      if (gain > best.gain) best = {&g, std::move(gain)};
    }
  }
  return best;
}

}  // namespace

Model naive_response(const Model& true_model, const Model& proposal, const History& history) {
  return likelihood(proposal, history) >= likelihood(true_model, history) ? proposal : true_model;
}

NaiveProposal naive_best_proposal(const ModelSpace& space, const Model& true_model,
                                  const Rational& bias) {
  const ModelGroup& truth = space.group_of(true_model);
  Choice c = best_group(space, truth, bias);
  if (c.group == &truth) return {true_model, Rational(0)};
  return {space.first_member(*c.group), c.gain};
}

PersuasionReport persuasion_sets(const Scenario& scenario, const PartitionProfile& equilibrium) {
  const ModelSpace& space = scenario.space;
  EquilibriumReport check = check_equilibrium(equilibrium, scenario);
  if (!check.ic_ok) throw ContractError("profile is not an equilibrium");
  const Rational& b = scenario.bias;

  PersuasionReport report;
  std::vector<bool> naive_class(static_cast<std::size_t>(space.class_count()), false);
  std::vector<bool> eq_class(naive_class.size(), false);
  for (int c = 0; c < space.class_count(); ++c) {
    const Rational& mean = space.bliss_class(c).mean;
    const int cell = equilibrium.partition().cell_of(c);
    const Rational& action = equilibrium.actions[static_cast<std::size_t>(cell)].value;
    const Rational base = sender_loss(mean, b, mean);
    for (const ModelGroup& g : space.bliss_class(c).members) {
      Choice naive = best_group(space, g, b);
      GroupGain gg;
      gg.size = g.size;
      gg.successes = g.successes;
      gg.class_index = c;
      gg.count = g.count;
      gg.representative = space.first_member(g);
      gg.equilibrium_gain = base - sender_loss(mean, b, action);
      gg.naive_gain = naive.gain;
      gg.naive_action = naive.group->summary.mean;
      auto models = space.members(g);
      if (gg.naive_gain.sign() > 0) {
        naive_class[static_cast<std::size_t>(c)] = true;
        report.naive_set.insert(report.naive_set.end(), models.begin(), models.end());
      }
      if (gg.equilibrium_gain.sign() > 0) {
        eq_class[static_cast<std::size_t>(c)] = true;
        report.equilibrium_set.insert(report.equilibrium_set.end(), models.begin(), models.end());
      }
      report.per_group_gain.push_back(std::move(gg));
    }
  }
  for (std::size_t c = 0; c < naive_class.size(); ++c) {
    if (naive_class[c]) report.naive_classes.push_back(static_cast<int>(c));
    if (eq_class[c]) report.equilibrium_classes.push_back(static_cast<int>(c));
  }
  std::sort(report.naive_set.begin(), report.naive_set.end(), lexicographically_less);
  std::sort(report.equilibrium_set.begin(), report.equilibrium_set.end(), lexicographically_less);
  report.subset_ok = std::includes(report.naive_set.begin(), report.naive_set.end(),
                                   report.equilibrium_set.begin(), report.equilibrium_set.end(),
                                   lexicographically_less);
  report.strict = report.subset_ok && report.naive_set.size() > report.equilibrium_set.size();
  report.prop_asserted = scenario.rule.kind == RuleKind::kMleu;
  if (report.prop_asserted && !report.subset_ok) {
    throw InvariantError("equilibrium persuasion set is not contained in the naive set");
  }
  return report;
}

}  // namespace narrative_eq
