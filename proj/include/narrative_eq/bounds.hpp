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


#ifndef NARRATIVE_EQ_BOUNDS_HPP_
#define NARRATIVE_EQ_BOUNDS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "narrative_eq/partition.hpp"

namespace narrative_eq {

// A set of biases; an absent upper end means +infinity.
struct BiasInterval {
  Rational lower;
  std::optional<Rational> upper;
  bool lower_closed = false;
  bool upper_closed = false;
  bool empty = false;

  static BiasInterval none();
  static BiasInterval positive();  // (0, +inf)

  bool contains(const Rational& b) const;
  std::string to_string() const;

  friend bool operator==(const BiasInterval&, const BiasInterval&) = default;
};

// Exact set of b > 0 under which the partition is an equilibrium.
BiasInterval feasible_bias_interval(const ModelSpace& space, const RuleSelector& rule,
                                    const Partition& partition);

struct BoundsReport {
  Rational b_lower;
  Rational b_upper;
  std::vector<BiasInterval> informative_set;  // disjoint, ascending
  bool is_interval = false;                    // informative_set == (0, b_upper]
  bool large_conflict = false;                 // V > 0 at b_upper + 1 for every split
};

// Half the smallest gap between adjacent bliss points, cross-checked against
// the finest partition.  DegenerateCaseError for a single class.
Rational lower_bound(const ModelSpace& space, const RuleSelector& rule);

// ResourceError above the class cap.
BoundsReport upper_bound(const ModelSpace& space, const RuleSelector& rule,
                         const EngineOptions& engine = {});

// Sender payoff gain of the split above `true_class` over the split at or below it.
Rational compute_V(const ModelSpace& space, const RuleSelector& rule, int true_class,
                   const Rational& bias);

struct ClosedFormBounds {
  Rational b_bar_K;
  Rational b_bar_0;
};

// HypothesisError for K < 3.
ClosedFormBounds closed_form_bounds(int K);

}  // namespace narrative_eq

#endif  // NARRATIVE_EQ_BOUNDS_HPP_
