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


#ifndef NARRATIVE_EQ_ORACLE_HPP_
#define NARRATIVE_EQ_ORACLE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "narrative_eq/bounds.hpp"
#include "narrative_eq/equilibrium.hpp"

// Slow reference implementations.  They share core_model's arithmetic and
// nothing else.

namespace narrative_eq::oracle {

inline constexpr int kOracleClassCap = 12;

struct OracleClass {
  Rational mean;
  std::vector<Model> models;
};

// Bliss classes rebuilt by listing every subset of {1..K}.
std::vector<OracleClass> classes(const ModelSpace& space);

// Per-model incentive checks over every interval partition.  Smooth rules
// are not supported.  ResourceError above kOracleClassCap classes.
std::vector<Partition> brute_force_equilibria(const Scenario& scenario);

// Bounds from testing each partition at every breakpoint and between them.
BoundsReport brute_force_bounds(const ModelSpace& space, const RuleSelector& rule);

// Grid search followed by bisection on the one-sided slope.
double numeric_maximizer(std::span<const WeightedMoment> members, RuleKind kind, double alpha,
                         std::size_t grid_size);
double numeric_action_oracle(const ModelSpace& space, MinimalFeasibleSet set,
                             const RuleSelector& rule, std::size_t grid_size);

struct QuadratureSummary {
  double mean = 0.0;
  double variance = 0.0;
  double likelihood = 0.0;
};

// Gauss-Legendre integration of the beta posterior.
QuadratureSummary quadrature_summary(const Model& m, const History& h);

}  // namespace narrative_eq::oracle

#endif  // NARRATIVE_EQ_ORACLE_HPP_
