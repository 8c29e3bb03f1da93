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


// Helpers shared by the unit and acceptance tests.

#ifndef NARRATIVE_EQ_TESTS_SUPPORT_HPP_
#define NARRATIVE_EQ_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "narrative_eq/bounds.hpp"
#include "narrative_eq/equilibrium.hpp"
#include "narrative_eq/partition.hpp"

namespace narrative_eq::testing {

inline std::vector<History> all_histories(int K) {
  std::vector<History> out;
  for (std::uint32_t bits = 0; bits < (1u << K); ++bits) {
    std::vector<int> h;
    for (int i = 0; i < K; ++i) h.push_back(static_cast<int>((bits >> i) & 1));
    out.emplace_back(h);
  }
  return out;
}

inline std::vector<History> canonical_histories(int K) {
  std::vector<History> out;
  for (int s = 0; s <= K; ++s) out.push_back(History::canonical(K, s));
  return out;
}

// Every incentive breakpoint, the midpoints between them, one point below
// the first and one above the last.
inline std::vector<Rational> breakpoint_grid(const ModelSpace& space, const RuleSelector& rule) {
  std::vector<Rational> bps;
  if (space.class_count() >= 2) {
    ActionTable actions(space, rule);
    ConstraintTable table(space, actions);
    for (int r = table.first_positive_rank(); r < table.rank_count(); ++r) {
      bps.push_back(table.value(r));
    }
  }
  std::vector<Rational> grid;
  if (bps.empty()) return {Rational(1)};
  grid.push_back(bps.front() / Rational(2));
  for (std::size_t i = 0; i < bps.size(); ++i) {
    grid.push_back(bps[i]);
    grid.push_back(i + 1 < bps.size() ? (bps[i] + bps[i + 1]) / Rational(2) : bps[i] + Rational(1));
  }
  return grid;
}

inline Scenario scenario_for(const ModelSpace& space, const RuleSelector& rule, const Rational& b) {
  Scenario s{space, rule, b, {}};
  s.validate();
  return s;
}

// Hedging over every pair of contiguous sets whose union is contiguous.
// Returns an empty string on success, else a description of the first failure.
inline std::string hedging_failure(const ModelSpace& space, const RuleSelector& rule, double tol) {
  const int C = space.class_count();
  ActionTable actions(space, rule);
  for (int s1 = 0; s1 < C; ++s1) {
    for (int e1 = s1; e1 < C; ++e1) {
      for (int s2 = s1; s2 < C; ++s2) {
        for (int e2 = s2; e2 < C; ++e2) {
          if (s2 > e1 + 1) continue;
          const Rational& a1 = actions.at(s1, e1).value;
          const Rational& a2 = actions.at(s2, e2).value;
          const Rational& u = actions.at(s1, std::max(e1, e2)).value;
          Rational lo = min(a1, a2), hi = max(a1, a2);
          bool ok = rule.exact() ? (lo <= u && u <= hi)
                                 : (u.to_double() >= lo.to_double() - tol &&
                                    u.to_double() <= hi.to_double() + tol);
          if (!ok) {
            return "[" + std::to_string(s1) + "," + std::to_string(e1) + "] u [" +
                   std::to_string(s2) + "," + std::to_string(e2) + "]: " + u.to_string() +
                   " outside " + lo.to_string() + ".." + hi.to_string();
          }
        }
      }
    }
  }
  return "";
}

inline std::string singleton_failure(const ModelSpace& space, const RuleSelector& rule) {
  for (int c = 0; c < space.class_count(); ++c) {
    Action a = best_response(space, rule, MinimalFeasibleSet{{c, c}});
    if (a.value != space.bliss_class(c).mean) return "class " + std::to_string(c);
  }
  return "";
}

}  // namespace narrative_eq::testing

#endif  // NARRATIVE_EQ_TESTS_SUPPORT_HPP_
