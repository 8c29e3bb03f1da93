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


#ifndef NARRATIVE_EQ_IO_HPP_
#define NARRATIVE_EQ_IO_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "narrative_eq/bounds.hpp"
#include "narrative_eq/equilibrium.hpp"
#include "narrative_eq/naive.hpp"

namespace narrative_eq::io {

using nlohmann::json;

// InputError on anything malformed; ResourceError when K exceeds its cap.
Scenario parse_scenario(const json& j);
Scenario parse_scenario_text(std::string_view text);
Scenario load_scenario(const std::string& path);

RuleSelector parse_rule(const json& j, int K);
TiebreakPolicy parse_tiebreak(const json& j, int K);

// "num/den" for exact actions, a decimal for smooth ones.
std::string action_string(const Action& a);
// x rounded half away from zero to `places` decimals.
std::string decimal(const Rational& x, int places);

json profile_json(const PartitionProfile& p, const ModelSpace& space);
json report_json(const EquilibriumReport& r, const ModelSpace& space);
json scenario_json(const Scenario& s);
json solve_json(const Scenario& s, const std::vector<EquilibriumReport>& equilibria, int max_steps);
json trace_json(const ReduceResult& r, const ModelSpace& space);
json persuasion_json(const PersuasionReport& r, const ModelSpace& space);

// Rebuilds a profile from profile_json output and checks its actions.
PartitionProfile profile_from_json(const json& j, const Scenario& s);

// "0,3" (cut after classes 0 and 3) or "1/3|1/2,3/5,2/3|3/4" (means per cell).
Partition parse_partition_spec(std::string_view spec, const ModelSpace& space);

struct BoundsRow {
  int K = 0;
  int h_sigma = 0;
  Rational b_lower;
  std::optional<Rational> b_upper;
};

std::string bounds_csv(const std::vector<BoundsRow>& rows);
std::string bounds_svg(const std::vector<BoundsRow>& rows);

}  // namespace narrative_eq::io

#endif  // NARRATIVE_EQ_IO_HPP_
