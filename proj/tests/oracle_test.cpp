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


#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "narrative_eq/errors.hpp"
#include "narrative_eq/oracle.hpp"
#include "support.hpp"

namespace ne = narrative_eq;
using ne::Rational;

TEST_CASE("oracle classes match the engine") {
  for (int K = 1; K <= 5; ++K) {
    for (const auto& h : ne::testing::all_histories(K)) {
      ne::ModelSpace s(h);
      auto oc = ne::oracle::classes(s);
      REQUIRE(static_cast<int>(oc.size()) == s.class_count());
      for (int c = 0; c < s.class_count(); ++c) {
        CHECK(oc[c].mean == s.bliss_class(c).mean);
        std::uint64_t n = 0;
        for (const auto& g : s.bliss_class(c).members) n += g.count;
        CHECK(oc[c].models.size() == n);
      }
    }
  }
}

TEST_CASE("brute force equilibria") {
  auto s = ne::make_scenario(ne::History::parse("101"), Rational(1, 30));
  auto eqs = ne::oracle::brute_force_equilibria(s);
  CHECK(std::find(eqs.begin(), eqs.end(), ne::Partition::babbling(5)) != eqs.end());
  CHECK(std::find(eqs.begin(), eqs.end(), ne::Partition::from_cuts(0b1001, 5)) != eqs.end());
  auto smooth = s;
  smooth.rule = ne::RuleSelector::smooth(1.0);
  CHECK_THROWS_AS(ne::oracle::brute_force_equilibria(smooth), ne::ContractError);
  auto big = ne::make_scenario(ne::History::canonical(7, 3), Rational(1, 30));
  CHECK_THROWS_AS(ne::oracle::brute_force_equilibria(big), ne::ResourceError);
}

TEST_CASE("brute force bounds") {
  ne::ModelSpace a(ne::History::canonical(3, 2));
  auto ra = ne::oracle::brute_force_bounds(a, ne::RuleSelector::mleu());
  CHECK(ra.b_lower == Rational(1, 30));
  CHECK(ra.b_upper == Rational(5, 24));
  ne::ModelSpace b(ne::History::canonical(3, 0));
  auto rb = ne::oracle::brute_force_bounds(b, ne::RuleSelector::mleu());
  CHECK(rb.b_lower == Rational(1, 40));
  CHECK(rb.b_upper == Rational(1, 40));
}

TEST_CASE("brute force bounds agree with the engine up to K = 5") {
  for (int K = 1; K <= 5; ++K) {
    for (const auto& h : ne::testing::canonical_histories(K)) {
      ne::ModelSpace s(h);
      if (s.class_count() > ne::oracle::kOracleClassCap) continue;
      auto e = ne::upper_bound(s, ne::RuleSelector::mleu());
      auto o = ne::oracle::brute_force_bounds(s, ne::RuleSelector::mleu());
      CHECK(e.b_lower == o.b_lower);
      CHECK(e.b_upper == o.b_upper);
      CHECK(e.informative_set == o.informative_set);
      CHECK(e.is_interval == o.is_interval);
    }
  }
}

TEST_CASE("numeric action oracle") {
  std::vector<ne::WeightedMoment> sym{{Rational(1, 3), Rational(1, 18), Rational(1)},
                                      {Rational(2, 3), Rational(1, 18), Rational(1)}};
  CHECK(std::abs(ne::oracle::numeric_maximizer(sym, ne::RuleKind::kMeu, 1.0, 10000) - 0.5) < 1e-4);
  std::vector<ne::WeightedMoment> one{{Rational(3, 7), Rational(1, 50), Rational(1)}};
  CHECK(ne::oracle::numeric_maximizer(one, ne::RuleKind::kMeu, 1.0, 10000) == doctest::Approx(3.0 / 7));
  std::vector<ne::WeightedMoment> bay{{Rational(1, 2), Rational(1, 12), Rational(1)},
                                      {Rational(3, 4), Rational(1, 80), Rational(1)}};
  CHECK(std::abs(ne::oracle::numeric_maximizer(bay, ne::RuleKind::kBayesian, 1.0, 10000) - 0.625) <
        1.0 / 9999);
  CHECK_THROWS_AS(ne::oracle::numeric_maximizer(bay, ne::RuleKind::kMeu, 1.0, 100), ne::ContractError);
}

TEST_CASE("numeric oracle agrees with exact and smooth rules on class sets") {
  ne::ModelSpace s(ne::History::parse("10110"));
  const int C = s.class_count();
  for (const auto& rule : {ne::RuleSelector::meu(), ne::RuleSelector::bayesian(),
                           ne::RuleSelector::mleu(), ne::RuleSelector::smooth(2.0, 1e-10)}) {
    for (int a = 0; a < C; a += 2) {
      for (int b = a; b < C; b += 3) {
        double exact = ne::best_response(s, rule, {{a, b}}).value.to_double();
        double num = ne::oracle::numeric_action_oracle(s, {{a, b}}, rule, 20000);
        CHECK(std::abs(exact - num) < (rule.exact() ? 1e-9 : 1e-7));
      }
    }
  }
}
