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


#include <cmath>
#include <random>

#include "doctest.h"
#include "narrative_eq/ambiguity_rules.hpp"
#include "narrative_eq/errors.hpp"
#include "narrative_eq/oracle.hpp"
#include "support.hpp"

namespace ne = narrative_eq;
using ne::Rational;

namespace {

const ne::ModelSpace& space_110() {
  static const ne::ModelSpace s(ne::History::parse("110"));
  return s;
}

ne::MinimalFeasibleSet range(int a, int b) { return ne::MinimalFeasibleSet{{a, b}}; }

}  // namespace

TEST_CASE("mleu actions") {
  const auto& s = space_110();  // 1/3 1/2 3/5 2/3 3/4
  CHECK(ne::mleu_action(s, range(2, 4)) == Rational(3, 4));
  CHECK(ne::mleu_action(s, range(1, 3)) == Rational(2, 3));
  for (int c = 0; c < s.class_count(); ++c) CHECK(ne::mleu_action(s, range(c, c)) == s.bliss_class(c).mean);
}

TEST_CASE("mleu choice survives restriction") {
  for (int K = 1; K <= 4; ++K) {
    for (const auto& h : ne::testing::all_histories(K)) {
      ne::ModelSpace s(h);
      const int C = s.class_count();
      for (int a = 0; a < C; ++a) {
        for (int b = a; b < C; ++b) {
          ne::Model chosen = s.most_likely({a, b});
          int c = s.class_of(chosen);
          for (int x = a; x <= c; ++x) {
            for (int y = c; y <= b; ++y) CHECK(s.most_likely({x, y}) == chosen);
          }
        }
      }
    }
  }
}

TEST_CASE("meu maximizer") {
  std::vector<ne::Moment> one{{Rational(2, 5), Rational(1, 30)}};
  CHECK(ne::meu_maximizer(one) == Rational(2, 5));
  std::vector<ne::Moment> same{{Rational(1, 2), Rational(1, 12)}, {Rational(1, 2), Rational(1, 20)}};
  CHECK(ne::meu_maximizer(same) == Rational(1, 2));
  std::vector<ne::Moment> sym{{Rational(1, 3), Rational(1, 18)}, {Rational(2, 3), Rational(1, 18)}};
  CHECK(ne::meu_maximizer(sym) == Rational(1, 2));
  std::vector<ne::WeightedMoment> w{{Rational(1, 3), Rational(1, 18), Rational(1)},
                                    {Rational(2, 3), Rational(1, 18), Rational(1)}};
  double num = ne::oracle::numeric_maximizer(w, ne::RuleKind::kMeu, 1.0, 1000000);
  CHECK(std::abs(num - 0.5) < 1e-10);
  CHECK_THROWS_AS(ne::meu_maximizer(std::vector<ne::Moment>{}), ne::ContractError);
}

TEST_CASE("meu matches the numeric oracle on random sets") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> den(2, 40);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + trial % 5;
    std::vector<ne::Moment> ms;
    std::vector<ne::WeightedMoment> ws;
    for (int i = 0; i < n; ++i) {
      int d = den(rng);
      Rational mean(std::uniform_int_distribution<int>(1, d - 1)(rng), d);
      Rational var(1, std::uniform_int_distribution<int>(8, 200)(rng));
      ms.push_back({mean, var});
      ws.push_back({mean, var, Rational(1)});
    }
    double exact = ne::meu_maximizer(ms).to_double();
    double num = ne::oracle::numeric_maximizer(ws, ne::RuleKind::kMeu, 1.0, 100000);
    CHECK(std::abs(exact - num) < 1e-9);
  }
}

TEST_CASE("bayesian actions") {
  std::vector<ne::WeightedMoment> eq{{Rational(1, 3), Rational(1, 18), Rational(1)},
                                     {Rational(2, 3), Rational(1, 18), Rational(1)}};
  CHECK(ne::weighted_mean(eq) == Rational(1, 2));
  std::vector<ne::WeightedMoment> w{{Rational(1, 2), Rational(1, 12), Rational(1)},
                                    {Rational(3, 4), Rational(1, 80), Rational(3)}};
  CHECK(ne::weighted_mean(w) == Rational(11, 16));
  std::vector<ne::WeightedMoment> zero{{Rational(1, 2), Rational(1, 12), Rational(0)}};
  CHECK_THROWS_AS(ne::weighted_mean(zero), ne::InputError);
  // Uniform over concrete models, not over groups.
  const auto& s = space_110();
  auto members = ne::weighted_members(s, range(1, 1), ne::RuleSelector::bayesian());
  Rational total;
  for (const auto& m : members) total += m.weight;
  CHECK(total == Rational(3));  // {}, {1,3}, {2,3}
}

TEST_CASE("smooth actions") {
  const auto& s = space_110();
  auto rule = ne::RuleSelector::smooth(2.0, 1e-10);
  CHECK(ne::best_response(s, rule, range(2, 2)).value == Rational(3, 5));
  std::vector<ne::WeightedMoment> sym{{Rational(1, 3), Rational(1, 18), Rational(1)},
                                      {Rational(2, 3), Rational(1, 18), Rational(1)}};
  CHECK(std::abs(ne::smooth_maximizer(sym, 3.0, 1e-10) - 0.5) < 1e-7);
  auto tiny = ne::RuleSelector::smooth(1e-8);
  for (int a = 0; a < s.class_count(); ++a) {
    for (int b = a; b < s.class_count(); ++b) {
      double sm = ne::smooth_action(s, range(a, b), tiny);
      double by = ne::bayesian_action(s, range(a, b), ne::RuleSelector::bayesian()).to_double();
      CHECK(std::abs(sm - by) < 1e-5);
    }
  }
  CHECK_FALSE(ne::best_response(s, rule, range(0, 4)).exact);
}

TEST_CASE("rule validation") {
  const auto& s = space_110();
  auto r = ne::RuleSelector::bayesian();
  r.weights.push_back({ne::Model::of({1}), Rational(-1)});
  CHECK_THROWS_AS(r.validate(s), ne::InputError);
  auto sm = ne::RuleSelector::smooth(0.0);
  CHECK_THROWS_AS(sm.validate(s), ne::InputError);
  auto dup = ne::RuleSelector::bayesian();
  dup.weights = {{ne::Model::of({1}), Rational(1)}, {ne::Model::of({1}), Rational(2)}};
  CHECK_THROWS_AS(dup.validate(s), ne::InputError);
}

TEST_CASE("explicit weights move the bayesian action") {
  const auto& s = space_110();
  auto r = ne::RuleSelector::bayesian();
  // Class 3/4 is {1,2}; class 2/3 is {1} and {2}.
  r.weights = {{ne::Model::of({1, 2}), Rational(3)}};
  CHECK(ne::bayesian_action(s, range(3, 4), r) == Rational(43, 60));
}

TEST_CASE("singleton consistency and hedging for every rule, K <= 3") {
  std::vector<ne::RuleSelector> rules{ne::RuleSelector::mleu(), ne::RuleSelector::meu(),
                                      ne::RuleSelector::bayesian(), ne::RuleSelector::smooth(1.5)};
  for (int K = 1; K <= 3; ++K) {
    for (const auto& h : ne::testing::all_histories(K)) {
      ne::ModelSpace s(h);
      for (const auto& rule : rules) {
        CHECK(ne::testing::singleton_failure(s, rule) == "");
        CHECK(ne::testing::hedging_failure(s, rule, 1e-8) == "");
      }
    }
  }
}
