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


#include "narrative_eq/bounds.hpp"

#include <algorithm>
#include <thread>

#include "narrative_eq/errors.hpp"

namespace narrative_eq {
namespace {

struct RankInterval {
  int lo;
  int hi;
  friend bool operator==(const RankInterval&, const RankInterval&) = default;
  friend auto operator<=>(const RankInterval&, const RankInterval&) = default;
};

class IntervalSearch {
 public:
  explicit IntervalSearch(const ConstraintTable& table) : table_(table), C_(table.class_count()) {}

  void run(int first_end, std::vector<RankInterval>& out) const {
    if (first_end == C_ - 1) return;  // babbling
    dfs(0, first_end + 1, 0, table_.rank_count() - 1, out);
  }

 private:
  void dfs(int p, int s, int lo, int hi, std::vector<RankInterval>& out) const {
    for (int e = s; e < C_; ++e) {
      const auto& en = table_.at(p, s - 1, e);
      if (!en.ordered) continue;
      int nlo = std::max(lo, en.lo);
      int nhi = std::min(hi, en.hi);
      if (nlo > nhi || nhi < table_.first_positive_rank()) continue;
      if (e == C_ - 1) {
        out.push_back({nlo, nhi});
      } else {
        dfs(s, e + 1, nlo, nhi, out);
      }
    }
  }

  const ConstraintTable& table_;
  int C_;
};

bool touches(const BiasInterval& a, const BiasInterval& b) {
  // a.lower <= b.lower; both bounded above.
  if (b.lower < *a.upper) return true;
  return b.lower == *a.upper && (a.upper_closed || b.lower_closed);
}

}  // namespace

BiasInterval BiasInterval::none() {
  BiasInterval i;
  i.upper = Rational(0);
  i.empty = true;
  return i;
}

BiasInterval BiasInterval::positive() { return BiasInterval{}; }

bool BiasInterval::contains(const Rational& b) const {
  if (empty) return false;
  if (lower_closed ? b < lower : b <= lower) return false;
  if (upper && (upper_closed ? b > *upper : b >= *upper)) return false;
  return true;
}

std::string BiasInterval::to_string() const {
  if (empty) return "{}";
  return std::string(lower_closed ? "[" : "(") + lower.to_string() + ", " +
         (upper ? upper->to_string() : std::string("inf")) + (upper && upper_closed ? "]" : ")");
}

BiasInterval feasible_bias_interval(const ModelSpace& space, const RuleSelector& rule,
                                    const Partition& partition) {
  PartitionProfile profile = make_profile(space, rule, partition);
  BiasInterval out = BiasInterval::positive();
  // U(a_i) >= U(a_j)  <=>  (a_i - a_j)(2(mean + b) - a_i - a_j) >= 0.
  for (std::size_t i = 0; i < profile.cells.size(); ++i) {
    for (int c = profile.cells[i].first; c <= profile.cells[i].last; ++c) {
      const Rational& mean = space.bliss_class(c).mean;
      const Rational& ai = profile.actions[i].value;
      for (std::size_t j = 0; j < profile.cells.size(); ++j) {
        const Rational& aj = profile.actions[j].value;
        if (ai == aj) continue;
        Rational edge = (ai + aj) / Rational(2) - mean;
        if (ai > aj) {
          if (edge > out.lower || (edge == out.lower && !out.lower_closed)) {
            if (edge.sign() > 0) {
              out.lower = edge;
              out.lower_closed = true;
            }
          }
        } else if (!out.upper || edge < *out.upper) {
          out.upper = edge;
          out.upper_closed = true;
        }
      }
    }
  }
  if (out.upper && (*out.upper < out.lower || (*out.upper == out.lower && !out.lower_closed))) {
    return BiasInterval::none();
  }
  return out;
}

Rational lower_bound(const ModelSpace& space, const RuleSelector& rule) {
  const int C = space.class_count();
  if (C < 2) throw DegenerateCaseError("a single bliss class has no fully informative threshold");
  Rational gap = space.bliss_class(1).mean - space.bliss_class(0).mean;
  for (int c = 1; c + 1 < C; ++c) {
    gap = min(gap, space.bliss_class(c + 1).mean - space.bliss_class(c).mean);
  }
  Rational half = gap / Rational(2);
  BiasInterval finest = feasible_bias_interval(space, rule, Partition::finest(C));
  if (finest.empty || !finest.upper || *finest.upper != half || finest.lower.sign() != 0) {
    throw InvariantError("finest partition interval " + finest.to_string() +
                         " disagrees with half the minimum gap " + half.to_string());
  }
  return half;
}

BoundsReport upper_bound(const ModelSpace& space, const RuleSelector& rule,
                         const EngineOptions& engine) {
  const int C = space.class_count();
  if (C > engine.class_cap || C > 64) {
    throw ResourceError(std::to_string(C) + " bliss classes exceed the cap of " +
                        std::to_string(engine.class_cap));
  }
  BoundsReport report;
  report.b_lower = lower_bound(space, rule);

  ActionTable actions(space, rule);
  ConstraintTable table(space, actions, engine.workers);
  IntervalSearch search(table);
  const int workers = std::max(1, std::min(engine.workers, C));
  std::vector<std::vector<RankInterval>> found(static_cast<std::size_t>(C));
  auto work = [&](int w) {
    for (int e0 = w; e0 < C; e0 += workers) {
      auto& f = found[static_cast<std::size_t>(e0)];
      search.run(e0, f);
      std::sort(f.begin(), f.end());
      f.erase(std::unique(f.begin(), f.end()), f.end());
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<RankInterval> ranks;
  for (auto& f : found) ranks.insert(ranks.end(), f.begin(), f.end());
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());

  for (const RankInterval& r : ranks) {
    BiasInterval iv;
    const Rational& lo = table.value(r.lo);
    iv.lower = lo.sign() > 0 ? lo : Rational(0);
    iv.lower_closed = lo.sign() > 0;
    iv.upper = table.value(r.hi);
    iv.upper_closed = true;
    if (report.informative_set.empty() || !touches(report.informative_set.back(), iv)) {
      report.informative_set.push_back(std::move(iv));
    } else if (*iv.upper > *report.informative_set.back().upper) {
      report.informative_set.back().upper = iv.upper;
    }
  }
  if (!report.informative_set.empty()) {
    for (const auto& iv : report.informative_set) report.b_upper = max(report.b_upper, *iv.upper);
    const BiasInterval& first = report.informative_set.front();
    report.is_interval = report.informative_set.size() == 1 && first.lower.is_zero() &&
                         !first.lower_closed;
  }
  report.large_conflict = true;
  for (int c = 0; c + 1 < C; ++c) {
    if (compute_V(space, rule, c, report.b_upper + Rational(1)).sign() <= 0) {
      report.large_conflict = false;
    }
  }
  return report;
}

Rational compute_V(const ModelSpace& space, const RuleSelector& rule, int true_class,
                   const Rational& bias) {
  const int C = space.class_count();
  if (true_class < 0 || true_class >= C) throw ContractError("class index out of range");
  if (true_class == C - 1) throw DegenerateCaseError("no classes above the topmost class");
  const Action above = best_response(space, rule, MinimalFeasibleSet{{true_class + 1, C - 1}});
  const Action below = best_response(space, rule, MinimalFeasibleSet{{0, true_class}});
  const PosteriorSummary& p = space.bliss_class(true_class).members.front().summary;
  return expected_sender_utility(p.mean, p.variance, above.value, bias) -
         expected_sender_utility(p.mean, p.variance, below.value, bias);
}

ClosedFormBounds closed_form_bounds(int K) {
  if (K < 3) throw HypothesisError("closed forms need K >= 3");
  const long k = K;
  return {Rational(k - 1, 6 * (k + 2)), Rational(1, 2 * (k + 1) * (k + 2))};
}

}  // namespace narrative_eq
