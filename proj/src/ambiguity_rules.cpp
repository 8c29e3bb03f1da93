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


#include "narrative_eq/ambiguity_rules.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "narrative_eq/errors.hpp"

namespace narrative_eq {
namespace {

Rational envelope(std::span<const Moment> members, const Rational& a) {
  std::optional<Rational> worst;
  for (const Moment& m : members) {
    Rational d = m.mean - a;
    Rational u = -(m.variance + d * d);
    if (!worst || u < *worst) worst = std::move(u);
  }
  return *worst;
}

// Smooth objective up to a monotone transform: log(sum w exp(alpha L)) / alpha
// with the constant log(W) dropped.  Minimized.
double smooth_loss(const std::vector<double>& mean, const std::vector<double>& var,
                   const std::vector<double>& w, double total, double alpha, double a) {
  double top = -INFINITY;
  std::vector<double> loss(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    double d = mean[i] - a;
    loss[i] = var[i] + d * d;
    top = std::max(top, loss[i]);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) s += w[i] * std::expm1(alpha * (loss[i] - top));
  double g = top + std::log1p(s / total) / alpha;
  if (!std::isfinite(g)) throw NumericError("smooth objective is not finite");
  return g;
}

}  // namespace

RuleSelector RuleSelector::meu() {
  RuleSelector r;
  r.kind = RuleKind::kMeu;
  return r;
}

RuleSelector RuleSelector::bayesian() {
  RuleSelector r;
  r.kind = RuleKind::kBayesian;
  return r;
}

RuleSelector RuleSelector::smooth(double alpha, double tolerance) {
  RuleSelector r;
  r.kind = RuleKind::kSmooth;
  r.smooth_alpha = alpha;
  r.tolerance = tolerance;
  return r;
}

std::string RuleSelector::name() const {
  switch (kind) {
    case RuleKind::kMleu: return "mleu";
    case RuleKind::kMeu: return "meu";
    case RuleKind::kBayesian: return "bayesian";
    case RuleKind::kSmooth: return "smooth";
  }
  return "?";
}

void RuleSelector::validate(const ModelSpace& space) const {
  if (!(std::isfinite(smooth_alpha) && smooth_alpha > 0)) {
    throw InputError("smooth alpha must be positive and finite");
  }
  if (!(std::isfinite(tolerance) && tolerance > 0)) throw InputError("tolerance must be positive");
  if (default_weight.sign() <= 0) throw InputError("default weight must be positive");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].weight.sign() <= 0) throw InputError("rule weights must be positive");
    if (!space.contains(weights[i].model)) {
      throw InputError("weighted model " + weights[i].model.to_string() + " is not in the space");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (weights[j].model == weights[i].model) {
        throw InputError("model " + weights[i].model.to_string() + " weighted twice");
      }
    }
  }
}

Rational meu_maximizer(std::span<const Moment> input) {
  if (input.empty()) throw ContractError("empty feasible set");
  std::vector<Moment> members(input.begin(), input.end());
  std::sort(members.begin(), members.end(), [](const Moment& a, const Moment& b) {
    return a.mean != b.mean ? a.mean < b.mean : a.variance < b.variance;
  });
  members.erase(std::unique(members.begin(), members.end(),
                            [](const Moment& a, const Moment& b) {
                              return a.mean == b.mean && a.variance == b.variance;
                            }),
                members.end());
  const Rational lo = members.front().mean;
  const Rational hi = members.back().mean;
  if (lo == hi) return lo;

  std::vector<Rational> candidates;
  for (const Moment& m : members) candidates.push_back(m.mean);
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const Moment& p = members[i];
      const Moment& q = members[j];
      if (p.mean == q.mean) continue;
      Rational x = (p.mean + q.mean) / Rational(2) +
                   (q.variance - p.variance) / (Rational(2) * (q.mean - p.mean));
      if (lo <= x && x <= hi) candidates.push_back(std::move(x));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const Rational* best = nullptr;
  Rational best_value;
  for (const Rational& x : candidates) {
    Rational v = envelope(members, x);
    if (best == nullptr || v > best_value) {
      best = &x;
      best_value = std::move(v);
    }
  }
  return *best;
}

Rational weighted_mean(std::span<const WeightedMoment> members) {
  if (members.empty()) throw ContractError("empty feasible set");
  Rational total, acc;
  for (const WeightedMoment& m : members) {
    if (m.weight.sign() < 0) throw InputError("negative weight");
    total += m.weight;
    acc += m.weight * m.mean;
  }
  if (total.is_zero()) throw InputError("weights sum to zero on the feasible set");
  return acc / total;
}

double smooth_maximizer(std::span<const WeightedMoment> members, double alpha, double tolerance) {
  if (members.empty()) throw ContractError("empty feasible set");
  if (!(alpha > 0) || !(tolerance > 0)) throw InputError("smooth parameters must be positive");
  std::vector<double> mean, var, w;
  double total = 0.0;
  for (const WeightedMoment& m : members) {
    if (m.weight.sign() <= 0) throw InputError("smooth weights must be positive");
    mean.push_back(m.mean.to_double());
    var.push_back(m.variance.to_double());
    w.push_back(m.weight.to_double());
    total += w.back();
    if (!std::isfinite(mean.back()) || !std::isfinite(var.back()) || !std::isfinite(w.back())) {
      throw NumericError("smooth inputs are not finite");
    }
  }
  double lo = *std::min_element(mean.begin(), mean.end());
  double hi = *std::max_element(mean.begin(), mean.end());
  if (lo == hi) return lo;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = smooth_loss(mean, var, w, total, alpha, x1);
  double f2 = smooth_loss(mean, var, w, total, alpha, x2);
  for (int it = 0; it < 500 && hi - lo > tolerance; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = smooth_loss(mean, var, w, total, alpha, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = smooth_loss(mean, var, w, total, alpha, x2);
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<WeightedMoment> weighted_members(const ModelSpace& space, MinimalFeasibleSet set,
                                             const RuleSelector& rule) {
  std::vector<WeightedMoment> out;
  for (int c = set.classes.first; c <= set.classes.last; ++c) {
    for (const ModelGroup& g : space.bliss_class(c).members) {
      Rational w = rule.default_weight * Rational(mpz_class(std::to_string(g.count)));
      for (const WeightEntry& e : rule.weights) {
        if (!space.contains(e.model)) continue;
        const ModelGroup& eg = space.group_of(e.model);
        if (eg.size == g.size && eg.successes == g.successes) w += e.weight - rule.default_weight;
      }
      out.push_back({g.summary.mean, g.summary.variance, std::move(w)});
    }
  }
  return out;
}

Rational mleu_action(const ModelSpace& space, MinimalFeasibleSet set) {
  return space.group_of(space.most_likely(set.classes)).summary.mean;
}

Rational meu_action(const ModelSpace& space, MinimalFeasibleSet set) {
  std::vector<Moment> members;
  for (int c = set.classes.first; c <= set.classes.last; ++c) {
    for (const ModelGroup& g : space.bliss_class(c).members) {
      members.push_back({g.summary.mean, g.summary.variance});
    }
  }
  return meu_maximizer(members);
}

Rational bayesian_action(const ModelSpace& space, MinimalFeasibleSet set, const RuleSelector& rule) {
  return weighted_mean(weighted_members(space, set, rule));
}

double smooth_action(const ModelSpace& space, MinimalFeasibleSet set, const RuleSelector& rule) {
  if (set.classes.size() == 1) return space.bliss_class(set.classes.first).mean.to_double();
  return smooth_maximizer(weighted_members(space, set, rule), rule.smooth_alpha, rule.tolerance);
}

Action best_response(const ModelSpace& space, const RuleSelector& rule, MinimalFeasibleSet set) {
  switch (rule.kind) {
    case RuleKind::kMleu: return {mleu_action(space, set), true};
    case RuleKind::kMeu: return {meu_action(space, set), true};
    case RuleKind::kBayesian: return {bayesian_action(space, set, rule), true};
    case RuleKind::kSmooth: {
      if (set.classes.size() == 1) return {space.bliss_class(set.classes.first).mean, false};
      return {Rational::from_double(smooth_action(space, set, rule)), false};
    }
  }
  throw InvariantError("unknown rule");
}

}  // namespace narrative_eq
