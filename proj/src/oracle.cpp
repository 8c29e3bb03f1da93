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


#include "narrative_eq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include <boost/math/quadrature/gauss.hpp>

#include "narrative_eq/errors.hpp"
#include "narrative_eq/kernels/grid.hpp"

namespace narrative_eq::oracle {
namespace {

struct Cells {
  std::vector<std::pair<int, int>> ranges;
};

std::vector<Cells> all_partitions(int C) {
  std::vector<Cells> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (C - 1)); ++mask) {
    Cells p;
    int start = 0;
    for (int c = 0; c < C - 1; ++c) {
      if (mask & (std::uint64_t{1} << c)) {
        p.ranges.emplace_back(start, c);
        start = c + 1;
      }
    }
    p.ranges.emplace_back(start, C - 1);
    out.push_back(std::move(p));
  }
  return out;
}

Rational model_weight(const RuleSelector& rule, const Model& m) {
  for (const WeightEntry& e : rule.weights) {
    if (e.model == m) return e.weight;
  }
  return rule.default_weight;
}

// Every crossing of every pair of member parabolas, plus every vertex.
Rational meu_by_crossings(const std::vector<PosteriorSummary>& ps) {
  std::vector<Rational> points;
  for (const auto& p : ps) points.push_back(p.mean);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (ps[i].mean == ps[j].mean) continue;
      // v_i + (m_i - a)^2 = v_j + (m_j - a)^2, solved for a.
      Rational num = ps[j].variance - ps[i].variance + ps[j].mean * ps[j].mean -
                     ps[i].mean * ps[i].mean;
      points.push_back(num / (Rational(2) * (ps[j].mean - ps[i].mean)));
    }
  }
  std::optional<Rational> best_a, best_v;
  for (const Rational& a : points) {
    std::optional<Rational> worst;
    for (const auto& p : ps) {
      Rational u = expected_sender_utility(p.mean, p.variance, a, Rational(0));
      if (!worst || u < *worst) worst = u;
    }
    if (!best_v || *worst > *best_v || (*worst == *best_v && a < *best_a)) {
      best_v = worst;
      best_a = a;
    }
  }
  return *best_a;
}

class BruteGame {
 public:
  BruteGame(const ModelSpace& space, const RuleSelector& rule)
      : space_(space), rule_(rule), classes_(classes(space)) {
    if (rule.kind == RuleKind::kSmooth) throw ContractError("the oracle does not cover smooth rules");
    if (static_cast<int>(classes_.size()) > kOracleClassCap) {
      throw ResourceError("oracle is limited to " + std::to_string(kOracleClassCap) + " classes");
    }
  }

  int class_count() const { return static_cast<int>(classes_.size()); }
  const std::vector<OracleClass>& cls() const { return classes_; }

  const Rational& action(int first, int last) {
    auto key = std::make_pair(first, last);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Model> models;
    for (int c = first; c <= last; ++c) {
      models.insert(models.end(), classes_[c].models.begin(), classes_[c].models.end());
    }
    Rational a;
    const History& h = space_.history();
    switch (rule_.kind) {
      case RuleKind::kMleu: {
        Model best = models.front();
        for (const Model& m : models) {
          if (space_.prefers(m, best)) best = m;
        }
        a = posterior_summary(best, h).mean;
        break;
      }
      case RuleKind::kMeu: {
        std::vector<PosteriorSummary> ps;
        for (const Model& m : models) ps.push_back(posterior_summary(m, h));
        a = meu_by_crossings(ps);
        break;
      }
      case RuleKind::kBayesian: {
        Rational total, acc;
        for (const Model& m : models) {
          Rational w = model_weight(rule_, m);
          total += w;
          acc += w * posterior_summary(m, h).mean;
        }
        a = acc / total;
        break;
      }
      case RuleKind::kSmooth: break;
    }
    return memo_.emplace(key, a).first->second;
  }

  std::vector<Rational> actions(const Cells& p) {
    std::vector<Rational> out;
    for (auto [s, e] : p.ranges) out.push_back(action(s, e));
    return out;
  }

  // Every model weakly prefers its own cell's action to every other action.
  bool incentive_compatible(const Cells& p, const std::vector<Rational>& acts, const Rational& b) {
    const History& h = space_.history();
    for (std::size_t i = 0; i < p.ranges.size(); ++i) {
      for (int c = p.ranges[i].first; c <= p.ranges[i].second; ++c) {
        for (const Model& m : classes_[c].models) {
          PosteriorSummary s = posterior_summary(m, h);
          Rational own = expected_sender_utility(s.mean, s.variance, acts[i], b);
          for (std::size_t j = 0; j < acts.size(); ++j) {
            if (expected_sender_utility(s.mean, s.variance, acts[j], b) > own) return false;
          }
        }
      }
    }
    return true;
  }

  std::vector<Rational> breakpoints(const Cells& p, const std::vector<Rational>& acts) {
    std::vector<Rational> out;
    const History& h = space_.history();
    for (std::size_t i = 0; i < p.ranges.size(); ++i) {
      for (int c = p.ranges[i].first; c <= p.ranges[i].second; ++c) {
        for (const Model& m : classes_[c].models) {
          Rational mean = posterior_summary(m, h).mean;
          for (std::size_t j = 0; j < acts.size(); ++j) {
            if (acts[i] == acts[j]) continue;
            Rational x = (acts[i] + acts[j]) / Rational(2) - mean;
            if (x.sign() > 0) out.push_back(std::move(x));
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  const ModelSpace& space_;
  const RuleSelector& rule_;
  std::vector<OracleClass> classes_;
  std::map<std::pair<int, int>, Rational> memo_;
};

// Feasible set of one partition, read off from test points.
std::vector<BiasInterval> feasible_set(BruteGame& game, const Cells& p) {
  auto acts = game.actions(p);
  auto bps = game.breakpoints(p, acts);
  struct Probe {
    Rational b;
    bool at_breakpoint;
    int gap;  // index of the breakpoint below an interior probe, -1 for (0, first)
  };
  std::vector<Probe> probes;
  if (bps.empty()) {
    probes.push_back({Rational(1), false, -1});
  } else {
    probes.push_back({bps.front() / Rational(2), false, -1});
    for (std::size_t i = 0; i < bps.size(); ++i) {
      probes.push_back({bps[i], true, static_cast<int>(i)});
      Rational next = i + 1 < bps.size() ? (bps[i] + bps[i + 1]) / Rational(2) : bps[i] + Rational(1);
      probes.push_back({next, false, static_cast<int>(i)});
    }
  }
  std::vector<BiasInterval> out;
  bool open = false;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    bool ok = game.incentive_compatible(p, acts, probes[k].b);
    const Probe& pr = probes[k];
    if (ok && !open) {
      BiasInterval iv;
      if (pr.at_breakpoint) {
        iv.lower = pr.b;
        iv.lower_closed = true;
      } else {
        iv.lower = pr.gap < 0 ? Rational(0) : bps[static_cast<std::size_t>(pr.gap)];
        iv.lower_closed = false;
      }
      out.push_back(std::move(iv));
      open = true;
    } else if (!ok && open) {
      // Close at the previous probe.
      const Probe& prev = probes[k - 1];
      BiasInterval& iv = out.back();
      if (prev.at_breakpoint) {
        iv.upper = prev.b;
        iv.upper_closed = true;
      } else {
        iv.upper = bps[static_cast<std::size_t>(prev.gap + 1)];
        iv.upper_closed = false;
      }
      open = false;
    }
  }
  return out;  // an interval still open at the end is unbounded
}

}  // namespace

std::vector<OracleClass> classes(const ModelSpace& space) {
  const int K = space.K();
  if (K > 16) throw ResourceError("oracle model listing is limited to K <= 16");
  std::vector<std::pair<Rational, Model>> all;
  for (std::uint32_t mask = 0; mask < (1u << K); ++mask) {
    Model m{mask};
    if (!space.contains(m)) continue;
    all.emplace_back(posterior_summary(m, space.history()).mean, m);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<OracleClass> out;
  for (auto& [mean, m] : all) {
    if (out.empty() || out.back().mean != mean) out.push_back({mean, {}});
    out.back().models.push_back(m);
  }
  return out;
}

std::vector<Partition> brute_force_equilibria(const Scenario& scenario) {
  BruteGame game(scenario.space, scenario.rule);
  std::vector<Partition> out;
  for (const Cells& p : all_partitions(game.class_count())) {
    if (!game.incentive_compatible(p, game.actions(p), scenario.bias)) continue;
    Partition part;
    for (auto [s, e] : p.ranges) part.cells.push_back({s, e});
    out.push_back(std::move(part));
  }
  return out;
}

BoundsReport brute_force_bounds(const ModelSpace& space, const RuleSelector& rule) {
  BruteGame game(space, rule);
  const int C = game.class_count();
  if (C < 2) throw DegenerateCaseError("a single bliss class has no thresholds");
  BoundsReport report;
  std::vector<BiasInterval> pieces;
  const auto partitions = all_partitions(C);
  for (const Cells& p : partitions) {
    auto set = feasible_set(game, p);
    if (static_cast<int>(p.ranges.size()) == C) {
      if (set.size() != 1 || !set.front().upper || !set.front().lower.is_zero()) {
        throw InvariantError("finest partition is not feasible on an initial segment");
      }
      report.b_lower = *set.front().upper;
    }
    if (p.ranges.size() > 1) pieces.insert(pieces.end(), set.begin(), set.end());
  }
  std::sort(pieces.begin(), pieces.end(), [](const BiasInterval& a, const BiasInterval& b) {
    if (a.lower != b.lower) return a.lower < b.lower;
    return a.lower_closed && !b.lower_closed;
  });
  for (BiasInterval& iv : pieces) {
    if (!iv.upper) throw InvariantError("informative partition feasible for arbitrarily large bias");
    if (!report.informative_set.empty()) {
      BiasInterval& last = report.informative_set.back();
      bool joins = iv.lower < *last.upper ||
                   (iv.lower == *last.upper && (last.upper_closed || iv.lower_closed));
      if (joins) {
        if (*iv.upper > *last.upper || (*iv.upper == *last.upper && iv.upper_closed)) {
          last.upper = iv.upper;
          last.upper_closed = iv.upper_closed;
        }
        continue;
      }
    }
    report.informative_set.push_back(iv);
  }
  for (const auto& iv : report.informative_set) report.b_upper = max(report.b_upper, *iv.upper);
  report.is_interval = report.informative_set.size() == 1 &&
                       report.informative_set.front().lower.is_zero() &&
                       !report.informative_set.front().lower_closed;
  return report;
}

double numeric_maximizer(std::span<const WeightedMoment> members, RuleKind kind, double alpha,
                         std::size_t grid_size) {
  if (grid_size < 10000) throw ContractError("grid must have at least 10^4 points");
  if (members.empty()) throw ContractError("empty feasible set");
  std::vector<double> mean, var, w;
  for (const auto& m : members) {
    mean.push_back(m.mean.to_double());
    var.push_back(m.variance.to_double());
    w.push_back(m.weight.to_double());
  }
  const std::size_t n = mean.size();
  const double lo = *std::min_element(mean.begin(), mean.end());
  const double hi = *std::max_element(mean.begin(), mean.end());
  if (lo == hi) return lo;
  kernels::Grid grid{lo, (hi - lo) / static_cast<double>(grid_size - 1), grid_size};

  // Sign of the right derivative of the rule objective at a.
  auto slope = [&](double a) -> double {
    switch (kind) {
      case RuleKind::kMeu: {
        std::size_t act = 0;
        double worst = INFINITY;
        for (std::size_t i = 0; i < n; ++i) {
          double d = mean[i] - a;
          double u = -(var[i] + d * d);
          if (u < worst || (u == worst && mean[i] < mean[act])) {
            worst = u;
            act = i;
          }
        }
        return mean[act] - a;
      }
      case RuleKind::kSmooth: {
        double top = -INFINITY;
        for (std::size_t i = 0; i < n; ++i) {
          double d = mean[i] - a;
          top = std::max(top, var[i] + d * d);
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double d = mean[i] - a;
          s += w[i] * std::exp(alpha * (var[i] + d * d - top)) * d;
        }
        return s;
      }
      default: {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w[i] * (mean[i] - a);
        return s;
      }
    }
  };

  std::size_t j = 0;
  if (kind == RuleKind::kMeu) {
    j = kernels::envelope_argmax(mean.data(), var.data(), n, grid).index;
  } else if (kind == RuleKind::kSmooth) {
    double best = INFINITY;
    for (std::size_t k = 0; k < grid.count; ++k) {
      double a = grid.at(k), top = -INFINITY, s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d = mean[i] - a;
        top = std::max(top, var[i] + d * d);
      }
      for (std::size_t i = 0; i < n; ++i) {
        double d = mean[i] - a;
        s += w[i] * std::exp(alpha * (var[i] + d * d - top));
      }
      double g = top + std::log(s) / alpha;
      if (g < best) {
        best = g;
        j = k;
      }
    }
  } else {
    j = kernels::weighted_argmax(mean.data(), var.data(), w.data(), n, grid).index;
  }
  double left = grid.at(j == 0 ? 0 : j - 1);
  double right = grid.at(std::min(j + 1, grid.count - 1));
  for (int it = 0; it < 200 && right - left > 0; ++it) {
    double mid = 0.5 * (left + right);
    if (mid <= left || mid >= right) break;
    if (slope(mid) > 0) {
      left = mid;
    } else {
      right = mid;
    }
  }
  return 0.5 * (left + right);
}

double numeric_action_oracle(const ModelSpace& space, MinimalFeasibleSet set,
                             const RuleSelector& rule, std::size_t grid_size) {
  std::vector<WeightedMoment> members;
  RuleKind kind = rule.kind;
  if (rule.kind == RuleKind::kMleu) {
    PosteriorSummary s = posterior_summary(space.most_likely(set.classes), space.history());
    members.push_back({s.mean, s.variance, Rational(1)});
    kind = RuleKind::kBayesian;
  } else {
    members = weighted_members(space, set, rule);
  }
  return numeric_maximizer(members, kind, rule.smooth_alpha, grid_size);
}

QuadratureSummary quadrature_summary(const Model& m, const History& h) {
  validate(m, h.K());
  const int k = m.size();
  int s = 0;
  for (int i : m.indices()) s += h.bit(i - 1);
  using Rule = boost::math::quadrature::gauss<double, 30>;
  auto moment = [&](int p) {
    return Rule::integrate(
        [&](double t) { return std::pow(t, s + p) * std::pow(1.0 - t, k - s); }, 0.0, 1.0);
  };
  const double z = moment(0);
  QuadratureSummary out;
  out.mean = moment(1) / z;
  out.variance = moment(2) / z - out.mean * out.mean;
  out.likelihood = std::ldexp(z, -(h.K() - k));
  return out;
}

}  // namespace narrative_eq::oracle
