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


#include "narrative_eq/equilibrium.hpp"

#include <algorithm>
#include <bit>
#include <thread>

#include "narrative_eq/errors.hpp"

namespace narrative_eq {
namespace {

void check_cap(const Scenario& scenario) {
  const int C = scenario.space.class_count();
  if (C > scenario.engine.class_cap || C > 64) {
    throw ResourceError(std::to_string(C) + " bliss classes exceed the cap of " +
                        std::to_string(scenario.engine.class_cap) +
                        "; use the bounds module or raise NARRATIVE_EQ_CAP");
  }
}

class CutSearch {
 public:
  CutSearch(const ConstraintTable& table, const Rational& bias) : C_(table.class_count()) {
    ok_.assign(static_cast<std::size_t>(C_) * C_ * C_, 0);
    for (int s = 0; s < C_; ++s) {
      for (int c = s; c + 1 < C_; ++c) {
        for (int e = c + 1; e < C_; ++e) {
          const auto& en = table.at(s, c, e);
          ok_[index(s, c, e)] =
              en.ordered && table.value(en.lo) <= bias && bias <= table.value(en.hi);
        }
      }
    }
  }

  // All equilibria whose first cell is [0..first_end].
  void run(int first_end, std::vector<CutMask>& out) const {
    if (first_end == C_ - 1) {
      out.push_back(0);
      return;
    }
    dfs(0, first_end + 1, CutMask{1} << first_end, out);
  }

 private:
  std::size_t index(int s, int c, int e) const {
    return (static_cast<std::size_t>(s) * C_ + c) * C_ + e;
  }

  // Last cell is [p..s-1]; choose the next cell [s..e].
  void dfs(int p, int s, CutMask cuts, std::vector<CutMask>& out) const {
    for (int e = s; e < C_; ++e) {
      if (!ok_[index(p, s - 1, e)]) continue;
      if (e == C_ - 1) {
        out.push_back(cuts);
      } else {
        dfs(s, e + 1, cuts | (CutMask{1} << e), out);
      }
    }
  }

  int C_;
  std::vector<char> ok_;
};

std::vector<EquilibriumReport> to_reports(const Scenario& scenario, const std::vector<CutMask>& cuts) {
  ActionTable table(scenario.space, scenario.rule);
  std::vector<EquilibriumReport> out;
  out.reserve(cuts.size());
  for (CutMask m : cuts) {
    EquilibriumReport r;
    r.profile = make_profile(scenario.space, table, Partition::from_cuts(m, scenario.space.class_count()));
    r.steps = r.profile.steps();
    r.ic_ok = true;
    out.push_back(std::move(r));
  }
  return out;
}

std::string violations_text(const std::vector<Violation>& vs, const ModelSpace& space) {
  std::string s;
  for (const Violation& v : vs) s += "\n  " + describe(v, space);
  return s;
}

}  // namespace

std::string describe(const Violation& v, const ModelSpace& space) {
  return "class " + space.bliss_class(v.class_index).mean.to_string() + " in cell " +
         std::to_string(v.current_cell) + " prefers the action of cell " +
         std::to_string(v.preferred_cell);
}

EquilibriumReport check_equilibrium(const PartitionProfile& profile, const Scenario& scenario) {
  const ModelSpace& space = scenario.space;
  profile.partition().validate(space.class_count());
  if (profile.actions.size() != profile.cells.size()) {
    throw ContractError("one action per cell is required");
  }
  if (scenario.rule.exact()) {
    ActionTable table(space, scenario.rule);
    for (std::size_t i = 0; i < profile.cells.size(); ++i) {
      const ClassRange& r = profile.cells[i];
      if (table.at(r.first, r.last).value != profile.actions[i].value) {
        throw ContractError("action of cell " + std::to_string(i) + " is not the best response");
      }
    }
  }
  EquilibriumReport report;
  report.profile = profile;
  report.steps = profile.steps();
  for (std::size_t i = 0; i < profile.cells.size(); ++i) {
    for (int c = profile.cells[i].first; c <= profile.cells[i].last; ++c) {
      const Rational target = space.bliss_class(c).mean + scenario.bias;
      Rational best = abs(target - profile.actions[i].value);
      int preferred = -1;
      for (std::size_t j = 0; j < profile.cells.size(); ++j) {
        Rational d = abs(target - profile.actions[j].value);
        if (d < best) {
          best = std::move(d);
          preferred = static_cast<int>(j);
        }
      }
      if (preferred >= 0) report.violations.push_back({c, static_cast<int>(i), preferred});
    }
  }
  report.ic_ok = report.violations.empty();
  return report;
}

std::vector<CutMask> equilibrium_cuts(const Scenario& scenario) {
  scenario.validate();
  check_cap(scenario);
  const int C = scenario.space.class_count();
  ActionTable actions(scenario.space, scenario.rule);
  ConstraintTable table(scenario.space, actions, scenario.engine.workers);
  CutSearch search(table, scenario.bias);

  const int workers = std::max(1, std::min(scenario.engine.workers, C));
  std::vector<std::vector<CutMask>> found(static_cast<std::size_t>(C));
  auto work = [&](int w) {
    for (int e0 = w; e0 < C; e0 += workers) search.run(e0, found[static_cast<std::size_t>(e0)]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<CutMask> all;
  for (auto& chunk : found) all.insert(all.end(), chunk.begin(), chunk.end());
  std::sort(all.begin(), all.end(), canonical_less);
  return all;
}

std::vector<EquilibriumReport> enumerate_equilibria(const Scenario& scenario) {
  return to_reports(scenario, equilibrium_cuts(scenario));
}

int max_steps(const Scenario& scenario) {
  auto cuts = equilibrium_cuts(scenario);
  std::vector<bool> seen(static_cast<std::size_t>(scenario.space.class_count()) + 1, false);
  int n = 1;
  for (CutMask m : cuts) {
    int steps = std::popcount(m) + 1;
    seen[static_cast<std::size_t>(steps)] = true;
    n = std::max(n, steps);
  }
  for (int k = 1; k <= n; ++k) {
    if (!seen[static_cast<std::size_t>(k)]) {
      throw InvariantError("no " + std::to_string(k) + "-step equilibrium below N=" + std::to_string(n));
    }
  }
  return n;
}

std::vector<EquilibriumReport> most_informative(const Scenario& scenario) {
  auto cuts = equilibrium_cuts(scenario);
  std::stable_sort(cuts.begin(), cuts.end(),
                   [](CutMask a, CutMask b) { return std::popcount(a) > std::popcount(b); });
  std::vector<CutMask> kept;
  for (CutMask m : cuts) {
    bool refined = std::any_of(kept.begin(), kept.end(),
                               [m](CutMask k) { return k != m && (k & m) == m; });
    if (!refined) kept.push_back(m);
  }
  std::sort(kept.begin(), kept.end(), canonical_less);
  return to_reports(scenario, kept);
}

ReduceResult reduce_step(const PartitionProfile& profile, const Scenario& scenario) {
  const ModelSpace& space = scenario.space;
  EquilibriumReport start = check_equilibrium(profile, scenario);
  if (!start.ic_ok) {
    throw ContractError("input profile is not an equilibrium:" +
                        violations_text(start.violations, space));
  }
  if (profile.steps() < 2) throw ContractError("reduction needs at least two cells");
  const int n = profile.steps() - 1;

  ActionTable table(space, scenario.rule);
  Partition cells = profile.partition();
  cells.cells[cells.cells.size() - 2].last = cells.cells.back().last;
  cells.cells.pop_back();

  ReduceResult out;
  out.trace.push_back({"merge", -1, make_profile(space, table, cells)});
  const int cap = space.class_count() * (n + 1) + 1;
  for (int iter = 0;; ++iter) {
    if (iter > cap) throw InvariantError("reduction did not terminate");
    EquilibriumReport r = check_equilibrium(out.trace.back().profile, scenario);
    if (r.ic_ok) break;
    const auto& actions = out.trace.back().profile.actions;
    int chosen = -1;
    for (const Violation& v : r.violations) {
      if (v.preferred_cell > v.current_cell) {
        throw InvariantError("unexpected upward deviation:" + violations_text(r.violations, space));
      }
    }
    for (int i = static_cast<int>(cells.cells.size()) - 1; i >= 1; --i) {
      const int c = cells.cells[static_cast<std::size_t>(i)].first;
      const Rational target = space.bliss_class(c).mean + scenario.bias;
      if (abs(target - actions[static_cast<std::size_t>(i) - 1].value) <
          abs(target - actions[static_cast<std::size_t>(i)].value)) {
        chosen = i;
        break;
      }
    }
    if (chosen < 0) {
      throw InvariantError("deviation not at a leftmost class:" + violations_text(r.violations, space));
    }
    auto& right = cells.cells[static_cast<std::size_t>(chosen)];
    auto& left = cells.cells[static_cast<std::size_t>(chosen) - 1];
    if (right.size() == 1) throw InvariantError("reduction would empty a cell");
    const int moved = right.first;
    ++left.last;
    ++right.first;
    out.trace.push_back({"move", moved, make_profile(space, table, cells)});
  }
  out.result = out.trace.back().profile;
  if (out.result.steps() != n) throw InvariantError("reduction changed the step count");
  return out;
}

}  // namespace narrative_eq
