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


// narrative-eq: command-line front end.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "narrative_eq/bounds.hpp"
#include "narrative_eq/equilibrium.hpp"
#include "narrative_eq/errors.hpp"
#include "narrative_eq/io.hpp"
#include "narrative_eq/naive.hpp"
#include "narrative_eq/oracle.hpp"

namespace ne = narrative_eq;
using nlohmann::json;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ne::InputError("cannot write " + out_path);
  out << text;
}

int run_solve(const std::string& file, bool all, bool most, const std::string& out) {
  (void)all;
  ne::Scenario s = ne::io::load_scenario(file);
  const int n = ne::max_steps(s);
  auto eqs = most ? ne::most_informative(s) : ne::enumerate_equilibria(s);
  json j = ne::io::solve_json(s, eqs, n);
  j["selection"] = most ? "most_informative" : "all";
  emit(j.dump(2) + "\n", out);
  return 0;
}

int run_bounds(int K, std::optional<int> hsigma, const std::string& rule_name,
               const std::string& tiebreak, bool exclude_empty, bool lower_only,
               const std::string& svg, int workers, const std::string& out) {
  if (K < 1) throw ne::InputError("K must be at least 1");
  ne::SpaceOptions options;
  options.include_empty_model = !exclude_empty;
  options.tiebreak = ne::io::parse_tiebreak(json(tiebreak), K);
  const ne::RuleSelector rule = ne::io::parse_rule(json(rule_name), K);
  ne::EngineOptions engine;
  engine.workers = workers;
  std::vector<ne::io::BoundsRow> rows;
  int first = hsigma ? *hsigma : 0;
  int last = hsigma ? *hsigma : K;
  if (first < 0 || last > K) throw ne::InputError("h_sigma must lie in 0..K");
  for (int hs = first; hs <= last; ++hs) {
    ne::ModelSpace space(ne::History::canonical(K, hs), options);
    ne::io::BoundsRow row{K, hs, ne::lower_bound(space, rule), std::nullopt};
    if (!lower_only) row.b_upper = ne::upper_bound(space, rule, engine).b_upper;
    rows.push_back(std::move(row));
  }
  emit(ne::io::bounds_csv(rows), out);
  if (!svg.empty()) {
    std::ofstream f(svg);
    if (!f) throw ne::InputError("cannot write " + svg);
    f << ne::io::bounds_svg(rows);
  }
  return 0;
}

int run_reduce(const std::string& file, const std::string& from, const std::string& out) {
  ne::Scenario s = ne::io::load_scenario(file);
  ne::Partition p = ne::io::parse_partition_spec(from, s.space);
  ne::PartitionProfile profile = ne::make_profile(s.space, s.rule, p);
  ne::EquilibriumReport check = ne::check_equilibrium(profile, s);
  if (!check.ic_ok) {
    std::cerr << "error: input profile is not an equilibrium\n";
    for (const auto& v : check.violations) std::cerr << "  " << ne::describe(v, s.space) << "\n";
    return 4;
  }
  json j = ne::io::trace_json(ne::reduce_step(profile, s), s.space);
  j["start"] = ne::io::profile_json(profile, s.space);
  emit(j.dump(2) + "\n", out);
  return 0;
}

int run_compare(const std::string& file, const std::string& from, const std::string& out) {
  ne::Scenario s = ne::io::load_scenario(file);
  ne::PartitionProfile profile;
  if (from.empty()) {
    profile = ne::most_informative(s).front().profile;
  } else {
    profile = ne::make_profile(s.space, s.rule, ne::io::parse_partition_spec(from, s.space));
  }
  ne::PersuasionReport r = ne::persuasion_sets(s, profile);
  json j = ne::io::persuasion_json(r, s.space);
  j["equilibrium"] = ne::io::profile_json(profile, s.space);
  j["scenario"] = ne::io::scenario_json(s);
  if (s.rule.kind != ne::RuleKind::kMleu) {
    std::cerr << "warning: inclusion of persuasion sets is only guaranteed under mleu\n";
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

int run_verify(const std::string& file, const std::string& out) {
  ne::Scenario s = ne::io::load_scenario(file);
  auto engine_cuts = ne::equilibrium_cuts(s);
  std::vector<ne::CutMask> oracle_cuts;
  for (const auto& p : ne::oracle::brute_force_equilibria(s)) oracle_cuts.push_back(p.cuts());
  std::sort(oracle_cuts.begin(), oracle_cuts.end(), ne::canonical_less);
  const bool eq_match = engine_cuts == oracle_cuts;

  ne::BoundsReport a = ne::upper_bound(s.space, s.rule, s.engine);
  ne::BoundsReport b = ne::oracle::brute_force_bounds(s.space, s.rule);
  const bool bounds_match = a.b_lower == b.b_lower && a.b_upper == b.b_upper &&
                            a.informative_set == b.informative_set && a.is_interval == b.is_interval;
  json j = {{"equilibria", engine_cuts.size()},
            {"oracle_equilibria", oracle_cuts.size()},
            {"equilibria_match", eq_match},
            {"b_lower", a.b_lower.to_string()},
            {"b_upper", a.b_upper.to_string()},
            {"oracle_b_lower", b.b_lower.to_string()},
            {"oracle_b_upper", b.b_upper.to_string()},
            {"bounds_match", bounds_match}};
  emit(j.dump(2) + "\n", out);
  return eq_match && bounds_match ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria, bounds and naive-receiver comparisons for cheap talk about models"};
  app.require_subcommand(1);
  std::string out;

  std::string file, from;
  bool all = false, most = false;
  auto* solve = app.add_subcommand("solve", "Enumerate equilibria of a scenario");
  solve->add_option("scenario", file, "Scenario JSON file")->required();
  auto* all_flag = solve->add_flag("--all", all, "All equilibria (default)");
  solve->add_flag("--most-informative", most, "Only most informative equilibria")->excludes(all_flag);
  solve->add_option("--out", out, "Write to this path instead of stdout");

  int K = 0, workers = 1;
  std::optional<int> hsigma;
  bool all_hsigma = false, exclude_empty = false, lower_only = false;
  std::string rule = "mleu", tiebreak = "default", svg;
  auto* bounds = app.add_subcommand("bounds", "Informativeness thresholds as CSV");
  bounds->add_option("--K", K, "Number of observations")->required();
  auto* hs = bounds->add_option("--hsigma", hsigma, "A single success count");
  bounds->add_flag("--all-hsigma", all_hsigma, "Every success count 0..K (default)")->excludes(hs);
  bounds->add_option("--rule", rule, "mleu, meu, bayesian or smooth");
  bounds->add_option("--tiebreak", tiebreak, "default, more_relevant or fewer_relevant");
  bounds->add_flag("--exclude-empty", exclude_empty, "Drop the empty model from the space");
  bounds->add_flag("--lower-only", lower_only, "Skip the partition search for the upper bound");
  bounds->add_option("--svg", svg, "Also plot the lower bound curve");
  bounds->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  bounds->add_option("--out", out, "Write to this path instead of stdout");

  auto* reduce = app.add_subcommand("reduce", "Trace the step-reduction algorithm");
  reduce->add_option("scenario", file, "Scenario JSON file")->required();
  reduce->add_option("--from", from, "Cut positions \"0,3\" or means \"1/3|1/2,3/5|3/4\"")->required();
  reduce->add_option("--out", out, "Write to this path instead of stdout");

  auto* compare = app.add_subcommand("compare-naive", "Persuasion sets against a naive receiver");
  compare->add_option("scenario", file, "Scenario JSON file")->required();
  compare->add_option("--from", from, "Equilibrium to compare; default the first most informative");
  compare->add_option("--out", out, "Write to this path instead of stdout");

  auto* verify = app.add_subcommand("verify", "Cross-check the engine against the brute-force oracle");
  verify->add_option("scenario", file, "Scenario JSON file")->required();
  verify->add_option("--out", out, "Write to this path instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return run_solve(file, all, most, out);
    if (*bounds) {
      return run_bounds(K, hsigma, rule, tiebreak, exclude_empty, lower_only, svg, workers, out);
    }
    if (*reduce) return run_reduce(file, from, out);
    if (*compare) return run_compare(file, from, out);
    if (*verify) return run_verify(file, out);
  } catch (const ne::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
