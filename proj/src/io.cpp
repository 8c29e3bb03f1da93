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


#include "narrative_eq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "narrative_eq/errors.hpp"

namespace narrative_eq::io {
namespace {

const std::vector<std::string> kScenarioKeys = {
    "K", "history", "h_sigma", "bias", "rule", "tiebreak", "exclude_empty_model",
    "caps", "worker_count", "description"};

Rational parse_number(const json& j, const std::string& what) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_float()) return Rational::parse(j.dump());
  } catch (const InputError& e) {
    throw InputError(what + ": " + e.what());
  }
  throw InputError(what + " must be a rational string or a number");
}

int parse_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw InputError(what + " must be an integer");
  return j.get<int>();
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

json means_of(const ClassRange& r, const ModelSpace& space) {
  json cell = json::array();
  for (int c = r.first; c <= r.last; ++c) cell.push_back(space.bliss_class(c).mean.to_string());
  return cell;
}

}  // namespace

TiebreakPolicy parse_tiebreak(const json& j, int K) {
  TiebreakPolicy p;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "default" || s == "more_relevant") return p;
    if (s == "fewer_relevant") {
      p.kind = TiebreakKind::kFewerRelevant;
      return p;
    }
    throw InputError("unknown tiebreak '" + s + "'");
  }
  if (j.is_object() && j.contains("order") && j.size() == 1 && j["order"].is_array()) {
    p.kind = TiebreakKind::kExplicit;
    for (const json& m : j["order"]) {
      if (!m.is_string()) throw InputError("tiebreak order entries must be strings like \"{1,3}\"");
      Model model = Model::parse(m.get<std::string>(), K);
      for (const Model& seen : p.order) {
        if (seen == model) throw InputError("model listed twice in tiebreak order");
      }
      p.order.push_back(model);
    }
    return p;
  }
  throw InputError("tiebreak must be a policy name or {\"order\": [...]}");
}

RuleSelector parse_rule(const json& j, int K) {
  RuleSelector r;
  std::string name;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object() && j.contains("name") && j["name"].is_string()) {
    name = j["name"].get<std::string>();
  } else {
    throw InputError("rule must be a name or an object with a name");
  }
  if (name == "mleu") {
    r.kind = RuleKind::kMleu;
  } else if (name == "meu") {
    r.kind = RuleKind::kMeu;
  } else if (name == "bayesian") {
    r.kind = RuleKind::kBayesian;
  } else if (name == "smooth") {
    r.kind = RuleKind::kSmooth;
  } else {
    throw InputError("unknown rule '" + name + "'");
  }
  if (!j.is_object()) return r;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "name") continue;
    if (key == "weights") {
      if (!it->is_object()) throw InputError("rule weights must map models to numbers");
      for (auto w = it->begin(); w != it->end(); ++w) {
        r.weights.push_back({Model::parse(w.key(), K), parse_number(*w, "weight")});
      }
    } else if (key == "default_weight") {
      r.default_weight = parse_number(*it, "default_weight");
    } else if (key == "alpha") {
      if (!it->is_number()) throw InputError("alpha must be a number");
      r.smooth_alpha = it->get<double>();
    } else if (key == "tolerance") {
      if (!it->is_number()) throw InputError("tolerance must be a number");
      r.tolerance = it->get<double>();
    } else {
      throw InputError("unknown rule field '" + key + "'");
    }
  }
  return r;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw InputError("scenario must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(kScenarioKeys.begin(), kScenarioKeys.end(), it.key()) == kScenarioKeys.end()) {
      throw InputError("unknown scenario field '" + it.key() + "'");
    }
  }
  if (!j.contains("K")) throw InputError("scenario needs K");
  const int K = parse_int(j["K"], "K");
  if (K < 1) throw InputError("K must be at least 1");

  SpaceOptions options;
  int class_cap = default_class_cap();
  if (j.contains("caps")) {
    const json& caps = j["caps"];
    if (!caps.is_object()) throw InputError("caps must be an object");
    for (auto it = caps.begin(); it != caps.end(); ++it) {
      if (it.key() == "K") {
        options.max_K = parse_int(*it, "caps.K");
        if (options.max_K < 1 || options.max_K > kHardMaxK) {
          throw InputError("caps.K must lie in 1.." + std::to_string(kHardMaxK));
        }
      } else if (it.key() == "classes") {
        class_cap = parse_int(*it, "caps.classes");
        if (class_cap < 1 || class_cap > 63) throw InputError("caps.classes must lie in 1..63");
      } else {
        throw InputError("unknown cap '" + it.key() + "'");
      }
    }
  }
  if (K > options.max_K) {
    throw ResourceError("K=" + std::to_string(K) + " exceeds the cap of " + std::to_string(options.max_K));
  }

  std::optional<History> history;
  if (j.contains("history")) {
    if (!j["history"].is_string()) throw InputError("history must be a bit string");
    history = History::parse(j["history"].get<std::string>());
    if (history->K() != K) throw InputError("history length does not match K");
  }
  if (j.contains("h_sigma")) {
    const int s = parse_int(j["h_sigma"], "h_sigma");
    if (s < 0 || s > K) throw InputError("h_sigma must lie in 0..K");
    if (history && history->sigma() != s) throw InputError("h_sigma disagrees with history");
    if (!history) history = History::canonical(K, s);
  }
  if (!history) throw InputError("scenario needs history or h_sigma");

  if (!j.contains("bias")) throw InputError("scenario needs bias");
  Rational bias = parse_number(j["bias"], "bias");
  if (bias.sign() <= 0) throw InputError("bias must be positive");

  if (j.contains("tiebreak")) options.tiebreak = parse_tiebreak(j["tiebreak"], K);
  if (j.contains("exclude_empty_model")) {
    if (!j["exclude_empty_model"].is_boolean()) throw InputError("exclude_empty_model must be boolean");
    options.include_empty_model = !j["exclude_empty_model"].get<bool>();
  }
  RuleSelector rule = j.contains("rule") ? parse_rule(j["rule"], K) : RuleSelector{};

  Scenario s{ModelSpace(*history, options), rule, bias, {}};
  s.engine.class_cap = class_cap;
  if (j.contains("worker_count")) s.engine.workers = parse_int(j["worker_count"], "worker_count");
  s.validate();
  return s;
}

Scenario parse_scenario_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

std::string decimal(const Rational& x, int places) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
  mpz_class num = abs(x).numerator() * scale * 2 + abs(x).denominator();
  mpz_class den = abs(x).denominator() * 2;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  std::string digits = q.get_str();
  if (static_cast<int>(digits.size()) <= places) {
    digits.insert(0, static_cast<std::size_t>(places + 1) - digits.size(), '0');
  }
  std::string out = digits.substr(0, digits.size() - static_cast<std::size_t>(places));
  if (places > 0) out += "." + digits.substr(digits.size() - static_cast<std::size_t>(places));
  return (x.sign() < 0 && q != 0 ? "-" : "") + out;
}

std::string action_string(const Action& a) {
  if (a.exact) return a.value.to_string();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", a.value.to_double());
  return buf;
}

json profile_json(const PartitionProfile& p, const ModelSpace& space) {
  json cells = json::array(), actions = json::array();
  for (const ClassRange& r : p.cells) cells.push_back(means_of(r, space));
  bool exact = true;
  for (const Action& a : p.actions) {
    actions.push_back(action_string(a));
    exact = exact && a.exact;
  }
  return {{"steps", p.steps()},
          {"cells", cells},
          {"cuts", p.partition().cut_positions()},
          {"actions", actions},
          {"exact", exact}};
}

json report_json(const EquilibriumReport& r, const ModelSpace& space) {
  json j = profile_json(r.profile, space);
  j["ic_ok"] = r.ic_ok;
  json vs = json::array();
  for (const Violation& v : r.violations) {
    vs.push_back({{"class", space.bliss_class(v.class_index).mean.to_string()},
                  {"cell", v.current_cell},
                  {"preferred_cell", v.preferred_cell}});
  }
  j["violations"] = vs;
  return j;
}

json scenario_json(const Scenario& s) {
  json classes = json::array();
  for (const BlissClass& c : s.space.classes()) classes.push_back(c.mean.to_string());
  return {{"K", s.space.K()},
          {"history", s.space.history().to_string()},
          {"h_sigma", s.space.history().sigma()},
          {"bias", s.bias.to_string()},
          {"rule", s.rule.name()},
          {"tiebreak", s.space.options().tiebreak.name()},
          {"exclude_empty_model", !s.space.options().include_empty_model},
          {"classes", classes}};
}

json solve_json(const Scenario& s, const std::vector<EquilibriumReport>& equilibria, int max_steps) {
  json j = scenario_json(s);
  j["N"] = max_steps;
  j["count"] = equilibria.size();
  json list = json::array();
  for (const auto& r : equilibria) list.push_back(profile_json(r.profile, s.space));
  j["equilibria"] = list;
  return j;
}

json trace_json(const ReduceResult& r, const ModelSpace& space) {
  json steps = json::array();
  for (const TraceStep& t : r.trace) {
    json step = profile_json(t.profile, space);
    step["event"] = t.event;
    if (t.moved_class >= 0) step["moved_class"] = space.bliss_class(t.moved_class).mean.to_string();
    steps.push_back(step);
  }
  return {{"trace", steps}, {"result", profile_json(r.result, space)}};
}

json persuasion_json(const PersuasionReport& r, const ModelSpace& space) {
  auto models = [](const std::vector<Model>& ms) {
    json a = json::array();
    for (const Model& m : ms) a.push_back(m.to_string());
    return a;
  };
  auto classes = [&space](const std::vector<int>& cs) {
    json a = json::array();
    for (int c : cs) a.push_back(space.bliss_class(c).mean.to_string());
    return a;
  };
  json gains = json::array();
  for (const GroupGain& g : r.per_group_gain) {
    gains.push_back({{"class", space.bliss_class(g.class_index).mean.to_string()},
                     {"size", g.size},
                     {"successes", g.successes},
                     {"count", g.count},
                     {"representative", g.representative.to_string()},
                     {"equilibrium_gain", g.equilibrium_gain.to_string()},
                     {"naive_gain", g.naive_gain.to_string()},
                     {"naive_action", g.naive_action.to_string()}});
  }
  return {{"naive_set", models(r.naive_set)},
          {"equilibrium_set", models(r.equilibrium_set)},
          {"naive_classes", classes(r.naive_classes)},
          {"equilibrium_classes", classes(r.equilibrium_classes)},
          {"subset_ok", r.subset_ok},
          {"strict", r.strict},
          {"inclusion_asserted", r.prop_asserted},
          {"per_group_gain", gains}};
}

PartitionProfile profile_from_json(const json& j, const Scenario& s) {
  if (!j.is_object() || !j.contains("cells") || !j.contains("actions")) {
    throw InputError("profile needs cells and actions");
  }
  Partition part;
  int next = 0;
  for (const json& cell : j["cells"]) {
    ClassRange r{next, next - 1};
    for (const json& m : cell) {
      if (!m.is_string()) throw InputError("cell entries must be rational strings");
      if (next >= s.space.class_count() || s.space.bliss_class(next).mean != Rational::parse(m.get<std::string>())) {
        throw InputError("cell means do not follow the class order");
      }
      r.last = next++;
    }
    part.cells.push_back(r);
  }
  part.validate(s.space.class_count());
  PartitionProfile p = make_profile(s.space, s.rule, part);
  const json& actions = j["actions"];
  if (actions.size() != p.actions.size()) throw InputError("one action per cell is required");
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    if (action_string(p.actions[i]) != actions[i].get<std::string>()) {
      throw ContractError("stated action of cell " + std::to_string(i) + " is not the best response");
    }
  }
  return p;
}

Partition parse_partition_spec(std::string_view spec, const ModelSpace& space) {
  const int C = space.class_count();
  std::string text = strip(std::string(spec));
  if (text.find('|') != std::string::npos || text.find('/') != std::string::npos) {
    Partition p;
    int next = 0;
    for (const std::string& cell : split(text, '|')) {
      ClassRange r{next, next - 1};
      for (const std::string& item : split(cell, ',')) {
        Rational mean = Rational::parse(strip(item));
        if (next >= C || space.bliss_class(next).mean != mean) {
          throw InputError("partition spec lists " + mean.to_string() + " out of class order");
        }
        r.last = next++;
      }
      p.cells.push_back(r);
    }
    if (next != C) throw InputError("partition spec does not cover every class");
    return p;
  }
  CutMask cuts = 0;
  if (!text.empty()) {
    for (const std::string& item : split(text, ',')) {
      const std::string t = strip(item);
      if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
        throw InputError("cut positions must be non-negative integers");
      }
      int c = std::stoi(t);
      if (c >= C - 1) throw InputError("cut position " + t + " is beyond the last boundary");
      cuts |= CutMask{1} << c;
    }
  }
  return Partition::from_cuts(cuts, C);
}

std::string bounds_csv(const std::vector<BoundsRow>& rows) {
  std::ostringstream out;
  out << "K,h_sigma,b_lower_num,b_lower_den,b_upper_num,b_upper_den,b_lower_approx,b_upper_approx\n";
  for (const BoundsRow& r : rows) {
    out << r.K << ',' << r.h_sigma << ',' << r.b_lower.numerator().get_str() << ','
        << r.b_lower.denominator().get_str() << ',';
    if (r.b_upper) {
      out << r.b_upper->numerator().get_str() << ',' << r.b_upper->denominator().get_str();
    } else {
      out << ',';
    }
    out << ',' << decimal(r.b_lower, 12) << ',' << (r.b_upper ? decimal(*r.b_upper, 12) : "") << '\n';
  }
  return out.str();
}

std::string bounds_svg(const std::vector<BoundsRow>& rows) {
  const double w = 640, h = 400, m = 50;
  double top = 0;
  int max_h = 1;
  for (const auto& r : rows) {
    top = std::max(top, r.b_lower.to_double());
    max_h = std::max(max_h, r.h_sigma);
  }
  if (top <= 0) top = 1;
  auto x = [&](int hs) { return m + (w - 2 * m) * hs / max_h; };
  auto y = [&](double v) { return h - m - (h - 2 * m) * v / (1.1 * top); };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  out << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\">h_sigma</text>\n";
  out << "<text x=\"5\" y=\"" << m - 10 << "\">b_lower</text>\n";
  out << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
  for (const auto& r : rows) out << x(r.h_sigma) << ',' << y(r.b_lower.to_double()) << ' ';
  out << "\"/>\n";
  for (const auto& r : rows) {
    out << "<circle cx=\"" << x(r.h_sigma) << "\" cy=\"" << y(r.b_lower.to_double())
        << "\" r=\"3\"><title>" << r.h_sigma << ": " << r.b_lower.to_string() << "</title></circle>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace narrative_eq::io
