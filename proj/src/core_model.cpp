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

#include "narrative_eq/core_model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>

#include "narrative_eq/errors.hpp"

namespace narrative_eq {
namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

// All masks choosing `take` positions out of `positions`.
void choose(const std::vector<int>& positions, int take, std::size_t from, std::uint32_t acc,
            std::vector<std::uint32_t>& out) {
  if (take == 0) {
    out.push_back(acc);
    return;
  }
  for (std::size_t i = from; i + static_cast<std::size_t>(take) <= positions.size(); ++i) {
    choose(positions, take - 1, i + 1, acc | (1u << positions[i]), out);
  }
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

bool is_number(const std::string& s) {
  return !s.empty() && s.size() <= 3 &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

ClassSet full_set(int class_count) {
  if (class_count < 1 || class_count > 64) throw ContractError("capacities need 1..64 classes");
  return class_count == 64 ? ~ClassSet{0} : ((ClassSet{1} << class_count) - 1);
}

}  // namespace

History::History(std::vector<int> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw InputError("history must contain at least one observation");
  if (static_cast<int>(bits_.size()) > kHardMaxK) {
    throw ResourceError("history longer than " + std::to_string(kHardMaxK) + " observations");
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] != 0 && bits_[i] != 1) throw InputError("history entries must be 0 or 1");
    if (bits_[i] == 1) {
      ++sigma_;
      success_mask_ |= 1u << i;
    }
  }
}

History History::parse(std::string_view text) {
  std::vector<int> bits;
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(c - '0');
    } else if (c != ',' && c != ' ' && c != '(' && c != ')') {
      throw InputError("malformed history '" + std::string(text) + "'");
    }
  }
  return History(std::move(bits));
}

History History::canonical(int K, int successes) {
  if (K < 1) throw InputError("K must be at least 1");
  if (K > kHardMaxK) throw ResourceError("K beyond " + std::to_string(kHardMaxK));
  if (successes < 0 || successes > K) throw InputError("success count must lie in [0, K]");
  std::vector<int> bits(static_cast<std::size_t>(K), 0);
  std::fill_n(bits.begin(), successes, 1);
  return History(std::move(bits));
}

std::string History::to_string() const {
  std::string s;
  for (int b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

Model Model::of(std::initializer_list<int> one_based_indices) {
  Model m;
  for (int i : one_based_indices) {
    if (i < 1 || i > kHardMaxK) throw InputError("model index out of range");
    m.mask |= 1u << (i - 1);
  }
  return m;
}

Model Model::parse(std::string_view text, int K) {
  std::string s = trim(text);
  if (!s.empty() && s.front() == '{') {
    if (s.back() != '}') throw InputError("malformed model '" + std::string(text) + "'");
    s = trim(std::string_view(s).substr(1, s.size() - 2));
  }
  Model m;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string item = trim(std::string_view(s).substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!is_number(item)) throw InputError("malformed model '" + std::string(text) + "'");
    int index = std::stoi(item);
    if (index < 1 || index > K) {
      throw InputError("model index " + item + " outside 1.." + std::to_string(K));
    }
    std::uint32_t bit = 1u << (index - 1);
    if (m.mask & bit) throw InputError("repeated index in model '" + std::string(text) + "'");
    m.mask |= bit;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return m;
}

int Model::size() const { return std::popcount(mask); }

std::vector<int> Model::indices() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i) {
    if (mask & (1u << i)) out.push_back(i + 1);
  }
  return out;
}

std::string Model::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int i : indices()) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

bool lexicographically_less(const Model& a, const Model& b) {
  auto ia = a.indices();
  auto ib = b.indices();
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

void validate(const Model& m, int K) {
  if (K < 32 && (m.mask >> K) != 0) {
    throw InputError("model " + m.to_string() + " references an index beyond K=" + std::to_string(K));
  }
}

PosteriorSummary group_summary(int K, int size, int successes) {
  if (size < 0 || size > K || successes < 0 || successes > size) {
    throw InputError("invalid model group");
  }
  PosteriorSummary p;
  p.successes = successes;
  p.size = size;
  const long s = successes;
  const long k = size;
  p.mean = Rational(s + 1, k + 2);
  p.variance = Rational((s + 1) * (k - s + 1), (k + 2) * (k + 2) * (k + 3));
  // Beta integral of theta^s (1-theta)^(k-s), times 1/2 per irrelevant draw.
  mpz_class num = factorial(static_cast<unsigned>(s)) * factorial(static_cast<unsigned>(k - s));
  p.likelihood = half_power(static_cast<unsigned>(K - size)) *
                 Rational(num, factorial(static_cast<unsigned>(k + 1)));
  return p;
}

PosteriorSummary posterior_summary(const Model& m, const History& h) {
  validate(m, h.K());
  return group_summary(h.K(), m.size(), std::popcount(m.mask & h.success_mask()));
}

Rational likelihood(const Model& m, const History& h) { return posterior_summary(m, h).likelihood; }

Rational expected_sender_utility(const Rational& mean, const Rational& variance,
                                 const Rational& action, const Rational& bias) {
  Rational gap = mean + bias - action;
  return -(variance + gap * gap);
}

std::string TiebreakPolicy::name() const {
  switch (kind) {
    case TiebreakKind::kMoreRelevant: return "more_relevant";
    case TiebreakKind::kFewerRelevant: return "fewer_relevant";
    case TiebreakKind::kExplicit: return "explicit";
  }
  return "?";
}

ModelSpace::ModelSpace(History history, SpaceOptions options)
    : history_(std::move(history)), options_(std::move(options)) {
  const int K = history_.K();
  if (K > options_.max_K) {
    throw ResourceError("K=" + std::to_string(K) + " exceeds the configured cap of " +
                        std::to_string(options_.max_K));
  }
  for (const Model& m : options_.tiebreak.order) validate(m, K);
  const int ones = history_.sigma();
  std::map<Rational, std::vector<ModelGroup>> by_mean;
  for (int k = 0; k <= K; ++k) {
    for (int s = std::max(0, ones - K + k); s <= std::min(k, ones); ++s) {
      if (k == 0 && !options_.include_empty_model) continue;
      ModelGroup g;
      g.size = k;
      g.successes = s;
      g.count = binomial(ones, s) * binomial(K - ones, k - s);
      g.summary = group_summary(K, k, s);
      model_count_ += g.count;
      by_mean[g.summary.mean].push_back(std::move(g));
    }
  }
  for (auto& [mean, groups] : by_mean) {
    std::sort(groups.begin(), groups.end(),
              [this](const ModelGroup& a, const ModelGroup& b) { return group_rank(a, b) < 0; });
    classes_.push_back(BlissClass{mean, std::move(groups)});
  }
}

int ModelSpace::group_rank(const ModelGroup& a, const ModelGroup& b) const {
  if (a.summary.likelihood != b.summary.likelihood) {
    return a.summary.likelihood > b.summary.likelihood ? -1 : 1;
  }
  const bool fewer = options_.tiebreak.kind == TiebreakKind::kFewerRelevant;
  if (a.size != b.size) return (a.size > b.size) != fewer ? -1 : 1;
  if (a.summary.mean != b.summary.mean) return (a.summary.mean > b.summary.mean) != fewer ? -1 : 1;
  return 0;
}

bool ModelSpace::contains(const Model& m) const {
  if (K() < 32 && (m.mask >> K()) != 0) return false;
  return m.mask != 0 || options_.include_empty_model;
}

const ModelGroup& ModelSpace::group_of(const Model& m) const {
  if (!contains(m)) throw InputError("model " + m.to_string() + " is not in the model space");
  const PosteriorSummary p = posterior_summary(m, history_);
  auto it = std::lower_bound(classes_.begin(), classes_.end(), p.mean,
                             [](const BlissClass& c, const Rational& v) { return c.mean < v; });
  if (it != classes_.end() && it->mean == p.mean) {
    for (const ModelGroup& g : it->members) {
      if (g.size == p.size && g.successes == p.successes) return g;
    }
  }
  throw InvariantError("model " + m.to_string() + " missing from its bliss class");
}

int ModelSpace::class_of(const Model& m) const {
  const Rational& mean = group_of(m).summary.mean;
  auto it = std::lower_bound(classes_.begin(), classes_.end(), mean,
                             [](const BlissClass& c, const Rational& v) { return c.mean < v; });
  return static_cast<int>(it - classes_.begin());
}

std::vector<Model> ModelSpace::members(const ModelGroup& g) const {
  if (g.count > (std::uint64_t{1} << 24)) {
    throw ResourceError("model group too large to enumerate");
  }
  std::vector<int> ones, zeros;
  for (int i = 0; i < K(); ++i) (history_.bit(i) ? ones : zeros).push_back(i);
  std::vector<std::uint32_t> success_parts, failure_parts;
  choose(ones, g.successes, 0, 0, success_parts);
  choose(zeros, g.size - g.successes, 0, 0, failure_parts);
  std::vector<Model> out;
  out.reserve(success_parts.size() * failure_parts.size());
  for (auto a : success_parts) {
    for (auto b : failure_parts) out.push_back(Model{a | b});
  }
  std::sort(out.begin(), out.end(), lexicographically_less);
  return out;
}

std::vector<Model> ModelSpace::all_models() const {
  std::vector<Model> out;
  for (const BlissClass& c : classes_) {
    for (const ModelGroup& g : c.members) {
      auto ms = members(g);
      out.insert(out.end(), ms.begin(), ms.end());
    }
  }
  return out;
}

Model ModelSpace::first_member(const ModelGroup& g) const {
  int need_ones = g.successes;
  int need_zeros = g.size - g.successes;
  Model m;
  for (int i = 0; i < K(); ++i) {
    int& need = history_.bit(i) ? need_ones : need_zeros;
    if (need > 0) {
      m.mask |= 1u << i;
      --need;
    }
  }
  return m;
}

bool ModelSpace::prefers(const Model& a, const Model& b) const {
  if (a == b) return false;
  const ModelGroup& ga = group_of(a);
  const ModelGroup& gb = group_of(b);
  if (ga.summary.likelihood != gb.summary.likelihood) {
    return ga.summary.likelihood > gb.summary.likelihood;
  }
  if (options_.tiebreak.kind == TiebreakKind::kExplicit) {
    const auto& order = options_.tiebreak.order;
    auto pa = std::find(order.begin(), order.end(), a);
    auto pb = std::find(order.begin(), order.end(), b);
    if (pa != order.end() || pb != order.end()) return pa < pb;
  }
  int r = group_rank(ga, gb);
  if (r != 0) return r < 0;
  return lexicographically_less(a, b);
}

Model ModelSpace::most_likely(ClassRange range) const {
  if (range.first < 0 || range.last >= class_count() || range.first > range.last) {
    throw ContractError("class range out of bounds");
  }
  const ModelGroup* best = nullptr;
  for (int c = range.first; c <= range.last; ++c) {
    for (const ModelGroup& g : classes_[static_cast<std::size_t>(c)].members) {
      if (best == nullptr || group_rank(g, *best) < 0) best = &g;
    }
  }
  if (options_.tiebreak.kind == TiebreakKind::kExplicit) {
    for (const Model& m : options_.tiebreak.order) {
      if (!contains(m)) continue;
      if (group_of(m).summary.likelihood == best->summary.likelihood &&
          range.contains(class_of(m))) {
        return m;
      }
    }
  }
  return first_member(*best);
}

std::vector<BlissClass> build_model_space(int K, const History& h) {
  if (h.K() != K) {
    throw InputError("history length " + std::to_string(h.K()) + " does not match K=" +
                     std::to_string(K));
  }
  ModelSpace space(h);
  return {space.classes().begin(), space.classes().end()};
}

MinimalFeasibleSet ds_update(const ModelSpace& space, ClassRange preimage) {
  if (preimage.first < 0 || preimage.last >= space.class_count() || preimage.first > preimage.last) {
    throw ContractError("message preimage must be a nonempty range of classes");
  }
  return MinimalFeasibleSet{preimage};
}

MinimalFeasibleSet ds_update(const ModelSpace& space, std::span<const int> preimage) {
  if (preimage.empty()) throw ContractError("message preimage is empty");
  std::vector<int> sorted(preimage.begin(), preimage.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ContractError("message preimage lists a class twice");
  }
  if (sorted.back() - sorted.front() + 1 != static_cast<int>(sorted.size())) {
    throw ContractError("message preimage is not contiguous in the class order");
  }
  return ds_update(space, ClassRange{sorted.front(), sorted.back()});
}

Rational prior_capacity(ClassSet event, int class_count) {
  const ClassSet all = full_set(class_count);
  return (event & all) == all ? Rational(1) : Rational(0);
}

Rational ds_posterior(ClassSet preimage, ClassSet event, int class_count) {
  const ClassSet outside = full_set(class_count) & ~preimage;
  Rational denom = Rational(1) - prior_capacity(outside, class_count);
  if (denom.is_zero()) throw ContractError("update on an empty preimage");
  return (prior_capacity(event | outside, class_count) - prior_capacity(outside, class_count)) / denom;
}

Rational full_bayes_posterior(ClassSet preimage, ClassSet event, int class_count) {
  const ClassSet outside = full_set(class_count) & ~preimage;
  Rational inside = prior_capacity(event & preimage, class_count);
  Rational denom = inside + Rational(1) - prior_capacity(event | outside, class_count);
  if (denom.is_zero()) return Rational(1);
  return inside / denom;
}

}  // namespace narrative_eq
