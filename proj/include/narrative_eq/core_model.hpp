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

#ifndef NARRATIVE_EQ_CORE_MODEL_HPP_
#define NARRATIVE_EQ_CORE_MODEL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrative_eq/rational.hpp"

namespace narrative_eq {

inline constexpr int kDefaultMaxK = 25;
// Models are stored as 32-bit masks.
inline constexpr int kHardMaxK = 30;

// Observed binary outcomes h = (h_1, ..., h_K).
class History {
 public:
  // bits[i] is h_{i+1}; throws InputError unless 1 <= size <= kHardMaxK and
  // every entry is 0 or 1.
  explicit History(std::vector<int> bits);
  // Accepts strings such as "101" or "1,0,1".
  static History parse(std::string_view text);
  // The ones-then-zeros representative of a success count.
  static History canonical(int K, int successes);

  int K() const { return static_cast<int>(bits_.size()); }
  int sigma() const { return sigma_; }
  int bit(int index) const { return bits_.at(static_cast<std::size_t>(index)); }
  const std::vector<int>& bits() const { return bits_; }
  // Bit i set iff h_{i+1} = 1.
  std::uint32_t success_mask() const { return success_mask_; }
  std::string to_string() const;

  friend bool operator==(const History&, const History&) = default;

 private:
  std::vector<int> bits_;
  int sigma_ = 0;
  std::uint32_t success_mask_ = 0;
};

// A narrative: the set of observation indices deemed relevant. Bit i of the
// mask stands for observation i+1.
struct Model {
  std::uint32_t mask = 0;

  static Model of(std::initializer_list<int> one_based_indices);
  // "{1,3}", "1,3", "{}" and "" are accepted.
  static Model parse(std::string_view text, int K);

  int size() const;
  std::vector<int> indices() const;  // one-based, ascending
  std::string to_string() const;

  friend bool operator==(const Model&, const Model&) = default;
};

// Lexicographic order on the ascending index lists.
bool lexicographically_less(const Model& a, const Model& b);

// Throws InputError if the model references an index outside 1..K.
void validate(const Model& m, int K);

struct PosteriorSummary {
  int successes = 0;  // s: successes at relevant indices
  int size = 0;       // #m
  Rational mean;      // (s+1)/(#m+2)
  Rational variance;  // (s+1)(#m-s+1)/((#m+2)^2 (#m+3))
  Rational likelihood;
};

Rational likelihood(const Model& m, const History& h);
PosteriorSummary posterior_summary(const Model& m, const History& h);
// Summary shared by all models with `size` relevant indices of which
// `successes` are ones, in a history of length K.
PosteriorSummary group_summary(int K, int size, int successes);

// E[-(theta + b - a)^2] under a posterior with the given moments.
Rational expected_sender_utility(const Rational& mean, const Rational& variance,
                                 const Rational& action, const Rational& bias);

// All models with the same (#m, s) are interchangeable; the space stores them
// as one group with a multiplicity.
struct ModelGroup {
  int size = 0;
  int successes = 0;
  std::uint64_t count = 0;
  PosteriorSummary summary;
};

enum class TiebreakKind {
  kMoreRelevant,   // larger #m first, then higher mean
  kFewerRelevant,  // smaller #m first, then lower mean
  kExplicit,       // listed models first, in list order; then kMoreRelevant
};

// Strict order among models of equal likelihood. Likelihood always dominates.
struct TiebreakPolicy {
  TiebreakKind kind = TiebreakKind::kMoreRelevant;
  std::vector<Model> order;

  std::string name() const;
};

struct SpaceOptions {
  bool include_empty_model = true;
  TiebreakPolicy tiebreak;
  int max_K = kDefaultMaxK;
};

struct BlissClass {
  Rational mean;
  std::vector<ModelGroup> members;  // tiebreak-preferred first
};

// Inclusive range of bliss-class indices.
struct ClassRange {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
  bool contains(int c) const { return first <= c && c <= last; }
  friend bool operator==(const ClassRange&, const ClassRange&) = default;
};

class ModelSpace {
 public:
  explicit ModelSpace(History history, SpaceOptions options = {});

  const History& history() const { return history_; }
  int K() const { return history_.K(); }
  const SpaceOptions& options() const { return options_; }

  std::span<const BlissClass> classes() const { return classes_; }
  int class_count() const { return static_cast<int>(classes_.size()); }
  const BlissClass& bliss_class(int c) const { return classes_.at(static_cast<std::size_t>(c)); }
  ClassRange all() const { return {0, class_count() - 1}; }
  std::uint64_t model_count() const { return model_count_; }

  bool contains(const Model& m) const;
  // Index of the bliss class holding m; InputError if m is not in the space.
  int class_of(const Model& m) const;
  const ModelGroup& group_of(const Model& m) const;
  // Concrete models of a group in lexicographic order.
  std::vector<Model> members(const ModelGroup& g) const;
  std::vector<Model> all_models() const;
  // Lexicographically first concrete model of a group.
  Model first_member(const ModelGroup& g) const;

  // True if a ranks strictly above b under likelihood, then the tiebreak.
  bool prefers(const Model& a, const Model& b) const;
  // The maximal model of the range under prefers().
  Model most_likely(ClassRange range) const;

 private:
  int group_rank(const ModelGroup& a, const ModelGroup& b) const;

  History history_;
  SpaceOptions options_;
  std::vector<BlissClass> classes_;
  std::uint64_t model_count_ = 0;
};

// Bliss classes of the full model space in ascending order of mean.
std::vector<BlissClass> build_model_space(int K, const History& h);

// The receiver's belief after a message whose preimage is a set of classes.
struct MinimalFeasibleSet {
  ClassRange classes;
};

// Dempster-Shafer update of the vacuous prior; the preimage must be a
// nonempty, contiguous set of class indices (ContractError otherwise).
MinimalFeasibleSet ds_update(const ModelSpace& space, std::span<const int> preimage);
MinimalFeasibleSet ds_update(const ModelSpace& space, ClassRange preimage);

// Capacities over subsets of the (at most 64) bliss classes, bit c = class c.
using ClassSet = std::uint64_t;
// mu_0: one on the whole space, zero elsewhere.
Rational prior_capacity(ClassSet event, int class_count);
Rational ds_posterior(ClassSet preimage, ClassSet event, int class_count);
// Full-Bayesian update of mu_0 with the 0/0 = 1 convention.
Rational full_bayes_posterior(ClassSet preimage, ClassSet event, int class_count);
// Intersection of all events of posterior capacity one.
template <typename Capacity>
ClassSet minimal_support(Capacity&& capacity, int class_count) {
  ClassSet all = class_count == 64 ? ~ClassSet{0} : ((ClassSet{1} << class_count) - 1);
  ClassSet support = all;
  for (ClassSet e = 0;; ++e) {
    if (capacity(e) == Rational(1)) support &= e;
    if (e == all) break;
  }
  return support;
}

}  // namespace narrative_eq

#endif  // NARRATIVE_EQ_CORE_MODEL_HPP_
