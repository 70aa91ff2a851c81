// SPDX-License-Identifier: Apache-2.0
#include "lncl/task_rules.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace lncl {

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::optional<ButGrounding> ground_but_rule(const Instance& instance,
                                            const std::string& trigger) {
  if (trigger.empty()) throw std::invalid_argument("ground_but_rule: empty trigger");
  const std::string want = lowercase(trigger);
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < instance.tokens.size(); ++i)
    if (lowercase(instance.tokens[i]) == want) last = i;
  if (!last) return std::nullopt;
  // clause B must be non-empty
  if (*last + 1 >= instance.tokens.size()) return std::nullopt;
  ButGrounding g;
  g.instance_id = instance.id;
  g.clause_begin = *last + 1;
  g.clause_end = instance.tokens.size();
  return g;
}

std::vector<double> but_rule_values(const ButGrounding& grounding,
                                    const LabelDistribution& clause_b_prediction) {
  (void)grounding;
  if (clause_b_prediction.size() != 2)
    throw std::invalid_argument("but_rule_values: template requires exactly 2 classes, got " +
                                std::to_string(clause_b_prediction.size()));
  return clause_b_prediction.probs();
}

std::vector<WeightedRuleValues> but_projection_rules(const ButGrounding& grounding,
                                                     const LabelDistribution& clause_b_prediction,
                                                     std::size_t positive_index) {
  std::vector<double> v = but_rule_values(grounding, clause_b_prediction);
  if (positive_index >= 2)
    throw std::invalid_argument("but_projection_rules: positive_index out of range");
  const std::size_t negative_index = 1 - positive_index;

  // Each rule binds its consequent probability on its own label and is
  // vacuously satisfied (value 1) on the other.
  WeightedRuleValues pos{grounding.w_pos, {1.0, 1.0}};
  pos.values[positive_index] = v[positive_index];
  WeightedRuleValues neg{grounding.w_neg, {1.0, 1.0}};
  neg.values[negative_index] = v[negative_index];
  return {pos, neg};
}

bool TransitionRuleSet::empty() const {
  for (const auto& row : penalty)
    for (double p : row)
      if (p != 0.0) return false;
  return true;
}

TransitionRuleSet build_transition_rules(const std::vector<std::string>& label_names,
                                         const std::vector<TransitionRule>& rules) {
  const std::size_t k = label_names.size();
  auto index_of = [&](const std::string& tag) {
    for (std::size_t i = 0; i < k; ++i)
      if (label_names[i] == tag) return i;
    throw std::invalid_argument("build_transition_rules: unknown tag '" + tag + "'");
  };

  TransitionRuleSet set;
  set.penalty.assign(k, std::vector<double>(k, 0.0));
  for (const TransitionRule& rule : rules) {
    if (rule.weight < 0.0 || rule.weight > 1.0)
      throw std::invalid_argument("build_transition_rules: weight outside [0,1] for rule " +
                                  rule.prev_tag + " -> " + rule.next_tag);
    const std::size_t prev = index_of(rule.prev_tag);
    const std::size_t next = index_of(rule.next_tag);
    // equal(t_i, next) => equal(t_{i-1}, prev): violated only when the pair
    // ends in `next` without starting at `prev`.
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const double antecedent = (b == next) ? 1.0 : 0.0;
        const double consequent = (a == prev) ? 1.0 : 0.0;
        const double value =
            soft_implies(SoftTruth(antecedent), SoftTruth(consequent)).value();
        set.penalty[a][b] += rule.weight * (1.0 - value);
      }
  }
  return set;
}

TransitionRuleSet default_bio_transition_rules(const std::vector<std::string>& label_names,
                                               double w_begin, double w_inside) {
  std::set<std::string> begins, insides;
  for (const std::string& name : label_names) {
    if (name == "O") continue;
    if (name.size() > 2 && name.compare(0, 2, "B-") == 0)
      begins.insert(name.substr(2));
    else if (name.size() > 2 && name.compare(0, 2, "I-") == 0)
      insides.insert(name.substr(2));
    else
      throw std::invalid_argument("default_bio_transition_rules: tag '" + name +
                                  "' is not O, B-X, or I-X");
  }
  for (const std::string& type : insides)
    if (!begins.count(type))
      throw std::invalid_argument("default_bio_transition_rules: I-" + type + " without B-" + type);

  std::vector<TransitionRule> rules;
  for (const std::string& type : insides) {
    rules.push_back({"B-" + type, "I-" + type, w_begin});
    rules.push_back({"I-" + type, "I-" + type, w_inside});
  }
  return build_transition_rules(label_names, rules);
}

}  // namespace lncl
