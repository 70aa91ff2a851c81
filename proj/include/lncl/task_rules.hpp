// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lncl/dataset.hpp"
#include "lncl/distribution.hpp"
#include "lncl/soft_logic.hpp"

namespace lncl {

/// Contrastive-conjunction grounding on a binary sentiment instance: the
/// sentence sentiment should agree with the clause after the trigger word.
struct ButGrounding {
  std::string instance_id;
  std::size_t clause_begin = 0;  // first token of clause B
  std::size_t clause_end = 0;    // one past the last token
  double w_pos = 1.0;
  double w_neg = 1.0;
};

/// Finds the clause after the LAST whole-token, case-insensitive occurrence
/// of `trigger`. Returns nothing when the trigger is absent or clause B would
/// be empty (trailing trigger).
std::optional<ButGrounding> ground_but_rule(const Instance& instance,
                                            const std::string& trigger = "but");

/// Per-label rule value vector: v(t) equals the clause-B probability of t.
/// Only defined for two-class tasks.
std::vector<double> but_rule_values(const ButGrounding& grounding,
                                    const LabelDistribution& clause_b_prediction);

/// The two weighted rules of the grounding in projection form. The positive-
/// label rule (weight w_pos) binds at `positive_index`, the negative one at
/// the other index; each is vacuously satisfied on the opposite label.
std::vector<WeightedRuleValues> but_projection_rules(const ButGrounding& grounding,
                                                     const LabelDistribution& clause_b_prediction,
                                                     std::size_t positive_index);

/// One pairwise tag-transition rule: equal(t_i, next_tag) implies
/// equal(t_{i-1}, prev_tag), with credibility `weight`.
struct TransitionRule {
  std::string prev_tag;
  std::string next_tag;
  double weight = 1.0;
};

/// All pairwise transition rules folded into one K x K penalty matrix:
/// penalty(a, b) = sum_l w_l * (1 - v_l(t_prev = a, t_next = b)).
struct TransitionRuleSet {
  std::vector<std::vector<double>> penalty;

  bool empty() const;
  std::size_t size() const { return penalty.size(); }
};

TransitionRuleSet build_transition_rules(const std::vector<std::string>& label_names,
                                         const std::vector<TransitionRule>& rules);

/// For every entity type X in a BIO scheme, the rules (B-X -> I-X, w_begin)
/// and (I-X -> I-X, w_inside). Rejects tag sets that are not O/B-X/I-X shaped
/// or that have an I-X without its B-X.
TransitionRuleSet default_bio_transition_rules(const std::vector<std::string>& label_names,
                                               double w_begin = 0.8, double w_inside = 0.2);

}  // namespace lncl
