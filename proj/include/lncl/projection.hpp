// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "lncl/distribution.hpp"
#include "lncl/soft_logic.hpp"
#include "lncl/task_rules.hpp"

namespace lncl {

/// Per-label rule penalty phi(y) = strength * sum_l w_l * (1 - v_l(y)).
std::vector<double> rule_penalties(std::size_t num_classes,
                                   std::span<const WeightedRuleValues> rules,
                                   double rule_strength);

/// Closed-form projection of a posterior onto the rule set:
///   q_b(y)  propto  q_a(y) * exp(-phi(y)).
/// Returns `qa` unchanged (bit-for-bit) when the strength is zero, the rule
/// list is empty, or every penalty vanishes.
LabelDistribution project_classification(const LabelDistribution& qa,
                                         std::span<const WeightedRuleValues> rules,
                                         double rule_strength);

struct NumericProjectionOptions {
  int max_iterations = 20000;
  double tolerance = 1e-12;  // max-abs iterate change at which we stop
  double initial_step = 1.0;
};

/// Euclidean projection of an arbitrary vector onto the probability simplex.
std::vector<double> project_to_simplex(std::vector<double> v);

/// Reference solver for the same objective,
///   min_q KL(q || q_a) + strength * sum_l w_l * (1 - E_q[v_l]),
/// by projected gradient descent with backtracking. Deliberately avoids the
/// exponential-family shortcut so it cannot inherit a bug from
/// `project_classification`; agreement between the two is a real check.
LabelDistribution solve_projection_numeric(const LabelDistribution& qa,
                                           std::span<const WeightedRuleValues> rules,
                                           double rule_strength,
                                           const NumericProjectionOptions& options = {});

/// Convex blend q_f = q_a + k * (q_b - q_a), evaluated in exactly that form
/// so k = 0 reproduces q_a bit-for-bit.
LabelDistribution mix_targets(const LabelDistribution& qa, const LabelDistribution& qb,
                              double k);

/// Chain projection for sequences: position marginals of
///   p(y_1..y_T)  propto  prod_t q_a,t(y_t) * prod_t exp(-strength * P[y_{t-1}][y_t])
/// via forward-backward in log space. Short-circuits to the inputs when the
/// strength is zero or the penalty matrix is all zeros.
std::vector<LabelDistribution> project_sequence(
    const std::vector<LabelDistribution>& qa_seq, const TransitionRuleSet& rules,
    double rule_strength);

/// MAP path of the same chain (ties break toward the lower label index).
std::vector<int> viterbi_decode(const std::vector<LabelDistribution>& qa_seq,
                                const TransitionRuleSet& rules, double rule_strength);

}  // namespace lncl
