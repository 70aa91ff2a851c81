// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace lncl {

/// Soft truth value in [0, 1]. Out-of-range construction is an error; nothing
/// is clamped.
class SoftTruth {
 public:
  explicit SoftTruth(double value);
  double value() const { return value_; }

  bool operator==(const SoftTruth&) const = default;

 private:
  double value_;
};

// Lukasiewicz relaxations of the Boolean connectives.
SoftTruth soft_and(SoftTruth a, SoftTruth b);      // max{0, a + b - 1}
SoftTruth soft_or(SoftTruth a, SoftTruth b);       // min{a + b, 1}
SoftTruth soft_not(SoftTruth a);                   // 1 - a
SoftTruth soft_implies(SoftTruth a, SoftTruth b);  // min{1, 1 - a + b}

/// Expression tree over atom slots. Atoms are indices into the truth-value
/// vector supplied at evaluation time, so one tree can be re-evaluated under
/// many interpretations (crisp 0/1 predicates or classifier probabilities).
class Expr {
 public:
  static Expr atom(std::size_t slot);
  static Expr logical_not(Expr a);
  static Expr logical_and(Expr a, Expr b);
  static Expr logical_or(Expr a, Expr b);
  static Expr implies(Expr a, Expr b);

  SoftTruth evaluate(const std::vector<SoftTruth>& atom_values) const;

  /// Highest atom slot referenced plus one.
  std::size_t arity() const;

 private:
  enum class Kind { atom, negation, conjunction, disjunction, implication };
  Expr(Kind kind, std::size_t slot) : kind_(kind), slot_(slot) {}

  Kind kind_;
  std::size_t slot_ = 0;
  std::shared_ptr<const Expr> lhs_;
  std::shared_ptr<const Expr> rhs_;
};

/// Weighted first-order rule. The body is kept for documentation and
/// soundness checks; grounded evaluation goes through Grounding closures,
/// which bind the body's atoms to instance context.
struct Rule {
  std::string id;
  double weight = 1.0;  // in [0, 1]
  Expr body = Expr::atom(0);
};

/// A rule instantiated on one instance. `value_fn` maps a candidate label
/// assignment (one label, or an adjacent-pair for transition rules) to the
/// rule value v = 1 - distance_to_satisfaction, in [0, 1].
struct Grounding {
  std::string rule_id;
  std::string instance_id;
  std::size_t arity = 1;
  std::function<double(const std::vector<int>&)> value_fn;
};

/// Evaluates a grounding on a candidate assignment. Rejects arity mismatches
/// and out-of-range rule values.
double eval_rule_value(const Grounding& grounding, const std::vector<int>& assignment);

/// Flattened per-label rule values for one grounded rule on one instance;
/// the form consumed by the posterior projection.
struct WeightedRuleValues {
  double weight = 1.0;            // w_l
  std::vector<double> values;     // v_l(x, t) for each candidate label t
};

}  // namespace lncl
