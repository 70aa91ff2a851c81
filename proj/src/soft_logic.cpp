// SPDX-License-Identifier: Apache-2.0
#include "lncl/soft_logic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lncl {

SoftTruth::SoftTruth(double value) : value_(value) {
  if (!std::isfinite(value_) || value_ < 0.0 || value_ > 1.0)
    throw std::invalid_argument("SoftTruth: value " + std::to_string(value_) +
                                " outside [0,1]");
}

SoftTruth soft_and(SoftTruth a, SoftTruth b) {
  return SoftTruth(std::max(0.0, a.value() + b.value() - 1.0));
}

SoftTruth soft_or(SoftTruth a, SoftTruth b) {
  return SoftTruth(std::min(a.value() + b.value(), 1.0));
}

SoftTruth soft_not(SoftTruth a) { return SoftTruth(1.0 - a.value()); }

SoftTruth soft_implies(SoftTruth a, SoftTruth b) {
  return SoftTruth(std::min(1.0, 1.0 - a.value() + b.value()));
}

Expr Expr::atom(std::size_t slot) { return Expr(Kind::atom, slot); }

Expr Expr::logical_not(Expr a) {
  Expr e(Kind::negation, 0);
  e.lhs_ = std::make_shared<Expr>(std::move(a));
  return e;
}

Expr Expr::logical_and(Expr a, Expr b) {
  Expr e(Kind::conjunction, 0);
  e.lhs_ = std::make_shared<Expr>(std::move(a));
  e.rhs_ = std::make_shared<Expr>(std::move(b));
  return e;
}

Expr Expr::logical_or(Expr a, Expr b) {
  Expr e(Kind::disjunction, 0);
  e.lhs_ = std::make_shared<Expr>(std::move(a));
  e.rhs_ = std::make_shared<Expr>(std::move(b));
  return e;
}

Expr Expr::implies(Expr a, Expr b) {
  Expr e(Kind::implication, 0);
  e.lhs_ = std::make_shared<Expr>(std::move(a));
  e.rhs_ = std::make_shared<Expr>(std::move(b));
  return e;
}

SoftTruth Expr::evaluate(const std::vector<SoftTruth>& atom_values) const {
  switch (kind_) {
    case Kind::atom:
      if (slot_ >= atom_values.size())
        throw std::out_of_range("Expr: atom slot " + std::to_string(slot_) +
                                " not bound (" + std::to_string(atom_values.size()) +
                                " values supplied)");
      return atom_values[slot_];
    case Kind::negation:
      return soft_not(lhs_->evaluate(atom_values));
    case Kind::conjunction:
      return soft_and(lhs_->evaluate(atom_values), rhs_->evaluate(atom_values));
    case Kind::disjunction:
      return soft_or(lhs_->evaluate(atom_values), rhs_->evaluate(atom_values));
    case Kind::implication:
      return soft_implies(lhs_->evaluate(atom_values), rhs_->evaluate(atom_values));
  }
  throw std::logic_error("Expr: unreachable");
}

std::size_t Expr::arity() const {
  switch (kind_) {
    case Kind::atom:
      return slot_ + 1;
    case Kind::negation:
      return lhs_->arity();
    default:
      return std::max(lhs_->arity(), rhs_->arity());
  }
}

double eval_rule_value(const Grounding& grounding, const std::vector<int>& assignment) {
  if (assignment.size() != grounding.arity)
    throw std::invalid_argument("eval_rule_value: rule '" + grounding.rule_id + "' expects " +
                                std::to_string(grounding.arity) + " labels, got " +
                                std::to_string(assignment.size()));
  double v = grounding.value_fn(assignment);
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw std::domain_error("eval_rule_value: rule '" + grounding.rule_id +
                            "' produced value outside [0,1]");
  return v;
}

}  // namespace lncl
