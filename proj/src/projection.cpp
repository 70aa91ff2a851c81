// SPDX-License-Identifier: Apache-2.0
#include "lncl/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lncl {

std::vector<double> rule_penalties(std::size_t num_classes,
                                   std::span<const WeightedRuleValues> rules,
                                   double rule_strength) {
  if (rule_strength < 0.0)
    throw std::invalid_argument("rule_penalties: rule strength must be >= 0");
  std::vector<double> phi(num_classes, 0.0);
  for (const WeightedRuleValues& rule : rules) {
    if (rule.values.size() != num_classes)
      throw std::invalid_argument("rule_penalties: rule value arity mismatch");
    if (rule.weight < 0.0)
      throw std::invalid_argument("rule_penalties: rule weight must be >= 0");
    for (std::size_t y = 0; y < num_classes; ++y) {
      const double v = rule.values[y];
      if (v < 0.0 || v > 1.0)
        throw std::domain_error("rule_penalties: rule value outside [0,1]");
      phi[y] += rule_strength * rule.weight * (1.0 - v);
    }
  }
  return phi;
}

LabelDistribution project_classification(const LabelDistribution& qa,
                                         std::span<const WeightedRuleValues> rules,
                                         double rule_strength) {
  if (rule_strength == 0.0 || rules.empty()) return qa;
  const std::vector<double> phi = rule_penalties(qa.size(), rules, rule_strength);
  if (std::all_of(phi.begin(), phi.end(), [](double p) { return p == 0.0; })) return qa;
  std::vector<double> scaled(phi.size());
  for (std::size_t y = 0; y < phi.size(); ++y) scaled[y] = qa[y] * std::exp(-phi[y]);
  return LabelDistribution::normalized(scaled);
}

std::vector<double> project_to_simplex(std::vector<double> v) {
  // Sort-based Euclidean projection: find the largest prefix of the sorted
  // values whose shifted mean keeps every kept coordinate positive.
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
  return v;
}

LabelDistribution solve_projection_numeric(const LabelDistribution& qa,
                                           std::span<const WeightedRuleValues> rules,
                                           double rule_strength,
                                           const NumericProjectionOptions& options) {
  const std::size_t K = qa.size();
  const std::vector<double> phi = rule_penalties(K, rules, rule_strength);
  constexpr double kTiny = 1e-15;

  const auto objective = [&](const std::vector<double>& q) {
    double f = 0.0;
    for (std::size_t y = 0; y < K; ++y) {
      if (q[y] > 0.0) {
        if (qa[y] <= 0.0) return std::numeric_limits<double>::infinity();
        f += q[y] * std::log(q[y] / qa[y]);
      }
      f += q[y] * phi[y];
    }
    return f;
  };
  const auto gradient = [&](const std::vector<double>& q, std::vector<double>& g) {
    for (std::size_t y = 0; y < K; ++y) {
      const double p = std::max(qa[y], kTiny);
      g[y] = std::log(std::max(q[y], kTiny) / p) + 1.0 + phi[y];
    }
  };

  std::vector<double> q(K, 1.0 / static_cast<double>(K));
  std::vector<double> grad(K, 0.0), trial(K, 0.0);
  double f = objective(q);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    gradient(q, grad);
    double step = options.initial_step;
    double moved = 0.0;
    // Backtracking: shrink until the step actually decreases the objective.
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t y = 0; y < K; ++y) trial[y] = q[y] - step * grad[y];
      trial = project_to_simplex(std::move(trial));
      const double f_trial = objective(trial);
      if (f_trial < f) {
        for (std::size_t y = 0; y < K; ++y)
          moved = std::max(moved, std::abs(trial[y] - q[y]));
        q.swap(trial);
        f = f_trial;
        break;
      }
      step *= 0.5;
    }
    if (moved < options.tolerance) break;
  }
  return LabelDistribution::normalized(q);
}

LabelDistribution mix_targets(const LabelDistribution& qa, const LabelDistribution& qb,
                              double k) {
  if (qa.size() != qb.size())
    throw std::invalid_argument("mix_targets: distribution size mismatch");
  if (k < 0.0 || k > 1.0) throw std::invalid_argument("mix_targets: k outside [0,1]");
  if (k == 0.0) return qa;
  if (k == 1.0) return qb;
  // Evaluated as q_a + k * (q_b - q_a), never renormalized: when q_b equals
  // q_a bit-for-bit (rules disabled) the blend reproduces q_a bit-for-bit.
  std::vector<double> mixed(qa.size());
  for (std::size_t y = 0; y < qa.size(); ++y)
    mixed[y] = std::max(0.0, qa[y] + k * (qb[y] - qa[y]));
  return LabelDistribution(std::move(mixed));
}

namespace {

double log_sum_exp(const std::vector<double>& v) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : v) top = std::max(top, x);
  if (std::isinf(top)) return top;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - top);
  return top + std::log(acc);
}

double safe_log(double p) {
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

void check_sequence_inputs(const std::vector<LabelDistribution>& qa_seq,
                           const TransitionRuleSet& rules) {
  if (qa_seq.empty()) throw std::invalid_argument("sequence projection: empty sequence");
  const std::size_t K = qa_seq.front().size();
  for (const LabelDistribution& q : qa_seq)
    if (q.size() != K)
      throw std::invalid_argument("sequence projection: inconsistent class counts");
  if (rules.penalty.size() != K)
    throw std::invalid_argument("sequence projection: penalty matrix size mismatch");
  for (const auto& row : rules.penalty)
    if (row.size() != K)
      throw std::invalid_argument("sequence projection: penalty matrix not square");
}

}  // namespace

std::vector<LabelDistribution> project_sequence(
    const std::vector<LabelDistribution>& qa_seq, const TransitionRuleSet& rules,
    double rule_strength) {
  if (rule_strength < 0.0)
    throw std::invalid_argument("project_sequence: rule strength must be >= 0");
  if (qa_seq.empty()) return qa_seq;
  if (rule_strength == 0.0 || rules.empty()) return qa_seq;
  check_sequence_inputs(qa_seq, rules);
  if (qa_seq.size() == 1) return qa_seq;

  const std::size_t K = qa_seq.front().size();
  const std::size_t T = qa_seq.size();
  const auto edge = [&](std::size_t a, std::size_t b) {
    return -rule_strength * rules.penalty[a][b];
  };

  std::vector<std::vector<double>> alpha(T, std::vector<double>(K));
  std::vector<std::vector<double>> beta(T, std::vector<double>(K));
  for (std::size_t y = 0; y < K; ++y) alpha[0][y] = safe_log(qa_seq[0][y]);
  std::vector<double> scratch(K);
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t y = 0; y < K; ++y) {
      for (std::size_t prev = 0; prev < K; ++prev)
        scratch[prev] = alpha[t - 1][prev] + edge(prev, y);
      alpha[t][y] = safe_log(qa_seq[t][y]) + log_sum_exp(scratch);
    }
  for (std::size_t y = 0; y < K; ++y) beta[T - 1][y] = 0.0;
  for (std::size_t t = T - 1; t-- > 0;)
    for (std::size_t y = 0; y < K; ++y) {
      for (std::size_t next = 0; next < K; ++next)
        scratch[next] =
            edge(y, next) + safe_log(qa_seq[t + 1][next]) + beta[t + 1][next];
      beta[t][y] = log_sum_exp(scratch);
    }

  std::vector<LabelDistribution> out;
  out.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<double> log_marginal(K);
    for (std::size_t y = 0; y < K; ++y) log_marginal[y] = alpha[t][y] + beta[t][y];
    const double norm = log_sum_exp(log_marginal);
    if (std::isinf(norm))
      throw std::domain_error("project_sequence: all paths have zero probability");
    std::vector<double> marginal(K);
    for (std::size_t y = 0; y < K; ++y) marginal[y] = std::exp(log_marginal[y] - norm);
    out.push_back(LabelDistribution::normalized(marginal));
  }
  return out;
}

std::vector<int> viterbi_decode(const std::vector<LabelDistribution>& qa_seq,
                                const TransitionRuleSet& rules, double rule_strength) {
  if (rule_strength < 0.0)
    throw std::invalid_argument("viterbi_decode: rule strength must be >= 0");
  if (qa_seq.empty()) return {};
  if (rule_strength == 0.0 || rules.empty()) {
    std::vector<int> path;
    path.reserve(qa_seq.size());
    for (const LabelDistribution& q : qa_seq)
      path.push_back(static_cast<int>(q.argmax()));
    return path;
  }
  check_sequence_inputs(qa_seq, rules);

  const std::size_t K = qa_seq.front().size();
  const std::size_t T = qa_seq.size();
  std::vector<std::vector<double>> score(T, std::vector<double>(K));
  std::vector<std::vector<std::size_t>> back(T, std::vector<std::size_t>(K, 0));
  for (std::size_t y = 0; y < K; ++y) score[0][y] = safe_log(qa_seq[0][y]);
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t y = 0; y < K; ++y) {
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_prev = 0;
      for (std::size_t prev = 0; prev < K; ++prev) {
        const double s = score[t - 1][prev] - rule_strength * rules.penalty[prev][y];
        if (s > best) {
          best = s;
          best_prev = prev;
        }
      }
      score[t][y] = best + safe_log(qa_seq[t][y]);
      back[t][y] = best_prev;
    }

  std::size_t tail = 0;
  for (std::size_t y = 1; y < K; ++y)
    if (score[T - 1][y] > score[T - 1][tail]) tail = y;
  std::vector<int> path(T, 0);
  path[T - 1] = static_cast<int>(tail);
  for (std::size_t t = T - 1; t-- > 0;) {
    tail = back[t + 1][tail];
    path[t] = static_cast<int>(tail);
  }
  return path;
}

}  // namespace lncl
