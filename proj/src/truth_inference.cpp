// SPDX-License-Identifier: Apache-2.0
#include "lncl/truth_inference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lncl {

namespace {

std::size_t positions_of(const CrowdDataset& dataset, const Instance& instance) {
  return dataset.task_kind == TaskKind::classification ? 1 : instance.tokens.size();
}

}  // namespace

void check_aligned(const PosteriorSet& posteriors, const CrowdDataset& dataset) {
  if (posteriors.items.size() != dataset.instances.size())
    throw std::invalid_argument("posterior set: instance count mismatch");
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const auto want = positions_of(dataset, dataset.instances[i]);
    if (posteriors.items[i].size() != want)
      throw std::invalid_argument("posterior set: position count mismatch at instance " +
                                  std::to_string(i));
    for (const LabelDistribution& q : posteriors.items[i])
      if (q.size() != static_cast<std::size_t>(dataset.num_classes))
        throw std::invalid_argument("posterior set: class count mismatch at instance " +
                                    std::to_string(i));
  }
}

PosteriorSet majority_vote(const CrowdDataset& dataset) {
  PosteriorSet out;
  out.items.reserve(dataset.instances.size());
  const auto K = static_cast<std::size_t>(dataset.num_classes);
  for (const Instance& instance : dataset.instances) {
    const std::size_t positions = positions_of(dataset, instance);
    std::vector<LabelDistribution> qs;
    qs.reserve(positions);
    for (std::size_t t = 0; t < positions; ++t) {
      std::vector<double> votes(K, 0.0);
      double total = 0.0;
      for (const auto& [annotator, labels] : instance.annotations) {
        votes[static_cast<std::size_t>(labels[t])] += 1.0;
        total += 1.0;
      }
      qs.push_back(total > 0.0 ? LabelDistribution::normalized(votes)
                               : LabelDistribution::uniform(dataset.num_classes));
    }
    out.items.push_back(std::move(qs));
  }
  return out;
}

std::vector<ConfusionMatrix> update_confusions(const CrowdDataset& dataset,
                                               const PosteriorSet& posteriors,
                                               double epsilon) {
  check_aligned(posteriors, dataset);
  if (epsilon <= 0.0)
    throw std::invalid_argument("update_confusions: epsilon must be positive");
  const auto K = static_cast<std::size_t>(dataset.num_classes);
  // counts[j][c][k]: expected number of positions with true label c that
  // annotator j reported as k.
  std::vector<std::vector<double>> counts(
      static_cast<std::size_t>(dataset.num_annotators), std::vector<double>(K * K, 0.0));
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const Instance& instance = dataset.instances[i];
    for (const auto& [annotator, labels] : instance.annotations) {
      auto& cell = counts[static_cast<std::size_t>(annotator)];
      for (std::size_t t = 0; t < labels.size(); ++t) {
        const auto reported = static_cast<std::size_t>(labels[t]);
        const LabelDistribution& q = posteriors.items[i][t];
        for (std::size_t c = 0; c < K; ++c) cell[c * K + reported] += q[c];
      }
    }
  }
  std::vector<ConfusionMatrix> out;
  out.reserve(counts.size());
  for (const auto& cell : counts) {
    std::vector<double> rows(K * K, 0.0);
    for (std::size_t c = 0; c < K; ++c) {
      double denom = static_cast<double>(K) * epsilon;
      for (std::size_t k = 0; k < K; ++k) denom += cell[c * K + k];
      for (std::size_t k = 0; k < K; ++k)
        rows[c * K + k] = (cell[c * K + k] + epsilon) / denom;
    }
    out.push_back(ConfusionMatrix(K, rows));
  }
  return out;
}

PosteriorSet compute_qa(const CrowdDataset& dataset, const PosteriorSet& priors,
                        const std::vector<ConfusionMatrix>& confusions) {
  check_aligned(priors, dataset);
  if (std::ssize(confusions) != dataset.num_annotators)
    throw std::invalid_argument("compute_qa: confusion count mismatch");
  for (const ConfusionMatrix& pi : confusions)
    if (pi.size() != static_cast<std::size_t>(dataset.num_classes))
      throw std::invalid_argument("compute_qa: confusion class count mismatch");

  const auto K = static_cast<std::size_t>(dataset.num_classes);
  PosteriorSet out;
  out.items.reserve(dataset.instances.size());
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const Instance& instance = dataset.instances[i];
    const std::size_t positions = positions_of(dataset, instance);
    std::vector<LabelDistribution> qs;
    qs.reserve(positions);
    for (std::size_t t = 0; t < positions; ++t) {
      if (instance.annotations.empty()) {
        qs.push_back(priors.items[i][t]);
        continue;
      }
      std::vector<double> log_post(K);
      for (std::size_t c = 0; c < K; ++c) {
        // Smoothed confusions are strictly positive; a zero prior stays zero.
        const double p = priors.items[i][t][c];
        log_post[c] = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
      }
      for (const auto& [annotator, labels] : instance.annotations) {
        const ConfusionMatrix& pi = confusions[static_cast<std::size_t>(annotator)];
        for (std::size_t c = 0; c < K; ++c)
          log_post[c] += std::log(pi.at(c, static_cast<std::size_t>(labels[t])));
      }
      double top = log_post[0];
      for (double v : log_post) top = std::max(top, v);
      std::vector<double> post(K, 0.0);
      for (std::size_t c = 0; c < K; ++c)
        post[c] = std::isinf(top) && top < 0 ? 1.0 : std::exp(log_post[c] - top);
      qs.push_back(LabelDistribution::normalized(post));
    }
    out.items.push_back(std::move(qs));
  }
  return out;
}

LabelDistribution class_prior(const PosteriorSet& posteriors, int num_classes) {
  std::vector<double> total(static_cast<std::size_t>(num_classes), 0.0);
  double positions = 0.0;
  for (const auto& item : posteriors.items)
    for (const LabelDistribution& q : item) {
      if (q.size() != total.size())
        throw std::invalid_argument("class_prior: class count mismatch");
      for (std::size_t c = 0; c < total.size(); ++c) total[c] += q[c];
      positions += 1.0;
    }
  if (positions == 0.0) return LabelDistribution::uniform(num_classes);
  return LabelDistribution::normalized(total);
}

double annotation_log_likelihood(const CrowdDataset& dataset,
                                 const LabelDistribution& prior,
                                 const std::vector<ConfusionMatrix>& confusions) {
  if (prior.size() != static_cast<std::size_t>(dataset.num_classes))
    throw std::invalid_argument("annotation_log_likelihood: prior size mismatch");
  const auto K = static_cast<std::size_t>(dataset.num_classes);
  double total = 0.0;
  for (const Instance& instance : dataset.instances) {
    if (instance.annotations.empty()) continue;
    const std::size_t positions = positions_of(dataset, instance);
    for (std::size_t t = 0; t < positions; ++t) {
      std::vector<double> log_joint(K);
      for (std::size_t c = 0; c < K; ++c) {
        const double p = prior[c];
        log_joint[c] = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
      }
      for (const auto& [annotator, labels] : instance.annotations) {
        const ConfusionMatrix& pi = confusions[static_cast<std::size_t>(annotator)];
        for (std::size_t c = 0; c < K; ++c)
          log_joint[c] += std::log(pi.at(c, static_cast<std::size_t>(labels[t])));
      }
      double top = log_joint[0];
      for (double v : log_joint) top = std::max(top, v);
      double acc = 0.0;
      for (double v : log_joint) acc += std::exp(v - top);
      total += top + std::log(acc);
    }
  }
  return total;
}

double annotation_log_likelihood(const CrowdDataset& dataset,
                                 const PosteriorSet& priors,
                                 const std::vector<ConfusionMatrix>& confusions) {
  check_aligned(priors, dataset);
  const auto K = static_cast<std::size_t>(dataset.num_classes);
  double total = 0.0;
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const Instance& instance = dataset.instances[i];
    if (instance.annotations.empty()) continue;
    for (std::size_t t = 0; t < priors.items[i].size(); ++t) {
      std::vector<double> log_joint(K);
      for (std::size_t c = 0; c < K; ++c) {
        const double p = priors.items[i][t][c];
        log_joint[c] = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
      }
      for (const auto& [annotator, labels] : instance.annotations) {
        const ConfusionMatrix& pi = confusions[static_cast<std::size_t>(annotator)];
        for (std::size_t c = 0; c < K; ++c)
          log_joint[c] += std::log(pi.at(c, static_cast<std::size_t>(labels[t])));
      }
      double top = log_joint[0];
      for (double v : log_joint) top = std::max(top, v);
      double acc = 0.0;
      for (double v : log_joint) acc += std::exp(v - top);
      total += top + std::log(acc);
    }
  }
  return total;
}

DawidSkeneResult dawid_skene(const CrowdDataset& dataset,
                             const DawidSkeneOptions& options) {
  if (options.max_iterations < 1)
    throw std::invalid_argument("dawid_skene: max_iterations must be >= 1");
  DawidSkeneResult result;
  result.posteriors = majority_vote(dataset);
  result.prior = class_prior(result.posteriors, dataset.num_classes);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.confusions = update_confusions(dataset, result.posteriors, options.epsilon);
    result.prior = class_prior(result.posteriors, dataset.num_classes);

    // Broadcast the class prior to every position, then take the Bayes step.
    PosteriorSet priors;
    priors.items.reserve(dataset.instances.size());
    for (const Instance& instance : dataset.instances)
      priors.items.emplace_back(positions_of(dataset, instance), result.prior);
    PosteriorSet next = compute_qa(dataset, priors, result.confusions);

    double delta = 0.0;
    for (std::size_t i = 0; i < next.items.size(); ++i)
      for (std::size_t t = 0; t < next.items[i].size(); ++t)
        for (std::size_t c = 0; c < next.items[i][t].size(); ++c)
          delta = std::max(delta, std::abs(next.items[i][t][c] -
                                           result.posteriors.items[i][t][c]));
    result.posteriors = std::move(next);
    result.iterations = iter;
    if (delta < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.log_likelihood =
      annotation_log_likelihood(dataset, result.prior, result.confusions);
  return result;
}

}  // namespace lncl
