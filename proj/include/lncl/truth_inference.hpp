// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "lncl/dataset.hpp"
#include "lncl/distribution.hpp"

namespace lncl {

/// Per-instance posteriors over the true label(s). Classification instances
/// hold exactly one distribution, sequences one per token, aligned with
/// `CrowdDataset::instances`.
struct PosteriorSet {
  std::vector<std::vector<LabelDistribution>> items;

  bool operator==(const PosteriorSet&) const = default;
};

/// Shape-checks a posterior set against a dataset (same instance count,
/// matching per-token lengths, matching class counts). Throws on mismatch.
void check_aligned(const PosteriorSet& posteriors, const CrowdDataset& dataset);

/// Soft majority vote: vote-count fractions per label. Positions nobody
/// labeled get the uniform distribution.
PosteriorSet majority_vote(const CrowdDataset& dataset);

/// Confusion M-step with additive smoothing:
///   pi_j[c][k]  propto  sum over positions labeled k by j of q(c), plus
///   `epsilon` in every cell. Annotators with no labels fall back to the
/// smoothing-only (uniform) matrix.
std::vector<ConfusionMatrix> update_confusions(const CrowdDataset& dataset,
                                               const PosteriorSet& posteriors,
                                               double epsilon = 0.01);

/// Bayes posterior over true labels given per-position prior distributions
/// (a classifier's predictions, or a class prior broadcast everywhere) and
/// annotator confusions:
///   q_a(c)  propto  prior(c) * prod_j pi_j[c][y_j]
/// computed in log space. Unlabeled positions return the prior unchanged.
PosteriorSet compute_qa(const CrowdDataset& dataset, const PosteriorSet& priors,
                        const std::vector<ConfusionMatrix>& confusions);

/// Mean of all position posteriors; the class prior used by Dawid-Skene.
LabelDistribution class_prior(const PosteriorSet& posteriors, int num_classes);

/// Observed-data log likelihood of all annotations under a prior + confusion
/// model: sum over positions of log sum_c p(c) prod_j pi_j[c][y_j].
double annotation_log_likelihood(const CrowdDataset& dataset,
                                 const LabelDistribution& prior,
                                 const std::vector<ConfusionMatrix>& confusions);

/// Same likelihood with a separate prior at every position (e.g. classifier
/// predictions).
double annotation_log_likelihood(const CrowdDataset& dataset,
                                 const PosteriorSet& priors,
                                 const std::vector<ConfusionMatrix>& confusions);

struct DawidSkeneOptions {
  int max_iterations = 100;
  double tolerance = 1e-7;  // max abs posterior change between iterations
  double epsilon = 0.01;    // confusion smoothing
};

struct DawidSkeneResult {
  PosteriorSet posteriors;
  std::vector<ConfusionMatrix> confusions;
  LabelDistribution prior = LabelDistribution::uniform(1);
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Classic Dawid-Skene EM, initialized from majority vote. Sequences are
/// treated as independent positions sharing the prior and confusions.
DawidSkeneResult dawid_skene(const CrowdDataset& dataset,
                             const DawidSkeneOptions& options = {});

}  // namespace lncl
