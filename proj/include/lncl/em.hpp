// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lncl/classifier.hpp"
#include "lncl/dataset.hpp"
#include "lncl/distribution.hpp"
#include "lncl/task_rules.hpp"
#include "lncl/truth_inference.hpp"

namespace lncl {

/// Rule wiring for training and teacher inference.
struct RuleConfig {
  double rule_strength = 5.0;  // multiplier applied to every rule penalty

  // Classification: the "A but B" template (binary tasks only).
  bool enable_but_rules = false;
  std::string but_trigger = "but";
  std::string positive_label = "positive";
  double but_w_pos = 1.0;
  double but_w_neg = 1.0;

  // Sequence: pairwise transition penalties; all-zero means no rules.
  TransitionRuleSet transitions;

  bool has_rules() const {
    return enable_but_rules || !transitions.empty();
  }
};

struct EpochInfo {
  int epoch = 0;  // 1-based, reported after the epoch completes
  double k = 0.0;
  double learning_rate = 0.0;
  double batch_loss_sum = 0.0;
  double log_likelihood = 0.0;  // annotations under classifier prior + confusions
};

/// Observation points for instrumentation; all optional. Within an epoch the
/// engine fires every on_batch first, then on_confusions, then on_posteriors,
/// then on_epoch_end.
struct TrainHooks {
  std::function<void(int epoch, int batch_index, double batch_loss)> on_batch;
  std::function<void(int epoch, const std::vector<ConfusionMatrix>&)> on_confusions;
  std::function<void(int epoch, const PosteriorSet& qa, const PosteriorSet& qb,
                     const PosteriorSet& qf)>
      on_posteriors;
  std::function<void(const EpochInfo&)> on_epoch_end;
};

struct TrainConfig {
  ClassifierConfig classifier;
  TrainingSchedule schedule;
  RuleConfig rules;
  bool weighted_loss = false;      // weight each instance by its annotator count
  double smoothing_epsilon = 0.01; // confusion-update smoothing
  std::uint64_t seed = 1;          // parameter init + batch shuffling
  TrainHooks hooks;
};

struct TrainResult {
  ClassifierParams params;
  std::vector<ConfusionMatrix> confusions;
  PosteriorSet qf, qa, qb;
  int epochs_run = 0;
  int best_epoch = 0;
  double best_log_likelihood = 0.0;
  std::vector<double> epoch_log_likelihoods;
  bool stopped_early = false;
};

/// Alternating training loop. Starting from q_f = majority vote, each epoch
///   1. fits the classifier to the current q_f by mini-batch SGD,
///   2. re-estimates annotator confusions from q_f,
///   3. recomputes the annotation posterior q_a under the classifier prior,
///   4. projects q_a onto the rules to get q_b,
///   5. blends q_f = q_a + k(t) * (q_b - q_a).
/// With patience > 0 the run stops after that many epochs without improving
/// the annotation log likelihood and the best-epoch state is returned;
/// patience <= 0 disables early stopping and returns the final state.
TrainResult train(const CrowdDataset& dataset, const TrainConfig& config);

/// Classifier-only predictions for every position of every instance.
PosteriorSet infer_student(const ClassifierParams& params, const CrowdDataset& dataset);

/// Full posterior inference: Bayes-combine predictions with any annotations
/// present, project onto the rules, and blend with imitation strength k.
PosteriorSet infer_teacher(const ClassifierParams& params,
                           const std::vector<ConfusionMatrix>& confusions,
                           const CrowdDataset& dataset, const RuleConfig& rules,
                           double k);

}  // namespace lncl
