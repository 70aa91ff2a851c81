// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lncl/dataset.hpp"
#include "lncl/distribution.hpp"

namespace lncl {

/// Knobs for the synthetic crowd generator. Classification data uses two
/// sentiment-flavoured word pools and plants contrastive "A but B"
/// structures; sequence data emits BIO-consistent tag paths over a small
/// entity grammar. Annotators corrupt gold labels through diagonal confusion
/// matrices with reliabilities drawn uniformly from [reliability_lo,
/// reliability_hi].
struct SimulatorConfig {
  TaskKind task_kind = TaskKind::classification;
  int num_instances = 2000;
  int num_annotators = 10;
  int num_classes = 2;  // classification only; sequences derive K from entity_types
  double reliability_lo = 0.55;
  double reliability_hi = 0.90;
  // Each annotator labels each instance with probability
  // mean_labels_per_instance / num_annotators; instances that draw fewer than
  // min_labels_per_instance get annotators topped up at random.
  double mean_labels_per_instance = 3.0;
  int min_labels_per_instance = 1;
  double but_fraction = 0.3;   // share of classification instances with a but-structure
  double token_noise = 0.15;   // chance a content token comes from the wrong pool
  int vocab_per_class = 50;
  double entity_start_prob = 0.35;  // sequence only
  std::vector<std::string> entity_types = {"PER", "LOC"};
  std::uint64_t seed = 1;
};

struct SimulatedCrowd {
  CrowdDataset dataset;  // gold labels included
  std::vector<double> reliabilities;
  std::vector<ConfusionMatrix> true_confusions;
  // Classification: indices of instances carrying a planted but-structure.
  std::vector<std::size_t> grounded_instances;
};

SimulatedCrowd simulate(const SimulatorConfig& config);

struct RecoveryScores {
  double confusion_mae = 0.0;    // mean |pi_hat - pi| over annotators and cells
  double reliability_mae = 0.0;  // mean |diag-mean(pi_hat) - diag-mean(pi)|
};

RecoveryScores score_recovery(const std::vector<ConfusionMatrix>& estimated,
                              const std::vector<ConfusionMatrix>& truth);

}  // namespace lncl
