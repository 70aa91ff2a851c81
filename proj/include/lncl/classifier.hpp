// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lncl/dataset.hpp"
#include "lncl/distribution.hpp"

namespace lncl {

/// Sparse feature vector over a hashed feature space; entries are sorted by
/// index and unique.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool operator==(const FeatureVector&) const = default;
};

/// Hashed unigram+bigram bag over a token span. Compositional: featurizing a
/// sub-span equals featurizing the same tokens as a standalone text.
FeatureVector featurize_text(std::span<const std::string> tokens, std::uint32_t dim);

/// Per-token window features (identity, lowercase form, shape flags,
/// neighbors at +-1 and +-2) for sequence tasks.
std::vector<FeatureVector> featurize_sequence(const std::vector<std::string>& tokens,
                                              std::uint32_t dim);

/// Task dispatch: classification yields one vector, sequence one per token.
std::vector<FeatureVector> featurize(const Instance& instance, TaskKind kind,
                                     std::uint32_t dim);

enum class Activation { tanh_fn, relu };

struct ClassifierConfig {
  std::uint32_t feature_dim = 1u << 18;
  int num_classes = 2;
  int hidden_width = 0;  // 0 = linear softmax model
  Activation activation = Activation::tanh_fn;
  double init_scale = 0.05;  // weights start uniform in [-init_scale, init_scale]

  bool operator==(const ClassifierConfig&) const = default;
};

/// Softmax model with at most one hidden layer. For the linear case w1 is the
/// K x D output matrix and w2/b2 are unused.
struct ClassifierParams {
  ClassifierConfig config;
  std::vector<double> w1;  // hidden x D (or K x D when linear), row-major
  std::vector<double> b1;  // hidden (or K)
  std::vector<double> w2;  // K x hidden; empty when linear
  std::vector<double> b2;  // K; empty when linear

  bool operator==(const ClassifierParams&) const = default;
};

ClassifierParams init_params(const ClassifierConfig& config, std::uint64_t seed);

/// Softmax output distribution. Throws on non-finite activations.
LabelDistribution predict(const ClassifierParams& params, const FeatureVector& features);

struct Gradients {
  std::vector<double> w1, b1, w2, b2;
};

Gradients make_gradients(const ClassifierParams& params);

/// One training item: features, a soft target distribution, and a loss weight.
struct TrainItem {
  const FeatureVector* features = nullptr;
  const LabelDistribution* target = nullptr;
  double weight = 1.0;
};

/// Summed weighted cross-entropy over the batch plus its gradient (written
/// into `grad`, which is zeroed first).
double loss_and_grad(const ClassifierParams& params, std::span<const TrainItem> batch,
                     Gradients& grad);

/// Mini-batch gradient descent update: theta <- theta - (lr / batch_size) * grad.
void sgd_step(ClassifierParams& params, const Gradients& grad, double learning_rate,
              int batch_size);

/// Epoch-indexed training schedule: the imitation-strength ramp
/// k(t) = min{k_max, 1 - alpha^t} plus optimizer bookkeeping.
struct TrainingSchedule {
  double k_max = 1.0;
  double alpha = 0.94;
  double learning_rate = 1.0;
  int batch_size = 50;
  int decay_every = 0;        // halving period in epochs; 0 disables decay
  double decay_factor = 0.5;
  int max_epochs = 30;
  int patience = 5;
};

double imitation_k(const TrainingSchedule& schedule, int epoch);

/// Learning rate in effect for the given 0-based epoch after decay.
double effective_learning_rate(const TrainingSchedule& schedule, int epoch);

}  // namespace lncl
