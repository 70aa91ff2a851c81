// SPDX-License-Identifier: Apache-2.0
#include "lncl/em.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>

#include "lncl/projection.hpp"
#include "lncl/rng.hpp"

namespace lncl {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;

struct Grounded {
  std::optional<ButGrounding> but;
  FeatureVector clause_features;  // clause-B bag, valid only when `but` is set
};

void check_rule_config(const CrowdDataset& dataset, const RuleConfig& rules) {
  if (rules.rule_strength < 0.0)
    throw std::invalid_argument("rules: rule_strength must be >= 0");
  if (rules.enable_but_rules) {
    if (dataset.task_kind != TaskKind::classification || dataset.num_classes != 2)
      throw std::invalid_argument(
          "rules: the but-template needs a binary classification task");
    if (dataset.label_index(rules.positive_label) < 0)
      throw std::invalid_argument("rules: positive_label '" + rules.positive_label +
                                  "' is not in the label inventory");
    if (rules.but_w_pos < 0.0 || rules.but_w_neg < 0.0)
      throw std::invalid_argument("rules: but-rule weights must be >= 0");
  }
  if (!rules.transitions.penalty.empty() && dataset.task_kind != TaskKind::sequence)
    throw std::invalid_argument("rules: transition rules need a sequence task");
}

std::vector<Grounded> prepare_groundings(const CrowdDataset& dataset,
                                         const RuleConfig& rules,
                                         std::uint32_t feature_dim) {
  std::vector<Grounded> out(dataset.instances.size());
  if (!rules.enable_but_rules) return out;
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const Instance& instance = dataset.instances[i];
    auto g = ground_but_rule(instance, rules.but_trigger);
    if (!g) continue;
    g->w_pos = rules.but_w_pos;
    g->w_neg = rules.but_w_neg;
    out[i].clause_features = featurize_text(
        std::span(instance.tokens).subspan(g->clause_begin, g->clause_end - g->clause_begin),
        feature_dim);
    out[i].but = std::move(g);
  }
  return out;
}

PosteriorSet predict_all(const ClassifierParams& params,
                         const std::vector<std::vector<FeatureVector>>& features) {
  PosteriorSet out;
  out.items.reserve(features.size());
  for (const auto& instance_features : features) {
    std::vector<LabelDistribution> qs;
    qs.reserve(instance_features.size());
    for (const FeatureVector& fv : instance_features) qs.push_back(predict(params, fv));
    out.items.push_back(std::move(qs));
  }
  return out;
}

/// The projection step: q_a -> q_b under the configured rules. Instances
/// without an applicable grounding keep q_a unchanged.
PosteriorSet apply_rules(const CrowdDataset& dataset, const ClassifierParams& params,
                         const RuleConfig& rules, const PosteriorSet& qa,
                         const std::vector<Grounded>& groundings) {
  if (!rules.has_rules() || rules.rule_strength == 0.0) return qa;
  PosteriorSet qb;
  qb.items.reserve(qa.items.size());
  if (dataset.task_kind == TaskKind::sequence) {
    for (const auto& qa_seq : qa.items)
      qb.items.push_back(
          project_sequence(qa_seq, rules.transitions, rules.rule_strength));
    return qb;
  }
  const auto positive_index =
      static_cast<std::size_t>(dataset.label_index(rules.positive_label));
  for (std::size_t i = 0; i < qa.items.size(); ++i) {
    if (!groundings[i].but) {
      qb.items.push_back(qa.items[i]);
      continue;
    }
    const LabelDistribution clause_pred = predict(params, groundings[i].clause_features);
    const std::vector<WeightedRuleValues> instance_rules =
        but_projection_rules(*groundings[i].but, clause_pred, positive_index);
    qb.items.push_back(
        {project_classification(qa.items[i][0], instance_rules, rules.rule_strength)});
  }
  return qb;
}

PosteriorSet mix_all(const PosteriorSet& qa, const PosteriorSet& qb, double k) {
  PosteriorSet qf;
  qf.items.reserve(qa.items.size());
  for (std::size_t i = 0; i < qa.items.size(); ++i) {
    std::vector<LabelDistribution> qs;
    qs.reserve(qa.items[i].size());
    for (std::size_t t = 0; t < qa.items[i].size(); ++t)
      qs.push_back(mix_targets(qa.items[i][t], qb.items[i][t], k));
    qf.items.push_back(std::move(qs));
  }
  return qf;
}

}  // namespace

TrainResult train(const CrowdDataset& dataset, const TrainConfig& config) {
  if (dataset.instances.empty()) throw std::invalid_argument("train: empty dataset");
  if (config.schedule.max_epochs < 1)
    throw std::invalid_argument("train: max_epochs must be >= 1");
  if (config.schedule.batch_size < 1)
    throw std::invalid_argument("train: batch_size must be >= 1");
  if (config.classifier.num_classes != dataset.num_classes)
    throw std::invalid_argument("train: classifier class count != dataset classes");
  if (const auto violations = validate(dataset); !violations.empty())
    throw std::invalid_argument("train: invalid dataset: " + violations.front());
  check_rule_config(dataset, config.rules);

  std::vector<std::vector<FeatureVector>> features;
  features.reserve(dataset.instances.size());
  for (const Instance& instance : dataset.instances)
    features.push_back(
        featurize(instance, dataset.task_kind, config.classifier.feature_dim));
  const std::vector<Grounded> groundings =
      prepare_groundings(dataset, config.rules, config.classifier.feature_dim);

  TrainResult result;
  result.params = init_params(config.classifier, derive_seed(config.seed, kInitStream));
  Rng shuffle_rng(derive_seed(config.seed, kShuffleStream));

  result.qf = majority_vote(dataset);
  Gradients grad = make_gradients(result.params);

  // Early-stopping bookkeeping: snapshot of the best epoch by annotation
  // log likelihood.
  TrainResult best;
  double best_ll = -std::numeric_limits<double>::infinity();
  int stale_epochs = 0;

  std::vector<std::size_t> order(dataset.instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.schedule.max_epochs; ++epoch) {
    const double lr = effective_learning_rate(config.schedule, epoch - 1);

    // 1. Fit the classifier to the current q_f, one shuffled pass.
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    int batch_index = 0;
    const auto B = static_cast<std::size_t>(config.schedule.batch_size);
    for (std::size_t start = 0; start < order.size(); start += B) {
      const std::size_t stop = std::min(order.size(), start + B);
      std::vector<TrainItem> batch;
      batch.reserve(stop - start);
      for (std::size_t pos = start; pos < stop; ++pos) {
        const std::size_t i = order[pos];
        const double weight =
            config.weighted_loss
                ? static_cast<double>(dataset.instances[i].annotations.size())
                : 1.0;
        for (std::size_t t = 0; t < features[i].size(); ++t)
          batch.push_back({&features[i][t], &result.qf.items[i][t], weight});
      }
      const double batch_loss = loss_and_grad(result.params, batch, grad);
      sgd_step(result.params, grad, lr, static_cast<int>(stop - start));
      epoch_loss += batch_loss;
      if (config.hooks.on_batch) config.hooks.on_batch(epoch, batch_index, batch_loss);
      ++batch_index;
    }

    // 2. Re-estimate annotator confusions from the same q_f.
    result.confusions =
        update_confusions(dataset, result.qf, config.smoothing_epsilon);
    if (config.hooks.on_confusions) config.hooks.on_confusions(epoch, result.confusions);

    // 3.-5. Posterior, projection, blend.
    const PosteriorSet predictions = predict_all(result.params, features);
    result.qa = compute_qa(dataset, predictions, result.confusions);
    result.qb = apply_rules(dataset, result.params, config.rules, result.qa, groundings);
    const double k = imitation_k(config.schedule, epoch);
    result.qf = mix_all(result.qa, result.qb, k);
    if (config.hooks.on_posteriors)
      config.hooks.on_posteriors(epoch, result.qa, result.qb, result.qf);

    const double ll =
        annotation_log_likelihood(dataset, predictions, result.confusions);
    result.epochs_run = epoch;
    result.epoch_log_likelihoods.push_back(ll);
    if (config.hooks.on_epoch_end)
      config.hooks.on_epoch_end({epoch, k, lr, epoch_loss, ll});

    if (ll > best_ll) {
      best_ll = ll;
      best = result;
      best.best_epoch = epoch;
      stale_epochs = 0;
    } else {
      ++stale_epochs;
      if (config.schedule.patience > 0 && stale_epochs >= config.schedule.patience) {
        result.stopped_early = true;
        break;
      }
    }
  }

  result.best_epoch = best.best_epoch;
  result.best_log_likelihood = best_ll;
  if (config.schedule.patience > 0) {
    // Restore the best snapshot but keep the full run's bookkeeping.
    best.epochs_run = result.epochs_run;
    best.epoch_log_likelihoods = result.epoch_log_likelihoods;
    best.stopped_early = result.stopped_early;
    best.best_log_likelihood = best_ll;
    return best;
  }
  return result;
}

PosteriorSet infer_student(const ClassifierParams& params, const CrowdDataset& dataset) {
  std::vector<std::vector<FeatureVector>> features;
  features.reserve(dataset.instances.size());
  for (const Instance& instance : dataset.instances)
    features.push_back(
        featurize(instance, dataset.task_kind, params.config.feature_dim));
  return predict_all(params, features);
}

PosteriorSet infer_teacher(const ClassifierParams& params,
                           const std::vector<ConfusionMatrix>& confusions,
                           const CrowdDataset& dataset, const RuleConfig& rules,
                           double k) {
  if (const auto violations = validate(dataset); !violations.empty())
    throw std::invalid_argument("infer_teacher: invalid dataset: " + violations.front());
  check_rule_config(dataset, rules);
  const PosteriorSet predictions = infer_student(params, dataset);
  const PosteriorSet qa = compute_qa(dataset, predictions, confusions);
  const std::vector<Grounded> groundings =
      prepare_groundings(dataset, rules, params.config.feature_dim);
  const PosteriorSet qb = apply_rules(dataset, params, rules, qa, groundings);
  return mix_all(qa, qb, k);
}

}  // namespace lncl
