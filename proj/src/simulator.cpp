// SPDX-License-Identifier: Apache-2.0
#include "lncl/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "lncl/rng.hpp"

namespace lncl {

namespace {

void check_config(const SimulatorConfig& c) {
  if (c.num_instances < 1) throw std::invalid_argument("simulate: num_instances < 1");
  if (c.num_annotators < 1) throw std::invalid_argument("simulate: num_annotators < 1");
  if (c.reliability_lo > c.reliability_hi || c.reliability_lo < 0.0 ||
      c.reliability_hi > 1.0)
    throw std::invalid_argument("simulate: bad reliability range");
  if (c.mean_labels_per_instance <= 0.0 ||
      c.mean_labels_per_instance > static_cast<double>(c.num_annotators))
    throw std::invalid_argument("simulate: mean_labels_per_instance out of range");
  if (c.min_labels_per_instance < 0 || c.min_labels_per_instance > c.num_annotators)
    throw std::invalid_argument("simulate: min_labels_per_instance out of range");
  if (c.but_fraction < 0.0 || c.but_fraction > 1.0)
    throw std::invalid_argument("simulate: but_fraction outside [0,1]");
  if (c.token_noise < 0.0 || c.token_noise >= 1.0)
    throw std::invalid_argument("simulate: token_noise outside [0,1)");
  if (c.vocab_per_class < 1) throw std::invalid_argument("simulate: empty vocab");
  if (c.task_kind == TaskKind::classification && c.num_classes < 2)
    throw std::invalid_argument("simulate: classification needs >= 2 classes");
  if (c.task_kind == TaskKind::sequence && c.entity_types.empty())
    throw std::invalid_argument("simulate: sequences need at least one entity type");
  if (c.entity_start_prob < 0.0 || c.entity_start_prob >= 1.0)
    throw std::invalid_argument("simulate: entity_start_prob outside [0,1)");
}

std::vector<std::string> classification_labels(int k) {
  if (k == 2) return {"negative", "positive"};
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) names.push_back("class_" + std::to_string(c));
  return names;
}

// A content token for class `gold`, flipped to a random other class's pool
// with probability `noise` (inverted = draw mostly from the wrong pools, used
// for the contrastive clause in but-structures).
std::string content_token(Rng& rng, const SimulatorConfig& c, int gold, bool inverted) {
  int pool = gold;
  const bool flip = rng.bernoulli(c.token_noise) != inverted;
  if (flip && c.num_classes > 1) {
    pool = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.num_classes - 1)));
    if (pool >= gold) ++pool;
  }
  const auto word = rng.below(static_cast<std::uint64_t>(c.vocab_per_class));
  return "w" + std::to_string(pool) + "_" + std::to_string(word);
}

void assign_annotators(Rng& rng, const SimulatorConfig& c, Instance& instance,
                       std::size_t positions,
                       const std::vector<ConfusionMatrix>& confusions,
                       const std::vector<int>& gold) {
  const double p = c.mean_labels_per_instance / static_cast<double>(c.num_annotators);
  std::vector<int> chosen;
  for (int j = 0; j < c.num_annotators; ++j)
    if (rng.bernoulli(p)) chosen.push_back(j);
  while (std::ssize(chosen) < c.min_labels_per_instance) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.num_annotators)));
    bool seen = false;
    for (int k : chosen) seen = seen || k == j;
    if (!seen) chosen.push_back(j);
  }
  for (int j : chosen) {
    const ConfusionMatrix& pi = confusions[static_cast<std::size_t>(j)];
    std::vector<int> reported(positions);
    for (std::size_t t = 0; t < positions; ++t) {
      std::vector<double> row(pi.size());
      for (std::size_t k = 0; k < pi.size(); ++k)
        row[k] = pi.at(static_cast<std::size_t>(gold[t]), k);
      reported[t] = static_cast<int>(rng.categorical(row));
    }
    instance.annotations.emplace(j, std::move(reported));
  }
}

}  // namespace

SimulatedCrowd simulate(const SimulatorConfig& config) {
  check_config(config);
  Rng rng(config.seed);
  SimulatedCrowd out;

  out.reliabilities.reserve(static_cast<std::size_t>(config.num_annotators));
  out.true_confusions.reserve(static_cast<std::size_t>(config.num_annotators));

  CrowdDataset& data = out.dataset;
  data.task_kind = config.task_kind;
  data.num_annotators = config.num_annotators;
  if (config.task_kind == TaskKind::classification) {
    data.num_classes = config.num_classes;
    data.label_names = classification_labels(config.num_classes);
  } else {
    data.label_names = {"O"};
    for (const std::string& type : config.entity_types) {
      data.label_names.push_back("B-" + type);
      data.label_names.push_back("I-" + type);
    }
    data.num_classes = static_cast<int>(data.label_names.size());
  }

  for (int j = 0; j < config.num_annotators; ++j) {
    const double r = rng.uniform(config.reliability_lo, config.reliability_hi);
    out.reliabilities.push_back(r);
    out.true_confusions.push_back(ConfusionMatrix::diagonal(static_cast<std::size_t>(data.num_classes), r));
  }

  data.instances.reserve(static_cast<std::size_t>(config.num_instances));
  for (int i = 0; i < config.num_instances; ++i) {
    Instance instance;
    instance.id = "s" + std::to_string(i);
    std::vector<int> gold;

    if (config.task_kind == TaskKind::classification) {
      const int label = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.num_classes)));
      gold = {label};
      const bool grounded = config.num_classes == 2 && rng.bernoulli(config.but_fraction);
      if (grounded) {
        // Contrastive head pulls toward the wrong class; the clause after
        // "but" carries the real signal.
        const auto head_len = 2 + rng.below(3);   // 2..4
        const auto tail_len = 4 + rng.below(5);   // 4..8
        for (std::uint64_t t = 0; t < head_len; ++t)
          instance.tokens.push_back(content_token(rng, config, label, true));
        instance.tokens.push_back("but");
        for (std::uint64_t t = 0; t < tail_len; ++t)
          instance.tokens.push_back(content_token(rng, config, label, false));
        out.grounded_instances.push_back(static_cast<std::size_t>(i));
      } else {
        const auto len = 4 + rng.below(5);  // 4..8
        for (std::uint64_t t = 0; t < len; ++t)
          instance.tokens.push_back(content_token(rng, config, label, false));
      }
    } else {
      const auto len = 5 + rng.below(8);  // 5..12 tokens
      std::size_t t = 0;
      while (t < len) {
        if (rng.bernoulli(config.entity_start_prob)) {
          const auto type_index = rng.below(config.entity_types.size());
          const std::string& type = config.entity_types[type_index];
          const int begin_tag = data.label_index("B-" + type);
          const int inside_tag = data.label_index("I-" + type);
          const auto span_len = std::min<std::uint64_t>(1 + rng.below(3), len - t);
          for (std::uint64_t s = 0; s < span_len; ++s) {
            const auto word = rng.below(static_cast<std::uint64_t>(config.vocab_per_class));
            instance.tokens.push_back(
                (s == 0 ? "E" : "e") + type + std::to_string(word));
            gold.push_back(s == 0 ? begin_tag : inside_tag);
            ++t;
          }
        } else {
          const auto word = rng.below(static_cast<std::uint64_t>(config.vocab_per_class));
          instance.tokens.push_back("o" + std::to_string(word));
          gold.push_back(0);
          ++t;
        }
      }
    }

    assign_annotators(rng, config, instance,
                      config.task_kind == TaskKind::classification ? 1 : gold.size(),
                      out.true_confusions, gold);
    instance.gold = std::move(gold);
    data.instances.push_back(std::move(instance));
  }
  return out;
}

RecoveryScores score_recovery(const std::vector<ConfusionMatrix>& estimated,
                              const std::vector<ConfusionMatrix>& truth) {
  if (estimated.size() != truth.size() || estimated.empty())
    throw std::invalid_argument("score_recovery: annotator count mismatch");
  RecoveryScores scores;
  double cells = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (estimated[j].size() != truth[j].size())
      throw std::invalid_argument("score_recovery: class count mismatch");
    const std::size_t k = truth[j].size();
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t r = 0; r < k; ++r) {
        scores.confusion_mae += std::abs(estimated[j].at(c, r) - truth[j].at(c, r));
        cells += 1.0;
      }
    scores.reliability_mae +=
        std::abs(estimated[j].mean_diagonal() - truth[j].mean_diagonal());
  }
  scores.confusion_mae /= cells;
  scores.reliability_mae /= static_cast<double>(truth.size());
  return scores;
}

}  // namespace lncl
