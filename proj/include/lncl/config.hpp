// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "lncl/dataset.hpp"
#include "lncl/em.hpp"
#include "lncl/toml.hpp"

namespace lncl {

/// Declarative run description: everything train/infer needs except the data
/// itself. Transition rules are kept in declaration form here because the
/// penalty matrix needs the dataset's label inventory; see finalize_rules.
struct RunConfig {
  std::string profile;  // "", "sentiment", or "ner"
  TaskSpec task;
  TrainConfig train;

  bool default_bio = false;  // add (B-X -> I-X) / (I-X -> I-X) rules per type
  double bio_w_begin = 0.8;
  double bio_w_inside = 0.2;
  std::vector<TransitionRule> extra_transitions;
};

/// Baseline defaults with no rules enabled.
RunConfig default_config();

/// Binary sentiment preset: ramp to full imitation (k_max 1, alpha 0.94),
/// contrastive-conjunction rules at strength 5, lr 1.0 halved every 5 epochs,
/// batches of 50, unweighted loss.
RunConfig sentiment_profile();

/// BIO tagging preset: capped imitation (k_max 0.8, alpha 0.90), default
/// transition rules at strength 5, lr 0.001 with no decay, batches of 64,
/// annotation-count-weighted loss.
RunConfig ner_profile();

/// Lookup by name; throws std::invalid_argument for unknown profiles.
RunConfig profile_by_name(const std::string& name);

/// Overlays a parsed TOML document onto `config`. Unknown keys are errors;
/// every recognized key overrides the corresponding field.
void apply_toml(RunConfig& config, const toml::Value::Table& doc);

/// Resolves declared transition rules against a concrete label inventory and
/// installs the penalty matrix into config.train.rules.
void finalize_rules(RunConfig& config, const std::vector<std::string>& label_names);

/// The effective configuration as a TOML document (full double precision);
/// written next to run outputs so results are reproducible from disk.
std::string render_config(const RunConfig& config);

}  // namespace lncl
