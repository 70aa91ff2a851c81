// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "lncl/em.hpp"
#include "lncl/task_rules.hpp"
#include "lncl/truth_inference.hpp"

using namespace lncl;

namespace {

Instance make_instance(std::string id, std::vector<std::string> tokens,
                       std::map<int, std::vector<int>> annotations) {
  Instance inst;
  inst.id = std::move(id);
  inst.tokens = std::move(tokens);
  inst.annotations = std::move(annotations);
  return inst;
}

// Eight binary sentiment instances over three annotators; half contain a
// contrastive "but" clause.
CrowdDataset sentiment_fixture() {
  CrowdDataset data;
  data.task_kind = TaskKind::classification;
  data.num_classes = 2;
  data.num_annotators = 3;
  data.label_names = {"negative", "positive"};
  data.instances = {
      make_instance("r0", {"dull", "slow", "plot"}, {{0, {0}}, {1, {0}}}),
      make_instance("r1", {"great", "fun", "cast"}, {{0, {1}}, {2, {1}}}),
      make_instance("r2", {"slow", "start", "but", "great", "finish"},
                    {{0, {1}}, {1, {0}}, {2, {1}}}),
      make_instance("r3", {"nice", "idea", "but", "dull", "film"},
                    {{1, {0}}, {2, {0}}}),
      make_instance("r4", {"great", "cast"}, {{0, {1}}}),
      make_instance("r5", {"dull", "film"}, {{1, {0}}, {2, {0}}}),
      make_instance("r6", {"fun", "plot", "but", "slow", "pace"}, {{0, {0}}, {2, {1}}}),
      make_instance("r7", {"great", "movie"}, {{1, {1}}, {2, {1}}}),
  };
  return data;
}

TrainConfig small_config() {
  TrainConfig config;
  config.classifier.feature_dim = 1u << 10;
  config.classifier.num_classes = 2;
  config.schedule.max_epochs = 4;
  config.schedule.batch_size = 4;
  config.schedule.learning_rate = 0.5;
  config.schedule.patience = 0;
  config.seed = 5;
  return config;
}

}  // namespace

TEST_CASE("hooks fire in batch, confusions, posteriors, epoch order") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  config.schedule.max_epochs = 2;

  std::vector<std::string> events;
  config.hooks.on_batch = [&](int epoch, int batch, double) {
    events.push_back("b" + std::to_string(epoch) + "." + std::to_string(batch));
  };
  config.hooks.on_confusions = [&](int epoch, const std::vector<ConfusionMatrix>& pis) {
    CHECK(pis.size() == 3);
    events.push_back("c" + std::to_string(epoch));
  };
  config.hooks.on_posteriors = [&](int epoch, const PosteriorSet&, const PosteriorSet&,
                                   const PosteriorSet&) {
    events.push_back("p" + std::to_string(epoch));
  };
  config.hooks.on_epoch_end = [&](const EpochInfo& info) {
    events.push_back("e" + std::to_string(info.epoch));
  };

  train(data, config);
  // 8 instances / batch 4 = 2 batches per epoch
  const std::vector<std::string> expected = {"b1.0", "b1.1", "c1", "p1", "e1",
                                             "b2.0", "b2.1", "c2", "p2", "e2"};
  CHECK(events == expected);
}

TEST_CASE("the first confusion update comes from majority vote") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  config.schedule.max_epochs = 1;

  std::vector<ConfusionMatrix> seen;
  config.hooks.on_confusions = [&](int, const std::vector<ConfusionMatrix>& pis) {
    seen = pis;
  };
  train(data, config);

  auto expected = update_confusions(data, majority_vote(data), config.smoothing_epsilon);
  REQUIRE(seen.size() == expected.size());
  for (std::size_t j = 0; j < seen.size(); ++j) CHECK(seen[j] == expected[j]);
}

TEST_CASE("without rules every posterior collapses onto qa bit for bit") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  REQUIRE_FALSE(config.rules.has_rules());

  int epochs_checked = 0;
  config.hooks.on_posteriors = [&](int, const PosteriorSet& qa, const PosteriorSet& qb,
                                   const PosteriorSet& qf) {
    CHECK(qb == qa);
    CHECK(qf == qa);
    ++epochs_checked;
  };
  TrainResult result = train(data, config);
  CHECK(epochs_checked == 4);
  CHECK(result.qf == result.qa);
  CHECK(result.qb == result.qa);
}

TEST_CASE("epoch info reports the schedule state") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  config.schedule.decay_every = 2;
  config.schedule.decay_factor = 0.5;
  config.schedule.alpha = 0.9;
  config.schedule.k_max = 0.8;

  std::vector<EpochInfo> infos;
  config.hooks.on_epoch_end = [&](const EpochInfo& info) { infos.push_back(info); };
  TrainResult result = train(data, config);

  REQUIRE(infos.size() == 4);
  // epoch t trains with the post-(t-1) ramp and mixes with k(t)
  CHECK(infos[0].epoch == 1);
  CHECK(infos[0].k == doctest::Approx(1.0 - 0.9).epsilon(1e-12));
  CHECK(infos[1].k == doctest::Approx(1.0 - 0.81).epsilon(1e-12));
  CHECK(infos[3].k == doctest::Approx(std::min(0.8, 1.0 - 0.6561)).epsilon(1e-12));
  // lr decays on the 0-based completed-epoch count
  CHECK(infos[0].learning_rate == doctest::Approx(0.5));
  CHECK(infos[1].learning_rate == doctest::Approx(0.5));
  CHECK(infos[2].learning_rate == doctest::Approx(0.25));
  CHECK(infos[3].learning_rate == doctest::Approx(0.25));
  for (const EpochInfo& info : infos)
    CHECK(std::isfinite(info.log_likelihood));
  CHECK(result.epoch_log_likelihoods.size() == 4);
  CHECK(result.epoch_log_likelihoods[3] == infos[3].log_likelihood);
}

TEST_CASE("training is deterministic in the seed") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  TrainResult a = train(data, config);
  TrainResult b = train(data, config);
  CHECK(a.params == b.params);
  CHECK(a.qf == b.qf);
  CHECK(a.epoch_log_likelihoods == b.epoch_log_likelihoods);

  config.seed = 6;
  TrainResult c = train(data, config);
  CHECK_FALSE(a.params == c.params);
}

TEST_CASE("but rules push grounded posteriors toward the trailing clause") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  config.schedule.max_epochs = 6;
  config.rules.enable_but_rules = true;
  config.rules.rule_strength = 5.0;

  PosteriorSet last_qa, last_qb;
  config.hooks.on_posteriors = [&](int, const PosteriorSet& qa, const PosteriorSet& qb,
                                   const PosteriorSet&) {
    last_qa = qa;
    last_qb = qb;
  };
  TrainResult result = train(data, config);

  // r2 has a but-clause; its qb must differ from qa. r0 has none; untouched.
  CHECK_FALSE(last_qb.items[2][0] == last_qa.items[2][0]);
  CHECK(last_qb.items[0][0] == last_qa.items[0][0]);
  // the final blend stays between the two anchors componentwise
  for (std::size_t y = 0; y < 2; ++y) {
    const double lo = std::min(last_qa.items[2][0][y], last_qb.items[2][0][y]);
    const double hi = std::max(last_qa.items[2][0][y], last_qb.items[2][0][y]);
    CHECK(result.qf.items[2][0][y] >= lo - 1e-15);
    CHECK(result.qf.items[2][0][y] <= hi + 1e-15);
  }
}

TEST_CASE("patience zero runs to the horizon") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  TrainResult result = train(data, config);
  CHECK(result.epochs_run == 4);
  CHECK_FALSE(result.stopped_early);
  CHECK(result.best_epoch >= 1);
  CHECK(result.best_log_likelihood ==
        *std::max_element(result.epoch_log_likelihoods.begin(),
                          result.epoch_log_likelihoods.end()));
}

TEST_CASE("early stopping restores the best epoch") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  // a destructive learning rate makes the likelihood bounce around
  config.schedule.learning_rate = 400.0;
  config.schedule.max_epochs = 30;
  config.schedule.patience = 2;

  std::vector<ConfusionMatrix> best_confusions;
  std::vector<std::vector<ConfusionMatrix>> per_epoch;
  config.hooks.on_confusions = [&](int, const std::vector<ConfusionMatrix>& pis) {
    per_epoch.push_back(pis);
  };
  TrainResult result = train(data, config);

  const auto& lls = result.epoch_log_likelihoods;
  REQUIRE(static_cast<int>(lls.size()) == result.epochs_run);
  const std::size_t best_index =
      static_cast<std::size_t>(std::max_element(lls.begin(), lls.end()) - lls.begin());
  CHECK(result.best_epoch == static_cast<int>(best_index) + 1);
  CHECK(result.best_log_likelihood == doctest::Approx(lls[best_index]));
  if (result.stopped_early) {
    CHECK(result.epochs_run < 30);
    CHECK(result.epochs_run == result.best_epoch + 2);
  }
  // the returned confusions are the best epoch's, not the last
  REQUIRE(per_epoch.size() == static_cast<std::size_t>(result.epochs_run));
  for (std::size_t j = 0; j < result.confusions.size(); ++j)
    CHECK(result.confusions[j] == per_epoch[best_index][j]);
}

TEST_CASE("weighted loss changes the fitted parameters") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  TrainResult unweighted = train(data, config);
  config.weighted_loss = true;
  TrainResult weighted = train(data, config);
  CHECK_FALSE(unweighted.params == weighted.params);
}

TEST_CASE("rule configuration is validated against the task") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();

  config.rules.enable_but_rules = true;
  config.rules.positive_label = "sunny";  // not in the label set
  CHECK_THROWS_AS(train(data, config), std::invalid_argument);

  config.rules.positive_label = "positive";
  config.rules.transitions = build_transition_rules({"negative", "positive"},
                                                    {{"negative", "positive", 0.5}});
  CHECK_THROWS_AS(train(data, config), std::invalid_argument);  // transitions need sequences
}

TEST_CASE("train rejects invalid datasets") {
  CrowdDataset data = sentiment_fixture();
  data.instances[0].annotations[7] = {0};  // annotator out of range
  CHECK_THROWS_AS(train(data, small_config()), std::invalid_argument);
}

TEST_CASE("student inference matches direct prediction and teacher blends") {
  CrowdDataset data = sentiment_fixture();
  TrainConfig config = small_config();
  TrainResult result = train(data, config);

  PosteriorSet student = infer_student(result.params, data);
  REQUIRE(student.items.size() == data.instances.size());
  for (const auto& item : student.items) REQUIRE(item.size() == 1);

  // teacher with k = 0 and no rules is exactly the annotation posterior
  RuleConfig no_rules;
  PosteriorSet teacher0 = infer_teacher(result.params, result.confusions, data, no_rules, 0.0);
  PosteriorSet qa = compute_qa(data, student, result.confusions);
  CHECK(teacher0 == qa);

  // with but rules and k = 1 the grounded instances move
  RuleConfig but;
  but.enable_but_rules = true;
  but.rule_strength = 5.0;
  PosteriorSet teacher1 = infer_teacher(result.params, result.confusions, data, but, 1.0);
  CHECK_FALSE(teacher1.items[2][0] == qa.items[2][0]);
  CHECK(teacher1.items[0][0] == qa.items[0][0]);
}
