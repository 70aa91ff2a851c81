// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "lncl/classifier.hpp"
#include "lncl/rng.hpp"

using namespace lncl;

namespace {

constexpr std::uint32_t kDim = 1u << 12;

double manual_loss(const ClassifierParams& params, const std::vector<TrainItem>& batch) {
  double loss = 0.0;
  for (const TrainItem& item : batch) {
    LabelDistribution p = predict(params, *item.features);
    for (std::size_t y = 0; y < p.size(); ++y) {
      if ((*item.target)[y] > 0.0)
        loss -= item.weight * (*item.target)[y] * std::log(std::max(p[y], 1e-300));
    }
  }
  return loss;
}

// Central finite difference through one parameter of the model.
double fd_gradient(ClassifierParams params, std::vector<double> ClassifierParams::*block,
                   std::size_t index, const std::vector<TrainItem>& batch, double h) {
  (params.*block)[index] += h;
  const double up = manual_loss(params, batch);
  (params.*block)[index] -= 2.0 * h;
  const double down = manual_loss(params, batch);
  return (up - down) / (2.0 * h);
}

}  // namespace

TEST_CASE("text features include the bias and are case-insensitive") {
  std::vector<std::string> tokens = {"Good", "Movie"};
  std::vector<std::string> lower = {"good", "movie"};
  FeatureVector a = featurize_text(tokens, kDim);
  FeatureVector b = featurize_text(lower, kDim);
  CHECK(a == b);
  REQUIRE_FALSE(a.entries.empty());
  // bias bucket present
  bool has_bias = false;
  for (const auto& [idx, val] : a.entries) has_bias = has_bias || idx == 0;
  CHECK(has_bias);
  // entries sorted and unique
  for (std::size_t i = 1; i < a.entries.size(); ++i)
    CHECK(a.entries[i - 1].first < a.entries[i].first);
}

TEST_CASE("text features are compositional over sub-spans") {
  std::vector<std::string> tokens = {"slow", "plot", "but", "great", "cast"};
  std::span<const std::string> clause(tokens.data() + 3, 2);
  FeatureVector from_span = featurize_text(clause, kDim);
  std::vector<std::string> standalone = {"great", "cast"};
  FeatureVector direct = featurize_text(standalone, kDim);
  CHECK(from_span == direct);
}

TEST_CASE("bigrams make token order matter") {
  std::vector<std::string> ab = {"alpha", "beta"};
  std::vector<std::string> ba = {"beta", "alpha"};
  CHECK_FALSE(featurize_text(ab, kDim) == featurize_text(ba, kDim));
}

TEST_CASE("sequence features are per token and window sensitive") {
  std::vector<std::string> tokens = {"Ann", "visited", "Paris", "42"};
  auto feats = featurize_sequence(tokens, kDim);
  REQUIRE(feats.size() == 4);
  for (std::size_t t = 1; t < feats.size(); ++t) CHECK_FALSE(feats[t] == feats[t - 1]);
  // same token, different neighbors -> different features
  auto other = featurize_sequence({"Ann", "left", "Paris", "42"}, kDim);
  CHECK_FALSE(feats[0] == other[0]);
  // dispatch matches the task kind
  Instance inst;
  inst.id = "x";
  inst.tokens = tokens;
  CHECK(featurize(inst, TaskKind::sequence, kDim).size() == 4);
  auto cls = featurize(inst, TaskKind::classification, kDim);
  REQUIRE(cls.size() == 1);
  CHECK(cls[0] == featurize_text(tokens, kDim));
}

TEST_CASE("parameter initialization is bounded, seeded, and shaped") {
  ClassifierConfig config;
  config.feature_dim = 64;
  config.num_classes = 3;
  config.init_scale = 0.05;

  ClassifierParams linear = init_params(config, 42);
  CHECK(linear.w1.size() == 3 * 64);
  CHECK(linear.b1.size() == 3);
  CHECK(linear.w2.empty());
  CHECK(linear.b2.empty());
  for (double w : linear.w1) {
    CHECK(w >= -0.05);
    CHECK(w <= 0.05);
  }
  CHECK(init_params(config, 42) == linear);
  CHECK_FALSE(init_params(config, 43) == linear);

  config.hidden_width = 8;
  ClassifierParams mlp = init_params(config, 42);
  CHECK(mlp.w1.size() == 8 * 64);
  CHECK(mlp.b1.size() == 8);
  CHECK(mlp.w2.size() == 3 * 8);
  CHECK(mlp.b2.size() == 3);

  config.init_scale = 0.0;
  ClassifierParams zeros = init_params(config, 7);
  for (double w : zeros.w1) CHECK(w == 0.0);
}

TEST_CASE("prediction is a softmax over linear scores") {
  ClassifierConfig config;
  config.feature_dim = 4;
  config.num_classes = 2;
  ClassifierParams params = init_params(config, 1);
  params.w1 = {0.5, -1.0, 0.0, 0.2,   // class 0 row
               -0.5, 1.0, 0.3, 0.0};  // class 1 row
  params.b1 = {0.1, -0.1};

  FeatureVector f;
  f.entries = {{1u, 2.0}, {3u, 1.0}};
  const double z0 = 0.1 + 0.5 * 0.0 + (-1.0) * 2.0 + 0.2 * 1.0;
  const double z1 = -0.1 + 1.0 * 2.0 + 0.0 * 1.0;
  LabelDistribution p = predict(params, f);
  const double e0 = std::exp(z0), e1 = std::exp(z1);
  CHECK(p[0] == doctest::Approx(e0 / (e0 + e1)).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(e1 / (e0 + e1)).epsilon(1e-12));

  // all-zero parameters predict uniform
  ClassifierConfig zero_cfg;
  zero_cfg.feature_dim = kDim;
  zero_cfg.num_classes = 5;
  zero_cfg.init_scale = 0.0;
  ClassifierParams zeros = init_params(zero_cfg, 1);
  LabelDistribution u = predict(zeros, featurize_text(std::vector<std::string>{"x"}, kDim));
  for (std::size_t y = 0; y < 5; ++y) CHECK(u[y] == doctest::Approx(0.2));
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(555);
  std::vector<std::string> texts[3] = {{"good", "fun"}, {"bad", "slow", "plot"}, {"fine"}};
  std::vector<FeatureVector> feats;
  for (const auto& text : texts) feats.push_back(featurize_text(text, 256));
  std::vector<LabelDistribution> targets = {LabelDistribution({0.9, 0.1}),
                                            LabelDistribution({0.2, 0.8}),
                                            LabelDistribution({0.5, 0.5})};
  std::vector<TrainItem> batch;
  for (std::size_t i = 0; i < 3; ++i)
    batch.push_back({&feats[i], &targets[i], i == 1 ? 3.0 : 1.0});  // mixed weights

  for (int hidden : {0, 6}) {
    ClassifierConfig config;
    config.feature_dim = 256;
    config.num_classes = 2;
    config.hidden_width = hidden;
    config.activation = Activation::tanh_fn;
    ClassifierParams params = init_params(config, 99);

    Gradients grad = make_gradients(params);
    const double loss = loss_and_grad(params, batch, grad);
    CHECK(loss == doctest::Approx(manual_loss(params, batch)).epsilon(1e-10));

    auto check_block = [&](std::vector<double> Gradients::*gblock,
                           std::vector<double> ClassifierParams::*pblock) {
      const std::size_t n = (params.*pblock).size();
      if (n == 0) return;
      for (int probe = 0; probe < 7; ++probe) {
        const std::size_t index = rng.below(n);
        const double analytic = (grad.*gblock)[index];
        const double numeric = fd_gradient(params, pblock, index, batch, 1e-6);
        if (std::abs(numeric) < 1e-8 && std::abs(analytic) < 1e-8) continue;
        CHECK(std::abs(analytic - numeric) / std::max(std::abs(numeric), 1e-8) <= 1e-4);
      }
    };
    check_block(&Gradients::w1, &ClassifierParams::w1);
    check_block(&Gradients::b1, &ClassifierParams::b1);
    check_block(&Gradients::w2, &ClassifierParams::w2);
    check_block(&Gradients::b2, &ClassifierParams::b2);
  }
}

TEST_CASE("relu networks also pass the gradient check") {
  std::vector<std::string> text = {"alpha", "beta", "gamma"};
  FeatureVector f = featurize_text(text, 128);
  LabelDistribution target({0.1, 0.6, 0.3});
  std::vector<TrainItem> batch = {{&f, &target, 2.0}};

  ClassifierConfig config;
  config.feature_dim = 128;
  config.num_classes = 3;
  config.hidden_width = 5;
  config.activation = Activation::relu;
  ClassifierParams params = init_params(config, 31);

  Gradients grad = make_gradients(params);
  loss_and_grad(params, batch, grad);
  Rng rng(8);
  for (int probe = 0; probe < 10; ++probe) {
    const std::size_t index = rng.below(params.w2.size());
    const double numeric = fd_gradient(params, &ClassifierParams::w2, index, batch, 1e-6);
    if (std::abs(numeric) < 1e-8 && std::abs(grad.w2[index]) < 1e-8) continue;
    CHECK(std::abs(grad.w2[index] - numeric) / std::max(std::abs(numeric), 1e-8) <= 1e-4);
  }
}

TEST_CASE("sgd steps scale by learning rate over batch size") {
  ClassifierConfig config;
  config.feature_dim = 2;
  config.num_classes = 2;
  config.init_scale = 0.0;
  ClassifierParams params = init_params(config, 1);
  Gradients grad = make_gradients(params);
  grad.w1 = {1.0, 2.0, -4.0, 0.0};
  grad.b1 = {10.0, -10.0};
  sgd_step(params, grad, 0.5, 5);
  CHECK(params.w1[0] == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(params.w1[2] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(params.b1[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(sgd_step(params, grad, 0.5, 0), std::invalid_argument);
}

TEST_CASE("imitation strength follows the capped ramp") {
  TrainingSchedule sentiment;  // k_max = 1, alpha = 0.94
  TrainingSchedule ner;
  ner.k_max = 0.8;
  ner.alpha = 0.90;

  for (const TrainingSchedule& s : {sentiment, ner}) {
    CHECK(imitation_k(s, 0) == 0.0);
    double prev = -1.0;
    for (int t = 0; t <= 40; ++t) {
      // independent oracle: repeated multiplication instead of pow
      double power = 1.0;
      for (int i = 0; i < t; ++i) power *= s.alpha;
      const double expected = std::min(s.k_max, 1.0 - power);
      const double k = imitation_k(s, t);
      CHECK(std::abs(k - expected) <= 1e-12);
      CHECK(k >= prev);  // nondecreasing
      CHECK(k <= s.k_max);
      prev = k;
    }
  }
  CHECK_THROWS_AS(imitation_k(sentiment, -1), std::invalid_argument);
}

TEST_CASE("learning rate decays stepwise") {
  TrainingSchedule s;
  s.learning_rate = 1.0;
  s.decay_every = 5;
  s.decay_factor = 0.5;
  CHECK(effective_learning_rate(s, 0) == 1.0);
  CHECK(effective_learning_rate(s, 4) == 1.0);
  CHECK(effective_learning_rate(s, 5) == 0.5);
  CHECK(effective_learning_rate(s, 9) == 0.5);
  CHECK(effective_learning_rate(s, 10) == 0.25);
  s.decay_every = 0;
  CHECK(effective_learning_rate(s, 29) == 1.0);
}
