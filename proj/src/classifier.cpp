// SPDX-License-Identifier: Apache-2.0
#include "lncl/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

#include "lncl/rng.hpp"

namespace lncl {

namespace {

// FNV-1a, 64-bit. The low 32 bits pick the bucket, bit 32 picks the sign, so
// collisions between features tend to cancel rather than pile up.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void hash_into(std::map<std::uint32_t, double>& acc, const std::string& key,
               std::uint32_t dim) {
  const std::uint64_t h = fnv1a(key);
  const auto index = static_cast<std::uint32_t>(h % dim);
  const double sign = (h >> 32 & 1u) ? 1.0 : -1.0;
  acc[index] += sign;
}

FeatureVector collect(const std::map<std::uint32_t, double>& acc) {
  FeatureVector out;
  out.entries.reserve(acc.size());
  for (const auto& [index, value] : acc) {
    if (value != 0.0) out.entries.emplace_back(index, value);
  }
  return out;
}

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

FeatureVector featurize_text(std::span<const std::string> tokens, std::uint32_t dim) {
  if (dim == 0) throw std::invalid_argument("featurize_text: dim must be positive");
  std::map<std::uint32_t, double> acc;
  acc.emplace(0u, 1.0);  // bias bucket
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    hash_into(acc, "u=" + lowercase(tokens[i]), dim);
    if (i + 1 < tokens.size())
      hash_into(acc, "b=" + lowercase(tokens[i]) + "_" + lowercase(tokens[i + 1]), dim);
  }
  return collect(acc);
}

std::vector<FeatureVector> featurize_sequence(const std::vector<std::string>& tokens,
                                              std::uint32_t dim) {
  if (dim == 0) throw std::invalid_argument("featurize_sequence: dim must be positive");
  std::vector<FeatureVector> out;
  out.reserve(tokens.size());
  const auto word_at = [&](std::ptrdiff_t i) -> std::string {
    if (i < 0) return "<s" + std::to_string(i) + ">";
    if (i >= std::ssize(tokens)) return "</s" + std::to_string(i - std::ssize(tokens)) + ">";
    return lowercase(tokens[static_cast<std::size_t>(i)]);
  };
  for (std::ptrdiff_t i = 0; i < std::ssize(tokens); ++i) {
    const std::string& w = tokens[static_cast<std::size_t>(i)];
    std::map<std::uint32_t, double> acc;
    acc.emplace(0u, 1.0);
    hash_into(acc, "w0=" + w, dim);
    hash_into(acc, "lc0=" + lowercase(w), dim);
    if (!w.empty() && std::isupper(static_cast<unsigned char>(w[0])))
      hash_into(acc, "cap", dim);
    if (std::all_of(w.begin(), w.end(),
                    [](unsigned char c) { return std::isdigit(c) != 0; }) &&
        !w.empty())
      hash_into(acc, "dig", dim);
    hash_into(acc, "w-1=" + word_at(i - 1), dim);
    hash_into(acc, "w+1=" + word_at(i + 1), dim);
    hash_into(acc, "w-2=" + word_at(i - 2), dim);
    hash_into(acc, "w+2=" + word_at(i + 2), dim);
    out.push_back(collect(acc));
  }
  return out;
}

std::vector<FeatureVector> featurize(const Instance& instance, TaskKind kind,
                                     std::uint32_t dim) {
  if (kind == TaskKind::classification)
    return {featurize_text(instance.tokens, dim)};
  return featurize_sequence(instance.tokens, dim);
}

ClassifierParams init_params(const ClassifierConfig& config, std::uint64_t seed) {
  if (config.num_classes < 2)
    throw std::invalid_argument("init_params: need at least two classes");
  if (config.feature_dim == 0)
    throw std::invalid_argument("init_params: feature_dim must be positive");
  if (config.hidden_width < 0)
    throw std::invalid_argument("init_params: hidden_width must be >= 0");
  ClassifierParams p;
  p.config = config;
  Rng rng(seed);
  const auto fill = [&](std::vector<double>& v, std::size_t n) {
    v.assign(n, 0.0);
    for (double& x : v) x = rng.uniform(-config.init_scale, config.init_scale);
  };
  const auto K = static_cast<std::size_t>(config.num_classes);
  const auto D = static_cast<std::size_t>(config.feature_dim);
  if (config.hidden_width == 0) {
    fill(p.w1, K * D);
    fill(p.b1, K);
  } else {
    const auto H = static_cast<std::size_t>(config.hidden_width);
    fill(p.w1, H * D);
    fill(p.b1, H);
    fill(p.w2, K * H);
    fill(p.b2, K);
  }
  return p;
}

namespace {

struct Forward {
  std::vector<double> hidden;      // post-activation, empty when linear
  std::vector<double> logits;
  std::vector<double> probs;
};

double activate(Activation a, double x) {
  return a == Activation::tanh_fn ? std::tanh(x) : std::max(0.0, x);
}

double activate_grad(Activation a, double post) {
  // Both activations let us express the derivative through the output:
  // tanh' = 1 - tanh^2, relu' = [post > 0].
  return a == Activation::tanh_fn ? 1.0 - post * post : (post > 0.0 ? 1.0 : 0.0);
}

std::vector<double> softmax(const std::vector<double>& logits) {
  double top = logits[0];
  for (double z : logits) top = std::max(top, z);
  std::vector<double> p(logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    p[k] = std::exp(logits[k] - top);
    total += p[k];
  }
  for (double& x : p) x /= total;
  return p;
}

Forward run_forward(const ClassifierParams& params, const FeatureVector& features) {
  const auto K = static_cast<std::size_t>(params.config.num_classes);
  const auto D = static_cast<std::size_t>(params.config.feature_dim);
  Forward f;
  if (params.config.hidden_width == 0) {
    f.logits.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      double z = params.b1[k];
      for (const auto& [index, value] : features.entries)
        z += params.w1[k * D + index] * value;
      f.logits[k] = z;
    }
  } else {
    const auto H = static_cast<std::size_t>(params.config.hidden_width);
    f.hidden.assign(H, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
      double z = params.b1[h];
      for (const auto& [index, value] : features.entries)
        z += params.w1[h * D + index] * value;
      f.hidden[h] = activate(params.config.activation, z);
    }
    f.logits.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      double z = params.b2[k];
      for (std::size_t h = 0; h < H; ++h) z += params.w2[k * H + h] * f.hidden[h];
      f.logits[k] = z;
    }
  }
  for (double z : f.logits)
    if (!std::isfinite(z)) throw std::runtime_error("predict: non-finite activation");
  f.probs = softmax(f.logits);
  return f;
}

}  // namespace

LabelDistribution predict(const ClassifierParams& params, const FeatureVector& features) {
  return LabelDistribution(run_forward(params, features).probs);
}

Gradients make_gradients(const ClassifierParams& params) {
  Gradients g;
  g.w1.assign(params.w1.size(), 0.0);
  g.b1.assign(params.b1.size(), 0.0);
  g.w2.assign(params.w2.size(), 0.0);
  g.b2.assign(params.b2.size(), 0.0);
  return g;
}

double loss_and_grad(const ClassifierParams& params, std::span<const TrainItem> batch,
                     Gradients& grad) {
  const auto K = static_cast<std::size_t>(params.config.num_classes);
  const auto D = static_cast<std::size_t>(params.config.feature_dim);
  std::fill(grad.w1.begin(), grad.w1.end(), 0.0);
  std::fill(grad.b1.begin(), grad.b1.end(), 0.0);
  std::fill(grad.w2.begin(), grad.w2.end(), 0.0);
  std::fill(grad.b2.begin(), grad.b2.end(), 0.0);

  double loss = 0.0;
  for (const TrainItem& item : batch) {
    if (item.features == nullptr || item.target == nullptr)
      throw std::invalid_argument("loss_and_grad: null batch item");
    if (item.target->size() != K)
      throw std::invalid_argument("loss_and_grad: target size mismatch");
    const Forward f = run_forward(params, *item.features);
    // Cross-entropy against a soft target; clamp avoids -inf on exact zeros,
    // which can only come from pathological logits anyway.
    for (std::size_t k = 0; k < K; ++k) {
      const double q = (*item.target)[k];
      if (q > 0.0) loss -= item.weight * q * std::log(std::max(f.probs[k], 1e-300));
    }
    // Softmax + CE collapses to dlogits = p - q.
    std::vector<double> dlogits(K);
    for (std::size_t k = 0; k < K; ++k)
      dlogits[k] = item.weight * (f.probs[k] - (*item.target)[k]);

    if (params.config.hidden_width == 0) {
      for (std::size_t k = 0; k < K; ++k) {
        grad.b1[k] += dlogits[k];
        for (const auto& [index, value] : item.features->entries)
          grad.w1[k * D + index] += dlogits[k] * value;
      }
    } else {
      const auto H = static_cast<std::size_t>(params.config.hidden_width);
      std::vector<double> dhidden(H, 0.0);
      for (std::size_t k = 0; k < K; ++k) {
        grad.b2[k] += dlogits[k];
        for (std::size_t h = 0; h < H; ++h) {
          grad.w2[k * H + h] += dlogits[k] * f.hidden[h];
          dhidden[h] += dlogits[k] * params.w2[k * H + h];
        }
      }
      for (std::size_t h = 0; h < H; ++h) {
        const double dz = dhidden[h] * activate_grad(params.config.activation, f.hidden[h]);
        grad.b1[h] += dz;
        for (const auto& [index, value] : item.features->entries)
          grad.w1[h * D + index] += dz * value;
      }
    }
  }
  return loss;
}

void sgd_step(ClassifierParams& params, const Gradients& grad, double learning_rate,
              int batch_size) {
  if (batch_size <= 0) throw std::invalid_argument("sgd_step: batch_size must be positive");
  const double scale = learning_rate / static_cast<double>(batch_size);
  const auto apply = [scale](std::vector<double>& theta, const std::vector<double>& g) {
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= scale * g[i];
  };
  apply(params.w1, grad.w1);
  apply(params.b1, grad.b1);
  apply(params.w2, grad.w2);
  apply(params.b2, grad.b2);
}

double imitation_k(const TrainingSchedule& schedule, int epoch) {
  if (epoch < 0) throw std::invalid_argument("imitation_k: epoch must be >= 0");
  return std::min(schedule.k_max, 1.0 - std::pow(schedule.alpha, epoch));
}

double effective_learning_rate(const TrainingSchedule& schedule, int epoch) {
  if (epoch < 0)
    throw std::invalid_argument("effective_learning_rate: epoch must be >= 0");
  if (schedule.decay_every <= 0) return schedule.learning_rate;
  const int steps = epoch / schedule.decay_every;
  return schedule.learning_rate * std::pow(schedule.decay_factor, steps);
}

}  // namespace lncl
