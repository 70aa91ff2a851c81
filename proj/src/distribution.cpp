// SPDX-License-Identifier: Apache-2.0
#include "lncl/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lncl {

namespace {
constexpr double kSumTolerance = 1e-9;

void check_probability_vector(const std::vector<double>& p, const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty probability vector");
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument(std::string(what) + ": entries must be finite and >= 0");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument(std::string(what) + ": entries sum to " + std::to_string(sum) +
                                ", expected 1");
}
}  // namespace

LabelDistribution::LabelDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  check_probability_vector(probs_, "LabelDistribution");
}

LabelDistribution LabelDistribution::uniform(std::size_t k) {
  if (k == 0) throw std::invalid_argument("LabelDistribution::uniform: k must be positive");
  return LabelDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

LabelDistribution LabelDistribution::one_hot(std::size_t k, std::size_t index) {
  if (index >= k) throw std::invalid_argument("LabelDistribution::one_hot: index out of range");
  std::vector<double> p(k, 0.0);
  p[index] = 1.0;
  return LabelDistribution(std::move(p));
}

LabelDistribution LabelDistribution::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double v : weights) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("LabelDistribution::normalized: weights must be finite and >= 0");
    sum += v;
  }
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw std::invalid_argument("LabelDistribution::normalized: total mass is zero or non-finite");
  for (double& v : weights) v /= sum;
  return LabelDistribution(std::move(weights));
}

std::size_t LabelDistribution::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs_.size(); ++i)
    if (probs_[i] > probs_[best]) best = i;
  return best;
}

ConfusionMatrix::ConfusionMatrix(std::size_t k, std::vector<double> entries)
    : k_(k), entries_(std::move(entries)) {
  if (k_ == 0) throw std::invalid_argument("ConfusionMatrix: k must be positive");
  if (entries_.size() != k_ * k_)
    throw std::invalid_argument("ConfusionMatrix: expected " + std::to_string(k_ * k_) +
                                " entries, got " + std::to_string(entries_.size()));
  for (std::size_t m = 0; m < k_; ++m) {
    double sum = 0.0;
    for (std::size_t n = 0; n < k_; ++n) {
      double v = entries_[m * k_ + n];
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("ConfusionMatrix: entries must be finite and >= 0");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kSumTolerance)
      throw std::invalid_argument("ConfusionMatrix: row " + std::to_string(m) + " sums to " +
                                  std::to_string(sum) + ", expected 1");
  }
}

ConfusionMatrix ConfusionMatrix::identity(std::size_t k) {
  std::vector<double> e(k * k, 0.0);
  for (std::size_t m = 0; m < k; ++m) e[m * k + m] = 1.0;
  return ConfusionMatrix(k, std::move(e));
}

ConfusionMatrix ConfusionMatrix::uniform(std::size_t k) {
  return ConfusionMatrix(k, std::vector<double>(k * k, 1.0 / static_cast<double>(k)));
}

ConfusionMatrix ConfusionMatrix::diagonal(std::size_t k, double reliability) {
  if (k < 2) throw std::invalid_argument("ConfusionMatrix::diagonal: k must be >= 2");
  if (reliability < 0.0 || reliability > 1.0)
    throw std::invalid_argument("ConfusionMatrix::diagonal: reliability outside [0,1]");
  double off = (1.0 - reliability) / static_cast<double>(k - 1);
  std::vector<double> e(k * k, off);
  for (std::size_t m = 0; m < k; ++m) e[m * k + m] = reliability;
  return ConfusionMatrix(k, std::move(e));
}

double ConfusionMatrix::mean_diagonal() const {
  double sum = 0.0;
  for (std::size_t m = 0; m < k_; ++m) sum += at(m, m);
  return sum / static_cast<double>(k_);
}

}  // namespace lncl
