// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace lncl {

/// Normalized probability vector over K classes.
///
/// Construction validates: entries nonnegative, finite, summing to 1 within
/// 1e-9. Use `normalized` to build from unnormalized nonnegative weights.
class LabelDistribution {
 public:
  explicit LabelDistribution(std::vector<double> probs);

  static LabelDistribution uniform(std::size_t k);
  static LabelDistribution one_hot(std::size_t k, std::size_t index);
  /// Normalizes nonnegative weights; rejects zero or non-finite total mass.
  static LabelDistribution normalized(std::vector<double> weights);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  /// Bounds-checked access; throws std::out_of_range.
  double at(std::size_t i) const { return probs_.at(i); }
  const std::vector<double>& probs() const { return probs_; }

  /// Index of the largest entry; ties broken by lowest index.
  std::size_t argmax() const;

  bool operator==(const LabelDistribution& other) const = default;

 private:
  std::vector<double> probs_;
};

/// Row-stochastic K x K annotator reliability matrix. entry(m, n) is the
/// probability of reporting label n when the truth is m.
class ConfusionMatrix {
 public:
  ConfusionMatrix(std::size_t k, std::vector<double> entries);

  static ConfusionMatrix identity(std::size_t k);
  static ConfusionMatrix uniform(std::size_t k);
  /// Diagonal `reliability`, remaining mass spread over the off-diagonal.
  static ConfusionMatrix diagonal(std::size_t k, double reliability);

  std::size_t size() const { return k_; }
  double at(std::size_t truth, std::size_t reported) const {
    return entries_[truth * k_ + reported];
  }
  const std::vector<double>& entries() const { return entries_; }

  /// Mean diagonal value; the per-annotator overall reliability scalar.
  double mean_diagonal() const;

  bool operator==(const ConfusionMatrix& other) const = default;

 private:
  std::size_t k_;
  std::vector<double> entries_;
};

}  // namespace lncl
