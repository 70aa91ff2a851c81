// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lncl/dataset.hpp"
#include "lncl/truth_inference.hpp"

namespace lncl {

/// Fraction of positions where the labels agree. Sizes must match.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& gold);

/// Argmax accuracy of per-position posteriors against instance gold labels.
/// Instances without gold are skipped; returns 0 when nothing is scored.
/// The subset overload restricts scoring to the given instance indices.
double posterior_accuracy(const PosteriorSet& posteriors, const CrowdDataset& dataset);
double posterior_accuracy(const PosteriorSet& posteriors, const CrowdDataset& dataset,
                          std::span<const std::size_t> instance_subset);

/// A typed, half-open token span [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string type;

  bool operator==(const Span&) const = default;
};

/// BIO decoding. B-X always opens a span; I-X continues a span of the same
/// type and otherwise opens one (lenient reading); O closes. Tags must be
/// "O", "B-<type>", or "I-<type>".
std::vector<Span> extract_spans(const std::vector<std::string>& tags);

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long matched = 0;
  long predicted = 0;
  long gold = 0;
};

/// Micro-averaged strict span scores: a predicted span counts only when its
/// boundaries and type both match a gold span exactly. When one side has no
/// spans at all the corresponding ratio is 1 if the other side is empty too,
/// else 0.
PrfScores strict_span_prf(const std::vector<std::vector<std::string>>& predicted,
                          const std::vector<std::vector<std::string>>& gold);

/// Maps label ids back to tag names via the dataset's label inventory.
std::vector<std::string> ids_to_tags(const std::vector<int>& ids,
                                     const std::vector<std::string>& label_names);

}  // namespace lncl
