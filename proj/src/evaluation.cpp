// SPDX-License-Identifier: Apache-2.0
#include "lncl/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

namespace lncl {

double accuracy(const std::vector<int>& predicted, const std::vector<int>& gold) {
  if (predicted.size() != gold.size())
    throw std::invalid_argument("accuracy: size mismatch");
  if (predicted.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == gold[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

double posterior_accuracy(const PosteriorSet& posteriors, const CrowdDataset& dataset,
                          std::span<const std::size_t> instance_subset) {
  check_aligned(posteriors, dataset);
  std::size_t hits = 0, total = 0;
  for (std::size_t i : instance_subset) {
    if (i >= dataset.instances.size())
      throw std::out_of_range("posterior_accuracy: instance index out of range");
    const Instance& instance = dataset.instances[i];
    if (!instance.gold) continue;
    const std::vector<int>& gold = *instance.gold;
    for (std::size_t t = 0; t < posteriors.items[i].size(); ++t) {
      if (static_cast<int>(posteriors.items[i][t].argmax()) == gold[t]) ++hits;
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double posterior_accuracy(const PosteriorSet& posteriors, const CrowdDataset& dataset) {
  std::vector<std::size_t> all(dataset.instances.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return posterior_accuracy(posteriors, dataset, all);
}

std::vector<Span> extract_spans(const std::vector<std::string>& tags) {
  std::vector<Span> spans;
  Span open;
  bool in_span = false;
  const auto close = [&](std::size_t end) {
    if (in_span) {
      open.end = end;
      spans.push_back(open);
      in_span = false;
    }
  };
  for (std::size_t t = 0; t < tags.size(); ++t) {
    const std::string& tag = tags[t];
    if (tag == "O") {
      close(t);
    } else if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
      const std::string type = tag.substr(2);
      if (tag[0] == 'B' || !in_span || open.type != type) {
        close(t);
        open = Span{t, t, type};
        in_span = true;
      }
      // I-<same type> inside a span: just keep it open.
    } else {
      throw std::invalid_argument("extract_spans: malformed tag '" + tag + "'");
    }
  }
  close(tags.size());
  return spans;
}

PrfScores strict_span_prf(const std::vector<std::vector<std::string>>& predicted,
                          const std::vector<std::vector<std::string>>& gold) {
  if (predicted.size() != gold.size())
    throw std::invalid_argument("strict_span_prf: sentence count mismatch");
  PrfScores scores;
  for (std::size_t s = 0; s < predicted.size(); ++s) {
    if (predicted[s].size() != gold[s].size())
      throw std::invalid_argument("strict_span_prf: sentence length mismatch");
    const std::vector<Span> p = extract_spans(predicted[s]);
    std::vector<Span> g = extract_spans(gold[s]);
    scores.predicted += std::ssize(p);
    scores.gold += std::ssize(g);
    for (const Span& span : p) {
      const auto it = std::find(g.begin(), g.end(), span);
      if (it != g.end()) {
        ++scores.matched;
        g.erase(it);  // each gold span can be claimed once
      }
    }
  }
  scores.precision =
      scores.predicted > 0 ? static_cast<double>(scores.matched) / scores.predicted
                           : (scores.gold == 0 ? 1.0 : 0.0);
  scores.recall = scores.gold > 0 ? static_cast<double>(scores.matched) / scores.gold
                                  : (scores.predicted == 0 ? 1.0 : 0.0);
  scores.f1 = scores.precision + scores.recall > 0.0
                  ? 2.0 * scores.precision * scores.recall /
                        (scores.precision + scores.recall)
                  : 0.0;
  return scores;
}

std::vector<std::string> ids_to_tags(const std::vector<int>& ids,
                                     const std::vector<std::string>& label_names) {
  std::vector<std::string> tags;
  tags.reserve(ids.size());
  for (int id : ids) {
    if (id < 0 || id >= std::ssize(label_names))
      throw std::out_of_range("ids_to_tags: label id out of range");
    tags.push_back(label_names[static_cast<std::size_t>(id)]);
  }
  return tags;
}

}  // namespace lncl
