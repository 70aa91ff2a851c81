// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "lncl/classifier.hpp"
#include "lncl/dataset.hpp"
#include "lncl/distribution.hpp"

namespace lncl {

/// Everything needed to resume inference: the trained classifier, the
/// annotator confusions, and the label inventory they are indexed by.
struct Checkpoint {
  TaskKind task_kind = TaskKind::classification;
  std::vector<std::string> label_names;
  ClassifierParams params;
  std::vector<ConfusionMatrix> confusions;
};

/// Binary little-endian format with raw IEEE-754 doubles, so a save/load
/// round trip reproduces every parameter bit-for-bit.
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace lncl
