// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lncl {

enum class TaskKind { classification, sequence };

std::string to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& s);

/// One labeled (or unlabeled) item. Annotator ids and label indices are
/// 0-based internally; the JSONL boundary converts from the 1-based external
/// convention. For classification tasks every label vector has length 1; for
/// sequence tasks it matches the token count.
struct Instance {
  std::string id;
  std::vector<std::string> tokens;
  std::map<int, std::vector<int>> annotations;  // annotator id -> labels
  std::optional<std::vector<int>> gold;

  bool operator==(const Instance&) const = default;
};

struct CrowdDataset {
  TaskKind task_kind = TaskKind::classification;
  int num_classes = 0;    // K
  int num_annotators = 0; // J
  std::vector<std::string> label_names;
  std::vector<Instance> instances;

  bool operator==(const CrowdDataset&) const = default;

  int label_index(const std::string& name) const;  // -1 if unknown
};

/// Invariant check. Returns human-readable violations; empty means valid.
/// Unannotated instances are legal (annotation absence is sparse omission).
std::vector<std::string> validate(const CrowdDataset& dataset);

/// Number of distinct annotators with an annotation on each instance.
std::vector<int> annotator_counts(const CrowdDataset& dataset);

/// Sidecar declaration accompanying a JSONL file: K and label names come from
/// `label_names`, task kind and J are explicit.
struct TaskSpec {
  TaskKind kind = TaskKind::classification;
  std::vector<std::string> label_names;
  int num_annotators = 0;
};

/// Parses one-instance-per-line JSONL. Classification lines carry "text" and
/// integer labels (1-based); sequence lines carry "tokens" and tag-name lists.
/// Malformed JSON, unknown tags, and non-integer labels are hard errors;
/// range violations are left for validate() to report.
CrowdDataset load_jsonl(const std::string& path, const TaskSpec& spec);
CrowdDataset parse_jsonl(const std::string& content, const TaskSpec& spec);

void save_jsonl(const CrowdDataset& dataset, const std::string& path);
std::string to_jsonl(const CrowdDataset& dataset);

}  // namespace lncl
