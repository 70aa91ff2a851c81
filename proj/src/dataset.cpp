// SPDX-License-Identifier: Apache-2.0
#include "lncl/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lncl {

using nlohmann::json;

std::string to_string(TaskKind kind) {
  return kind == TaskKind::classification ? "classification" : "sequence";
}

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "classification") return TaskKind::classification;
  if (s == "sequence") return TaskKind::sequence;
  throw std::invalid_argument("unknown task kind: '" + s + "'");
}

int CrowdDataset::label_index(const std::string& name) const {
  for (std::size_t i = 0; i < label_names.size(); ++i)
    if (label_names[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> validate(const CrowdDataset& dataset) {
  std::vector<std::string> violations;
  auto report = [&](const std::string& msg) { violations.push_back(msg); };

  if (dataset.num_classes <= 0) report("num_classes must be positive");
  if (dataset.num_annotators <= 0) report("num_annotators must be positive");
  if (static_cast<int>(dataset.label_names.size()) != dataset.num_classes)
    report("label_names size does not match num_classes");

  std::set<std::string> ids;
  for (const Instance& inst : dataset.instances) {
    if (!ids.insert(inst.id).second) report("duplicate instance id '" + inst.id + "'");

    auto check_labels = [&](const std::vector<int>& labels, const std::string& what) {
      if (dataset.task_kind == TaskKind::sequence) {
        if (labels.size() != inst.tokens.size())
          report("instance '" + inst.id + "': " + what + " has " +
                 std::to_string(labels.size()) + " tags for " +
                 std::to_string(inst.tokens.size()) + " tokens");
      } else if (labels.size() != 1) {
        report("instance '" + inst.id + "': " + what + " must carry exactly one label");
      }
      for (int label : labels)
        if (label < 0 || label >= dataset.num_classes)
          report("instance '" + inst.id + "': " + what + " label index " +
                 std::to_string(label + 1) + " outside 1.." +
                 std::to_string(dataset.num_classes));
    };

    for (const auto& [annotator, labels] : inst.annotations) {
      if (annotator < 0 || annotator >= dataset.num_annotators)
        report("instance '" + inst.id + "': annotator id " + std::to_string(annotator + 1) +
               " outside 1.." + std::to_string(dataset.num_annotators));
      check_labels(labels, "annotation by annotator " + std::to_string(annotator + 1));
    }
    if (inst.gold) check_labels(*inst.gold, "gold");
  }
  return violations;
}

std::vector<int> annotator_counts(const CrowdDataset& dataset) {
  std::vector<int> counts;
  counts.reserve(dataset.instances.size());
  for (const Instance& inst : dataset.instances)
    counts.push_back(static_cast<int>(inst.annotations.size()));
  return counts;
}

namespace {

std::vector<std::string> split_whitespace(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<int> parse_labels(const json& value, const TaskSpec& spec, const std::string& id,
                              const std::vector<std::string>& names) {
  std::vector<int> labels;
  if (spec.kind == TaskKind::classification) {
    if (!value.is_number_integer())
      throw std::runtime_error("instance '" + id + "': classification label must be an integer");
    labels.push_back(value.get<int>() - 1);
  } else {
    if (!value.is_array())
      throw std::runtime_error("instance '" + id + "': sequence labels must be a tag array");
    for (const auto& tag : value) {
      if (!tag.is_string())
        throw std::runtime_error("instance '" + id + "': sequence tags must be strings");
      const std::string name = tag.get<std::string>();
      int idx = -1;
      for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) { idx = static_cast<int>(i); break; }
      if (idx < 0) throw std::runtime_error("instance '" + id + "': unknown tag '" + name + "'");
      labels.push_back(idx);
    }
  }
  return labels;
}

}  // namespace

CrowdDataset parse_jsonl(const std::string& content, const TaskSpec& spec) {
  if (spec.label_names.empty()) throw std::invalid_argument("TaskSpec: label_names is empty");

  CrowdDataset ds;
  ds.task_kind = spec.kind;
  ds.num_classes = static_cast<int>(spec.label_names.size());
  ds.num_annotators = spec.num_annotators;
  ds.label_names = spec.label_names;

  std::istringstream in(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }

    Instance inst;
    inst.id = row.at("id").get<std::string>();
    if (spec.kind == TaskKind::classification) {
      inst.tokens = split_whitespace(row.at("text").get<std::string>());
    } else {
      inst.tokens = row.at("tokens").get<std::vector<std::string>>();
    }
    if (row.contains("gold") && !row["gold"].is_null())
      inst.gold = parse_labels(row["gold"], spec, inst.id, spec.label_names);
    if (row.contains("annotations")) {
      for (const auto& [key, value] : row["annotations"].items()) {
        int annotator = 0;
        try {
          annotator = std::stoi(key);
        } catch (const std::exception&) {
          throw std::runtime_error("instance '" + inst.id + "': annotator id '" + key +
                                   "' is not an integer");
        }
        inst.annotations[annotator - 1] = parse_labels(value, spec, inst.id, spec.label_names);
      }
    }
    ds.instances.push_back(std::move(inst));
  }
  return ds;
}

CrowdDataset load_jsonl(const std::string& path, const TaskSpec& spec) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_jsonl(buf.str(), spec);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string to_jsonl(const CrowdDataset& dataset) {
  std::string out;
  for (const Instance& inst : dataset.instances) {
    json row;
    row["id"] = inst.id;
    auto labels_to_json = [&](const std::vector<int>& labels) -> json {
      if (dataset.task_kind == TaskKind::classification) return labels.at(0) + 1;
      json tags = json::array();
      for (int label : labels) tags.push_back(dataset.label_names.at(label));
      return tags;
    };
    if (dataset.task_kind == TaskKind::classification) {
      row["text"] = join_tokens(inst.tokens);
    } else {
      row["tokens"] = inst.tokens;
    }
    row["gold"] = inst.gold ? labels_to_json(*inst.gold) : json();
    json ann = json::object();
    for (const auto& [annotator, labels] : inst.annotations)
      ann[std::to_string(annotator + 1)] = labels_to_json(labels);
    row["annotations"] = ann;
    out += row.dump();
    out += '\n';
  }
  return out;
}

void save_jsonl(const CrowdDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file '" + path + "'");
  out << to_jsonl(dataset);
}

}  // namespace lncl
