// SPDX-License-Identifier: Apache-2.0
#include "lncl/config.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "lncl/task_rules.hpp"

namespace lncl {

RunConfig default_config() {
  RunConfig config;
  config.task.kind = TaskKind::classification;
  config.task.label_names = {"negative", "positive"};
  config.task.num_annotators = 0;
  return config;
}

RunConfig sentiment_profile() {
  RunConfig config = default_config();
  config.profile = "sentiment";
  config.train.schedule.k_max = 1.0;
  config.train.schedule.alpha = 0.94;
  config.train.schedule.learning_rate = 1.0;
  config.train.schedule.batch_size = 50;
  config.train.schedule.decay_every = 5;
  config.train.schedule.decay_factor = 0.5;
  config.train.schedule.max_epochs = 30;
  config.train.schedule.patience = 5;
  config.train.weighted_loss = false;
  config.train.rules.rule_strength = 5.0;
  config.train.rules.enable_but_rules = true;
  return config;
}

RunConfig ner_profile() {
  RunConfig config;
  config.profile = "ner";
  config.task.kind = TaskKind::sequence;
  config.task.label_names = {"O"};
  config.train.schedule.k_max = 0.8;
  config.train.schedule.alpha = 0.90;
  config.train.schedule.learning_rate = 0.001;
  config.train.schedule.batch_size = 64;
  config.train.schedule.decay_every = 0;
  config.train.schedule.max_epochs = 30;
  config.train.schedule.patience = 5;
  config.train.weighted_loss = true;
  config.train.rules.rule_strength = 5.0;
  config.default_bio = true;
  return config;
}

RunConfig profile_by_name(const std::string& name) {
  if (name == "sentiment") return sentiment_profile();
  if (name == "ner") return ner_profile();
  throw std::invalid_argument("unknown profile '" + name + "' (expected sentiment or ner)");
}

namespace {

using toml::TomlError;
using toml::Value;

int to_int(const Value& v, const std::string& key) {
  try {
    return static_cast<int>(v.as_integer());
  } catch (const TomlError&) {
    throw TomlError("key '" + key + "' must be an integer");
  }
}

double to_number(const Value& v, const std::string& key) {
  try {
    return v.as_number();
  } catch (const TomlError&) {
    throw TomlError("key '" + key + "' must be a number");
  }
}

std::string to_string_value(const Value& v, const std::string& key) {
  try {
    return v.as_string();
  } catch (const TomlError&) {
    throw TomlError("key '" + key + "' must be a string");
  }
}

bool to_bool(const Value& v, const std::string& key) {
  try {
    return v.as_bool();
  } catch (const TomlError&) {
    throw TomlError("key '" + key + "' must be a boolean");
  }
}

void apply_task(RunConfig& config, const Value::Table& table) {
  for (const auto& [key, value] : table) {
    if (key == "kind") {
      config.task.kind = task_kind_from_string(to_string_value(value, "task.kind"));
    } else if (key == "labels") {
      config.task.label_names.clear();
      for (const Value& item : value.as_array())
        config.task.label_names.push_back(to_string_value(item, "task.labels[]"));
      if (config.task.label_names.empty())
        throw TomlError("task.labels must not be empty");
    } else if (key == "annotators") {
      config.task.num_annotators = to_int(value, "task.annotators");
    } else {
      throw TomlError("unknown key 'task." + key + "'");
    }
  }
}

void apply_classifier(RunConfig& config, const Value::Table& table) {
  ClassifierConfig& c = config.train.classifier;
  for (const auto& [key, value] : table) {
    if (key == "feature_dim") {
      const int dim = to_int(value, "classifier.feature_dim");
      if (dim <= 0) throw TomlError("classifier.feature_dim must be positive");
      c.feature_dim = static_cast<std::uint32_t>(dim);
    } else if (key == "hidden_width") {
      c.hidden_width = to_int(value, "classifier.hidden_width");
    } else if (key == "activation") {
      const std::string name = to_string_value(value, "classifier.activation");
      if (name == "tanh")
        c.activation = Activation::tanh_fn;
      else if (name == "relu")
        c.activation = Activation::relu;
      else
        throw TomlError("classifier.activation must be tanh or relu");
    } else if (key == "init_scale") {
      c.init_scale = to_number(value, "classifier.init_scale");
    } else {
      throw TomlError("unknown key 'classifier." + key + "'");
    }
  }
}

void apply_schedule(RunConfig& config, const Value::Table& table) {
  TrainingSchedule& s = config.train.schedule;
  for (const auto& [key, value] : table) {
    if (key == "k_max") s.k_max = to_number(value, "schedule.k_max");
    else if (key == "alpha") s.alpha = to_number(value, "schedule.alpha");
    else if (key == "learning_rate") s.learning_rate = to_number(value, "schedule.learning_rate");
    else if (key == "batch_size") s.batch_size = to_int(value, "schedule.batch_size");
    else if (key == "decay_every") s.decay_every = to_int(value, "schedule.decay_every");
    else if (key == "decay_factor") s.decay_factor = to_number(value, "schedule.decay_factor");
    else if (key == "max_epochs") s.max_epochs = to_int(value, "schedule.max_epochs");
    else if (key == "patience") s.patience = to_int(value, "schedule.patience");
    else throw TomlError("unknown key 'schedule." + key + "'");
  }
}

void apply_rules(RunConfig& config, const Value::Table& table) {
  RuleConfig& r = config.train.rules;
  for (const auto& [key, value] : table) {
    if (key == "strength") r.rule_strength = to_number(value, "rules.strength");
    else if (key == "enable_but") r.enable_but_rules = to_bool(value, "rules.enable_but");
    else if (key == "but_trigger") r.but_trigger = to_string_value(value, "rules.but_trigger");
    else if (key == "positive_label") r.positive_label = to_string_value(value, "rules.positive_label");
    else if (key == "but_w_pos") r.but_w_pos = to_number(value, "rules.but_w_pos");
    else if (key == "but_w_neg") r.but_w_neg = to_number(value, "rules.but_w_neg");
    else if (key == "default_bio") config.default_bio = to_bool(value, "rules.default_bio");
    else if (key == "bio_w_begin") config.bio_w_begin = to_number(value, "rules.bio_w_begin");
    else if (key == "bio_w_inside") config.bio_w_inside = to_number(value, "rules.bio_w_inside");
    else if (key == "transitions") {
      config.extra_transitions.clear();
      for (const Value& item : value.as_array()) {
        const Value::Table& t = item.as_table();
        TransitionRule rule;
        for (const auto& [tkey, tvalue] : t) {
          if (tkey == "prev") rule.prev_tag = to_string_value(tvalue, "transitions.prev");
          else if (tkey == "next") rule.next_tag = to_string_value(tvalue, "transitions.next");
          else if (tkey == "weight") rule.weight = to_number(tvalue, "transitions.weight");
          else throw TomlError("unknown key 'rules.transitions." + tkey + "'");
        }
        if (rule.prev_tag.empty() || rule.next_tag.empty())
          throw TomlError("rules.transitions entries need prev and next");
        config.extra_transitions.push_back(std::move(rule));
      }
    } else {
      throw TomlError("unknown key 'rules." + key + "'");
    }
  }
}

void apply_loss(RunConfig& config, const Value::Table& table) {
  for (const auto& [key, value] : table) {
    if (key == "weighted") config.train.weighted_loss = to_bool(value, "loss.weighted");
    else throw TomlError("unknown key 'loss." + key + "'");
  }
}

void apply_em(RunConfig& config, const Value::Table& table) {
  for (const auto& [key, value] : table) {
    if (key == "smoothing_epsilon")
      config.train.smoothing_epsilon = to_number(value, "em.smoothing_epsilon");
    else if (key == "seed")
      config.train.seed = static_cast<std::uint64_t>(value.as_integer());
    else throw TomlError("unknown key 'em." + key + "'");
  }
}

}  // namespace

void apply_toml(RunConfig& config, const toml::Value::Table& doc) {
  for (const auto& [key, value] : doc) {
    if (key == "profile") {
      // profile is applied before the rest of the document by the caller;
      // here it only needs to be acknowledged as a known key.
      to_string_value(value, "profile");
    } else if (key == "task") {
      apply_task(config, value.as_table());
    } else if (key == "classifier") {
      apply_classifier(config, value.as_table());
    } else if (key == "schedule") {
      apply_schedule(config, value.as_table());
    } else if (key == "rules") {
      apply_rules(config, value.as_table());
    } else if (key == "loss") {
      apply_loss(config, value.as_table());
    } else if (key == "em") {
      apply_em(config, value.as_table());
    } else {
      throw TomlError("unknown key '" + key + "'");
    }
  }
}

void finalize_rules(RunConfig& config, const std::vector<std::string>& label_names) {
  if (config.task.kind != TaskKind::sequence) return;
  if (!config.default_bio && config.extra_transitions.empty()) return;
  TransitionRuleSet set;
  if (config.default_bio)
    set = default_bio_transition_rules(label_names, config.bio_w_begin,
                                      config.bio_w_inside);
  if (!config.extra_transitions.empty()) {
    const TransitionRuleSet extra =
        build_transition_rules(label_names, config.extra_transitions);
    if (set.penalty.empty()) {
      set = extra;
    } else {
      for (std::size_t a = 0; a < set.penalty.size(); ++a)
        for (std::size_t b = 0; b < set.penalty.size(); ++b)
          set.penalty[a][b] += extra.penalty[a][b];
    }
  }
  config.train.rules.transitions = std::move(set);
}

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  const std::string s = out.str();
  // Keep floats recognizable as floats when round numbers print bare.
  return s.find_first_of(".eEn") == std::string::npos ? s + ".0" : s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string render_config(const RunConfig& config) {
  std::ostringstream out;
  if (!config.profile.empty()) out << "profile = " << quote(config.profile) << "\n\n";

  out << "[task]\n";
  out << "kind = " << quote(to_string(config.task.kind)) << "\n";
  out << "labels = [";
  for (std::size_t i = 0; i < config.task.label_names.size(); ++i)
    out << (i ? ", " : "") << quote(config.task.label_names[i]);
  out << "]\n";
  out << "annotators = " << config.task.num_annotators << "\n\n";

  const ClassifierConfig& c = config.train.classifier;
  out << "[classifier]\n";
  out << "feature_dim = " << c.feature_dim << "\n";
  out << "hidden_width = " << c.hidden_width << "\n";
  out << "activation = " << quote(c.activation == Activation::tanh_fn ? "tanh" : "relu")
      << "\n";
  out << "init_scale = " << fmt(c.init_scale) << "\n\n";

  const TrainingSchedule& s = config.train.schedule;
  out << "[schedule]\n";
  out << "k_max = " << fmt(s.k_max) << "\n";
  out << "alpha = " << fmt(s.alpha) << "\n";
  out << "learning_rate = " << fmt(s.learning_rate) << "\n";
  out << "batch_size = " << s.batch_size << "\n";
  out << "decay_every = " << s.decay_every << "\n";
  out << "decay_factor = " << fmt(s.decay_factor) << "\n";
  out << "max_epochs = " << s.max_epochs << "\n";
  out << "patience = " << s.patience << "\n\n";

  out << "[loss]\n";
  out << "weighted = " << (config.train.weighted_loss ? "true" : "false") << "\n\n";

  out << "[em]\n";
  out << "smoothing_epsilon = " << fmt(config.train.smoothing_epsilon) << "\n";
  out << "seed = " << config.train.seed << "\n\n";

  const RuleConfig& r = config.train.rules;
  out << "[rules]\n";
  out << "strength = " << fmt(r.rule_strength) << "\n";
  out << "enable_but = " << (r.enable_but_rules ? "true" : "false") << "\n";
  out << "but_trigger = " << quote(r.but_trigger) << "\n";
  out << "positive_label = " << quote(r.positive_label) << "\n";
  out << "but_w_pos = " << fmt(r.but_w_pos) << "\n";
  out << "but_w_neg = " << fmt(r.but_w_neg) << "\n";
  out << "default_bio = " << (config.default_bio ? "true" : "false") << "\n";
  out << "bio_w_begin = " << fmt(config.bio_w_begin) << "\n";
  out << "bio_w_inside = " << fmt(config.bio_w_inside) << "\n";
  if (!config.extra_transitions.empty()) {
    out << "transitions = [";
    for (std::size_t i = 0; i < config.extra_transitions.size(); ++i) {
      const TransitionRule& rule = config.extra_transitions[i];
      out << (i ? ", " : "") << "{ prev = " << quote(rule.prev_tag)
          << ", next = " << quote(rule.next_tag) << ", weight = " << fmt(rule.weight)
          << " }";
    }
    out << "]\n";
  }
  return out.str();
}

}  // namespace lncl
