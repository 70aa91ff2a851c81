// SPDX-License-Identifier: Apache-2.0
//
// lncl — train and evaluate classifiers on noisy crowd labels with soft
// logic rules distilled into the targets.
//
//   lncl simulate   synthesize a crowd-labeled dataset with known truth
//   lncl aggregate  label aggregation only (majority vote / Dawid-Skene)
//   lncl train      run the full alternating training loop
//   lncl infer      predict with a trained checkpoint (student or teacher)
//   lncl evaluate   score prediction files against gold labels
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lncl/checkpoint.hpp"
#include "lncl/config.hpp"
#include "lncl/dataset.hpp"
#include "lncl/em.hpp"
#include "lncl/evaluation.hpp"
#include "lncl/projection.hpp"
#include "lncl/simulator.hpp"
#include "lncl/truth_inference.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lncl;

namespace {

std::string default_task_path(const std::string& data_path) {
  const std::string suffix = ".jsonl";
  if (data_path.size() > suffix.size() &&
      data_path.compare(data_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return data_path.substr(0, data_path.size() - suffix.size()) + ".task.json";
  return data_path + ".task.json";
}

TaskSpec load_task_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open task spec '" + path + "'");
  json doc = json::parse(in);
  TaskSpec spec;
  spec.kind = task_kind_from_string(doc.at("kind").get<std::string>());
  spec.label_names = doc.at("labels").get<std::vector<std::string>>();
  spec.num_annotators = doc.at("annotators").get<int>();
  return spec;
}

void save_task_spec(const std::string& path, const TaskSpec& spec) {
  json doc;
  doc["kind"] = to_string(spec.kind);
  doc["labels"] = spec.label_names;
  doc["annotators"] = spec.num_annotators;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write task spec '" + path + "'");
  out << doc.dump(2) << "\n";
}

CrowdDataset load_data(const std::string& data_path, const std::string& task_path_arg,
                       const TaskSpec* fallback = nullptr) {
  const std::string task_path =
      task_path_arg.empty() ? default_task_path(data_path) : task_path_arg;
  TaskSpec spec;
  if (fs::exists(task_path)) {
    spec = load_task_spec(task_path);
  } else if (fallback != nullptr && !fallback->label_names.empty() &&
             fallback->num_annotators > 0) {
    spec = *fallback;
  } else {
    throw std::runtime_error("no task spec found at '" + task_path +
                             "' (pass --task or add a [task] section to the config)");
  }
  CrowdDataset data = load_jsonl(data_path, spec);
  const std::vector<std::string> violations = validate(data);
  if (!violations.empty()) {
    std::string msg = "invalid dataset '" + data_path + "':";
    for (std::size_t i = 0; i < violations.size() && i < 5; ++i)
      msg += "\n  " + violations[i];
    if (violations.size() > 5)
      msg += "\n  ... and " + std::to_string(violations.size() - 5) + " more";
    throw std::runtime_error(msg);
  }
  return data;
}

json posterior_to_json(const LabelDistribution& q) {
  json arr = json::array();
  for (double p : q.probs()) arr.push_back(p);
  return arr;
}

/// One prediction row per instance: hard labels plus the full distributions.
void write_predictions(const std::string& path, const CrowdDataset& data,
                       const PosteriorSet& posteriors,
                       const std::vector<std::vector<int>>* hard_override = nullptr) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write predictions '" + path + "'");
  for (std::size_t i = 0; i < data.instances.size(); ++i) {
    json row;
    row["id"] = data.instances[i].id;
    if (data.task_kind == TaskKind::classification) {
      const int label = hard_override
                            ? (*hard_override)[i][0]
                            : static_cast<int>(posteriors.items[i][0].argmax());
      row["label"] = data.label_names.at(static_cast<std::size_t>(label));
      row["posterior"] = posterior_to_json(posteriors.items[i][0]);
    } else {
      json tags = json::array();
      json dists = json::array();
      for (std::size_t t = 0; t < posteriors.items[i].size(); ++t) {
        const int label = hard_override
                              ? (*hard_override)[i][t]
                              : static_cast<int>(posteriors.items[i][t].argmax());
        tags.push_back(data.label_names.at(static_cast<std::size_t>(label)));
        dists.push_back(posterior_to_json(posteriors.items[i][t]));
      }
      row["tags"] = tags;
      row["posteriors"] = dists;
    }
    out << row.dump() << "\n";
  }
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string kind = "classification";
  int instances = 2000;
  int annotators = 10;
  int classes = 2;
  double reliability_lo = 0.55;
  double reliability_hi = 0.90;
  double mean_labels = 3.0;
  int min_labels = 1;
  double but_fraction = 0.3;
  double token_noise = 0.15;
  std::vector<std::string> entity_types = {"PER", "LOC"};
  std::uint64_t seed = 1;
  std::string out;
  std::string truth;
};

int run_simulate(const SimulateArgs& args) {
  SimulatorConfig config;
  config.task_kind = task_kind_from_string(args.kind);
  config.num_instances = args.instances;
  config.num_annotators = args.annotators;
  config.num_classes = args.classes;
  config.reliability_lo = args.reliability_lo;
  config.reliability_hi = args.reliability_hi;
  config.mean_labels_per_instance = args.mean_labels;
  config.min_labels_per_instance = args.min_labels;
  config.but_fraction = args.but_fraction;
  config.token_noise = args.token_noise;
  config.entity_types = args.entity_types;
  config.seed = args.seed;

  const SimulatedCrowd crowd = simulate(config);
  save_jsonl(crowd.dataset, args.out);
  save_task_spec(default_task_path(args.out),
                 {crowd.dataset.task_kind, crowd.dataset.label_names,
                  crowd.dataset.num_annotators});

  if (!args.truth.empty()) {
    json doc;
    doc["label_names"] = crowd.dataset.label_names;
    doc["reliabilities"] = crowd.reliabilities;
    json confusions = json::array();
    for (const ConfusionMatrix& pi : crowd.true_confusions) {
      json rows = json::array();
      for (std::size_t m = 0; m < pi.size(); ++m) {
        json row = json::array();
        for (std::size_t n = 0; n < pi.size(); ++n) row.push_back(pi.at(m, n));
        rows.push_back(row);
      }
      confusions.push_back(rows);
    }
    doc["confusions"] = confusions;
    json grounded = json::array();
    for (std::size_t i : crowd.grounded_instances)
      grounded.push_back(crowd.dataset.instances[i].id);
    doc["grounded_instances"] = grounded;
    write_text(args.truth, doc.dump(2) + "\n");
  }

  std::size_t annotations = 0;
  for (const Instance& instance : crowd.dataset.instances)
    annotations += instance.annotations.size();
  json summary;
  summary["instances"] = crowd.dataset.instances.size();
  summary["annotators"] = crowd.dataset.num_annotators;
  summary["classes"] = crowd.dataset.num_classes;
  summary["mean_labels_per_instance"] =
      static_cast<double>(annotations) / static_cast<double>(crowd.dataset.instances.size());
  summary["grounded_instances"] = crowd.grounded_instances.size();
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- aggregate

struct AggregateArgs {
  std::string data, task, method = "mv", out;
  int max_iterations = 100;
  double tolerance = 1e-7;
  double epsilon = 0.01;
};

int run_aggregate(const AggregateArgs& args) {
  const CrowdDataset data = load_data(args.data, args.task);
  json summary;
  summary["method"] = args.method;
  summary["instances"] = data.instances.size();

  PosteriorSet posteriors;
  if (args.method == "mv") {
    posteriors = majority_vote(data);
  } else if (args.method == "ds") {
    DawidSkeneOptions options;
    options.max_iterations = args.max_iterations;
    options.tolerance = args.tolerance;
    options.epsilon = args.epsilon;
    DawidSkeneResult result = dawid_skene(data, options);
    summary["iterations"] = result.iterations;
    summary["converged"] = result.converged;
    summary["log_likelihood"] = result.log_likelihood;
    posteriors = std::move(result.posteriors);
  } else {
    throw std::runtime_error("unknown aggregation method '" + args.method +
                             "' (expected mv or ds)");
  }

  bool any_gold = false;
  for (const Instance& instance : data.instances) any_gold = any_gold || instance.gold.has_value();
  if (any_gold) summary["accuracy"] = posterior_accuracy(posteriors, data);

  if (!args.out.empty()) write_predictions(args.out, data, posteriors);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- config resolution

struct ConfigArgs {
  std::string config_path;
  std::string profile;
};

RunConfig resolve_config(const ConfigArgs& args) {
  toml::Value::Table doc;
  bool have_doc = false;
  if (!args.config_path.empty()) {
    doc = toml::parse_file(args.config_path);
    have_doc = true;
  }
  std::string profile_name = args.profile;
  if (profile_name.empty() && have_doc) {
    const auto it = doc.find("profile");
    if (it != doc.end()) profile_name = it->second.as_string();
  }
  RunConfig config =
      profile_name.empty() ? default_config() : profile_by_name(profile_name);
  if (!profile_name.empty()) config.profile = profile_name;
  if (have_doc) apply_toml(config, doc);
  return config;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data, task, out_dir = "run";
  ConfigArgs config;
  bool quiet = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs, batch_size, patience, decay_every, feature_dim, hidden;
  std::optional<double> learning_rate, k_max, alpha, strength, decay_factor,
      init_scale, epsilon;
  std::optional<bool> weighted;
};

int run_train(const TrainArgs& args) {
  RunConfig config = resolve_config(args.config);
  if (args.seed) config.train.seed = *args.seed;
  if (args.epochs) config.train.schedule.max_epochs = *args.epochs;
  if (args.batch_size) config.train.schedule.batch_size = *args.batch_size;
  if (args.patience) config.train.schedule.patience = *args.patience;
  if (args.decay_every) config.train.schedule.decay_every = *args.decay_every;
  if (args.decay_factor) config.train.schedule.decay_factor = *args.decay_factor;
  if (args.learning_rate) config.train.schedule.learning_rate = *args.learning_rate;
  if (args.k_max) config.train.schedule.k_max = *args.k_max;
  if (args.alpha) config.train.schedule.alpha = *args.alpha;
  if (args.strength) config.train.rules.rule_strength = *args.strength;
  if (args.feature_dim)
    config.train.classifier.feature_dim = static_cast<std::uint32_t>(*args.feature_dim);
  if (args.hidden) config.train.classifier.hidden_width = *args.hidden;
  if (args.init_scale) config.train.classifier.init_scale = *args.init_scale;
  if (args.epsilon) config.train.smoothing_epsilon = *args.epsilon;
  if (args.weighted) config.train.weighted_loss = *args.weighted;

  CrowdDataset data = load_data(args.data, args.task, &config.task);
  config.task = {data.task_kind, data.label_names, data.num_annotators};
  config.train.classifier.num_classes = data.num_classes;
  finalize_rules(config, data.label_names);

  if (!args.quiet) {
    config.train.hooks.on_epoch_end = [](const EpochInfo& info) {
      std::cerr << "epoch " << info.epoch << "  k=" << info.k
                << "  lr=" << info.learning_rate << "  loss=" << info.batch_loss_sum
                << "  ll=" << info.log_likelihood << "\n";
    };
  }

  const TrainResult result = train(data, config.train);

  fs::create_directories(args.out_dir);
  const fs::path out_dir(args.out_dir);
  save_checkpoint((out_dir / "model.ckpt").string(),
                  {data.task_kind, data.label_names, result.params, result.confusions});
  write_predictions((out_dir / "posteriors.jsonl").string(), data, result.qf);
  write_text((out_dir / "effective_config.toml").string(), render_config(config));

  json metrics;
  metrics["epochs_run"] = result.epochs_run;
  metrics["best_epoch"] = result.best_epoch;
  metrics["stopped_early"] = result.stopped_early;
  metrics["log_likelihoods"] = result.epoch_log_likelihoods;
  bool any_gold = false;
  for (const Instance& instance : data.instances) any_gold = any_gold || instance.gold.has_value();
  if (any_gold) {
    metrics["accuracy_qf"] = posterior_accuracy(result.qf, data);
    metrics["accuracy_student"] =
        posterior_accuracy(infer_student(result.params, data), data);
    metrics["accuracy_mv"] = posterior_accuracy(majority_vote(data), data);
  }
  write_text((out_dir / "metrics.json").string(), metrics.dump(2) + "\n");
  std::cout << metrics.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- infer

struct InferArgs {
  std::string model, data, task, out, mode = "student", decode = "marginal";
  ConfigArgs config;
  std::optional<double> k;
};

int run_infer(const InferArgs& args) {
  const Checkpoint ck = load_checkpoint(args.model);
  TaskSpec spec{ck.task_kind, ck.label_names, static_cast<int>(ck.confusions.size())};
  const CrowdDataset data = load_data(args.data, args.task, &spec);
  if (data.label_names != ck.label_names)
    throw std::runtime_error("label inventory of '" + args.data +
                             "' does not match the checkpoint");

  RunConfig config = resolve_config(args.config);
  finalize_rules(config, ck.label_names);

  PosteriorSet posteriors;
  if (args.mode == "student") {
    posteriors = infer_student(ck.params, data);
  } else if (args.mode == "teacher") {
    const double k = args.k ? *args.k : config.train.schedule.k_max;
    posteriors = infer_teacher(ck.params, ck.confusions, data, config.train.rules, k);
  } else {
    throw std::runtime_error("unknown mode '" + args.mode +
                             "' (expected student or teacher)");
  }

  std::optional<std::vector<std::vector<int>>> hard;
  if (args.decode == "viterbi") {
    if (data.task_kind != TaskKind::sequence)
      throw std::runtime_error("--decode viterbi only applies to sequence tasks");
    hard.emplace();
    for (const auto& marginals : posteriors.items)
      hard->push_back(viterbi_decode(marginals, config.train.rules.transitions,
                                     config.train.rules.rule_strength));
  } else if (args.decode != "marginal") {
    throw std::runtime_error("unknown decode '" + args.decode +
                             "' (expected marginal or viterbi)");
  }

  write_predictions(args.out, data, posteriors, hard ? &*hard : nullptr);

  json summary;
  summary["mode"] = args.mode;
  summary["instances"] = data.instances.size();
  bool any_gold = false;
  for (const Instance& instance : data.instances) any_gold = any_gold || instance.gold.has_value();
  if (any_gold) summary["accuracy"] = posterior_accuracy(posteriors, data);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string pred, data, task, out;
};

int run_evaluate(const EvaluateArgs& args) {
  const CrowdDataset data = load_data(args.data, args.task);

  std::ifstream in(args.pred);
  if (!in) throw std::runtime_error("cannot open predictions '" + args.pred + "'");
  std::map<std::string, std::vector<int>> predicted;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(args.pred + ":" + std::to_string(lineno) + ": " + e.what());
    }
    const std::string id = row.at("id").get<std::string>();
    std::vector<int> labels;
    if (data.task_kind == TaskKind::classification) {
      const int index = data.label_index(row.at("label").get<std::string>());
      if (index < 0)
        throw std::runtime_error("prediction for '" + id + "' uses an unknown label");
      labels.push_back(index);
    } else {
      for (const auto& tag : row.at("tags")) {
        const int index = data.label_index(tag.get<std::string>());
        if (index < 0)
          throw std::runtime_error("prediction for '" + id + "' uses an unknown tag");
        labels.push_back(index);
      }
    }
    predicted[id] = std::move(labels);
  }

  std::vector<int> flat_pred, flat_gold;
  std::vector<std::vector<std::string>> pred_tags, gold_tags;
  std::size_t scored = 0, missing = 0;
  for (const Instance& instance : data.instances) {
    if (!instance.gold) continue;
    const auto it = predicted.find(instance.id);
    if (it == predicted.end()) {
      ++missing;
      continue;
    }
    if (it->second.size() != instance.gold->size())
      throw std::runtime_error("prediction for '" + instance.id +
                               "' has the wrong length");
    flat_pred.insert(flat_pred.end(), it->second.begin(), it->second.end());
    flat_gold.insert(flat_gold.end(), instance.gold->begin(), instance.gold->end());
    if (data.task_kind == TaskKind::sequence) {
      pred_tags.push_back(ids_to_tags(it->second, data.label_names));
      gold_tags.push_back(ids_to_tags(*instance.gold, data.label_names));
    }
    ++scored;
  }
  if (scored == 0) throw std::runtime_error("no gold-labeled instances were scored");

  json metrics;
  metrics["instances_scored"] = scored;
  metrics["instances_missing_prediction"] = missing;
  if (data.task_kind == TaskKind::classification) {
    metrics["accuracy"] = accuracy(flat_pred, flat_gold);
  } else {
    metrics["token_accuracy"] = accuracy(flat_pred, flat_gold);
    const PrfScores prf = strict_span_prf(pred_tags, gold_tags);
    metrics["span_precision"] = prf.precision;
    metrics["span_recall"] = prf.recall;
    metrics["span_f1"] = prf.f1;
    metrics["spans_predicted"] = prf.predicted;
    metrics["spans_gold"] = prf.gold;
    metrics["spans_matched"] = prf.matched;
  }
  if (!args.out.empty()) write_text(args.out, metrics.dump(2) + "\n");
  std::cout << metrics.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisy-crowd-label training with soft logic rules"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "generate a synthetic crowd dataset");
  simulate_cmd->add_option("--task", sim.kind, "classification or sequence")
      ->check(CLI::IsMember({"classification", "sequence"}));
  simulate_cmd->add_option("--instances", sim.instances, "number of instances");
  simulate_cmd->add_option("--annotators", sim.annotators, "number of annotators");
  simulate_cmd->add_option("--classes", sim.classes, "number of classes (classification)");
  simulate_cmd->add_option("--reliability-lo", sim.reliability_lo, "reliability lower bound");
  simulate_cmd->add_option("--reliability-hi", sim.reliability_hi, "reliability upper bound");
  simulate_cmd->add_option("--mean-labels", sim.mean_labels, "mean annotations per instance");
  simulate_cmd->add_option("--min-labels", sim.min_labels, "minimum annotations per instance");
  simulate_cmd->add_option("--but-fraction", sim.but_fraction,
                           "share of instances with a but-structure");
  simulate_cmd->add_option("--token-noise", sim.token_noise, "wrong-pool token probability");
  simulate_cmd->add_option("--entity-types", sim.entity_types, "entity types (sequence)")
      ->delimiter(',');
  simulate_cmd->add_option("--seed", sim.seed, "random seed");
  simulate_cmd->add_option("--out", sim.out, "output dataset JSONL")->required();
  simulate_cmd->add_option("--truth", sim.truth, "also write the generator truth JSON");

  AggregateArgs agg;
  CLI::App* aggregate_cmd = app.add_subcommand("aggregate", "aggregate labels without training");
  aggregate_cmd->add_option("--data", agg.data, "dataset JSONL")->required();
  aggregate_cmd->add_option("--task", agg.task, "task spec JSON (default: <data>.task.json)");
  aggregate_cmd->add_option("--method", agg.method, "mv or ds")
      ->check(CLI::IsMember({"mv", "ds"}));
  aggregate_cmd->add_option("--out", agg.out, "write posteriors JSONL");
  aggregate_cmd->add_option("--max-iterations", agg.max_iterations, "EM iteration cap");
  aggregate_cmd->add_option("--tolerance", agg.tolerance, "EM convergence tolerance");
  aggregate_cmd->add_option("--epsilon", agg.epsilon, "confusion smoothing");

  TrainArgs tr;
  CLI::App* train_cmd = app.add_subcommand("train", "run the alternating training loop");
  train_cmd->add_option("--data", tr.data, "dataset JSONL")->required();
  train_cmd->add_option("--task", tr.task, "task spec JSON (default: <data>.task.json)");
  train_cmd->add_option("--config", tr.config.config_path, "TOML run configuration");
  train_cmd->add_option("--profile", tr.config.profile, "sentiment or ner preset")
      ->check(CLI::IsMember({"sentiment", "ner"}));
  train_cmd->add_option("--out-dir", tr.out_dir, "output directory (default: run)");
  train_cmd->add_flag("--quiet", tr.quiet, "suppress per-epoch progress");
  train_cmd->add_option("--seed", tr.seed, "random seed");
  train_cmd->add_option("--epochs", tr.epochs, "max training epochs");
  train_cmd->add_option("--batch-size", tr.batch_size, "minibatch size");
  train_cmd->add_option("--patience", tr.patience, "early-stop patience (0 disables)");
  train_cmd->add_option("--decay-every", tr.decay_every, "epochs between lr decays");
  train_cmd->add_option("--decay-factor", tr.decay_factor, "lr decay factor");
  train_cmd->add_option("--learning-rate", tr.learning_rate, "initial learning rate");
  train_cmd->add_option("--k-max", tr.k_max, "imitation cap k_max");
  train_cmd->add_option("--alpha", tr.alpha, "imitation ramp base alpha");
  train_cmd->add_option("--strength", tr.strength, "rule strength multiplier");
  train_cmd->add_option("--feature-dim", tr.feature_dim, "hashed feature dimension");
  train_cmd->add_option("--hidden", tr.hidden, "hidden width (0 = linear)");
  train_cmd->add_option("--init-scale", tr.init_scale, "parameter init scale");
  train_cmd->add_option("--epsilon", tr.epsilon, "confusion smoothing");
  train_cmd->add_flag("--weighted,!--unweighted", tr.weighted,
                      "weight the loss by annotation counts");

  InferArgs inf;
  CLI::App* infer_cmd = app.add_subcommand("infer", "predict with a trained model");
  infer_cmd->add_option("--model", inf.model, "checkpoint file")->required();
  infer_cmd->add_option("--data", inf.data, "dataset JSONL")->required();
  infer_cmd->add_option("--task", inf.task, "task spec JSON (default: <data>.task.json)");
  infer_cmd->add_option("--out", inf.out, "predictions JSONL")->required();
  infer_cmd->add_option("--mode", inf.mode, "student or teacher")
      ->check(CLI::IsMember({"student", "teacher"}));
  infer_cmd->add_option("--decode", inf.decode, "marginal or viterbi (sequence)")
      ->check(CLI::IsMember({"marginal", "viterbi"}));
  infer_cmd->add_option("--k", inf.k, "imitation strength for teacher mode");
  infer_cmd->add_option("--config", inf.config.config_path, "TOML run configuration");
  infer_cmd->add_option("--profile", inf.config.profile, "sentiment or ner preset")
      ->check(CLI::IsMember({"sentiment", "ner"}));

  EvaluateArgs ev;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "score predictions against gold");
  evaluate_cmd->add_option("--pred", ev.pred, "predictions JSONL")->required();
  evaluate_cmd->add_option("--data", ev.data, "gold dataset JSONL")->required();
  evaluate_cmd->add_option("--task", ev.task, "task spec JSON (default: <data>.task.json)");
  evaluate_cmd->add_option("--out", ev.out, "also write metrics JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(simulate_cmd)) return run_simulate(sim);
    if (app.got_subcommand(aggregate_cmd)) return run_aggregate(agg);
    if (app.got_subcommand(train_cmd)) return run_train(tr);
    if (app.got_subcommand(infer_cmd)) return run_infer(inf);
    if (app.got_subcommand(evaluate_cmd)) return run_evaluate(ev);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
