// posebench: synthesize keypoint datasets, featurize pose JSON, train tree
// ensembles and evaluate them under leakage-aware cross-validation.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "posebench/dataset_io.hpp"
#include "posebench/errors.hpp"
#include "posebench/evaluate.hpp"
#include "posebench/features.hpp"
#include "posebench/ingest.hpp"
#include "posebench/parallel.hpp"
#include "posebench/report_io.hpp"
#include "posebench/synth.hpp"
#include "posebench/version.hpp"

namespace {

using nlohmann::json;
using namespace posebench;

// JSON config file support: a flat object per subcommand name plus top-level
// scalars, e.g. {"eval": {"strategy": "subject", "folds": 10}, "seed": 3}.
// Command-line flags override file values.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json doc;
    try {
      doc = json::parse(input);
    } catch (const json::parse_error& e) {
      throw CLI::FileError(std::string("config file is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    walk(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  }

  static void walk(const json& obj, std::vector<std::string> parents,
                   std::vector<CLI::ConfigItem>& items) {
    if (!obj.is_object()) throw CLI::FileError("config file root must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        walk(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array())
        for (const auto& element : value) item.inputs.push_back(scalar(element));
      else
        item.inputs.push_back(scalar(value));
      items.push_back(std::move(item));
    }
  }
};

std::uint64_t env_default_seed() {
  const char* env = std::getenv("POSEBENCH_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  std::uint64_t v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0')
    throw ConfigError("POSEBENCH_SEED must be a nonnegative integer, got '" +
                      std::string(env) + "'");
  return v;
}

struct SynthCmd {
  std::string out;
  SynthConfig config;
  double yaw_step_deg = 60.0;
  bool with_hierarchy = false;
};

struct FeaturizeCmd {
  std::string manifest;
  std::string out_dataset;
  std::string out_csv;
  std::string hierarchy_path;
  IngestOptions options;
};

struct ModelFlags {
  TrainerSpec spec;
  std::uint64_t seed = 0;
  int threads = default_thread_count();
};

struct TrainCmd {
  std::string dataset;
  std::string out;
  ModelFlags model;
};

struct EvalCmd {
  std::string dataset;
  std::string strategy;
  int folds = 10;
  int train_cameras = 3;
  bool stratified = false;
  bool per_fold = false;
  std::string model_file;
  std::string hierarchy_path;
  std::string out;
  std::string confusion_csv;
  ModelFlags model;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags, std::uint64_t default_seed) {
  flags.seed = default_seed;
  cmd->add_option("--model", flags.spec.kind, "Classifier kind: forest, gbt or ensemble")
      ->check(CLI::IsMember({"forest", "gbt", "ensemble"}))
      ->capture_default_str();
  cmd->add_option("--trees", flags.spec.forest.n_trees, "Forest: number of trees")
      ->capture_default_str();
  cmd->add_option("--mtry", flags.spec.forest.mtry,
                  "Forest: candidate features per split (0 = floor(sqrt(d)))")
      ->capture_default_str();
  cmd->add_option("--min-leaf", flags.spec.forest.min_leaf_samples,
                  "Minimum samples per leaf")
      ->capture_default_str();
  cmd->add_option("--max-depth", flags.spec.forest.max_depth,
                  "Forest: depth cap (0 = grow to purity)")
      ->capture_default_str();
  cmd->add_option("--bins", flags.spec.forest.histogram_bins,
                  "Histogram bins for split finding (0 = exact splits)")
      ->capture_default_str();
  cmd->add_flag("--no-bootstrap",
                [&flags](std::int64_t) { flags.spec.forest.bootstrap = false; },
                "Forest: train every tree on the full sample");
  cmd->add_option("--rounds", flags.spec.gbt.n_rounds, "GBT: boosting rounds")
      ->capture_default_str();
  cmd->add_option("--learning-rate", flags.spec.gbt.learning_rate, "GBT: shrinkage")
      ->capture_default_str();
  cmd->add_option("--gbt-depth", flags.spec.gbt.max_depth, "GBT: tree depth cap")
      ->capture_default_str();
  cmd->add_option("--members", flags.spec.members,
                  "Ensemble members (comma-separated kinds, e.g. forest,gbt)")
      ->delimiter(',');
  cmd->add_option("--seed", flags.seed, "Training seed (default: POSEBENCH_SEED or 0)")
      ->capture_default_str();
  cmd->add_option("--threads", flags.threads, "Worker thread cap (results independent of it)")
      ->capture_default_str();
}

json model_flags_echo(const ModelFlags& flags) {
  json echo{{"model", flags.spec.kind}, {"seed", flags.seed}};
  if (flags.spec.kind == "forest" || flags.spec.kind == "ensemble") {
    echo["trees"] = flags.spec.forest.n_trees;
    echo["mtry"] = flags.spec.forest.mtry;
    echo["min_leaf"] = flags.spec.forest.min_leaf_samples;
    echo["max_depth"] = flags.spec.forest.max_depth;
    echo["bootstrap"] = flags.spec.forest.bootstrap;
  }
  if (flags.spec.kind == "gbt" || flags.spec.kind == "ensemble") {
    echo["rounds"] = flags.spec.gbt.n_rounds;
    echo["learning_rate"] = flags.spec.gbt.learning_rate;
    echo["gbt_depth"] = flags.spec.gbt.max_depth;
  }
  echo["bins"] = flags.spec.forest.histogram_bins;
  if (flags.spec.kind == "ensemble") echo["members"] = flags.spec.members;
  return echo;
}

void sync_shared_model_flags(ModelFlags& flags) {
  // Shared flags apply to both families so ensembles stay configurable.
  flags.spec.gbt.histogram_bins = flags.spec.forest.histogram_bins;
  flags.spec.gbt.min_leaf_samples = flags.spec.forest.min_leaf_samples;
}

int run_synth(const SynthCmd& cmd) {
  SynthConfig config = cmd.config;
  if (config.camera_angles.empty()) {
    config.camera_angles.resize(config.n_cameras);
    for (int i = 0; i < config.n_cameras; ++i)
      config.camera_angles[i] = i * cmd.yaw_step_deg * 3.14159265358979323846 / 180.0;
  }
  Dataset dataset = generate_dataset(config);
  write_synth_files(dataset, config, cmd.out);
  if (cmd.with_hierarchy) {
    Hierarchy h = make_synthetic_hierarchy(dataset.labels);
    write_file((std::filesystem::path(cmd.out) / "hierarchy.json").string(),
               hierarchy_to_json(h));
  }
  std::size_t n_videos = dataset.size() / config.frames_per_video;
  std::cout << "wrote " << n_videos << " pose files + manifest.csv to " << cmd.out << " ("
            << dataset.size() << " frames, " << config.n_classes << " classes)\n";
  return 0;
}

int run_featurize(const FeaturizeCmd& cmd) {
  Manifest manifest = load_manifest(cmd.manifest);
  std::vector<std::string> warnings;
  Dataset dataset = assemble_dataset(manifest, cmd.options, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (dataset.size() == 0) throw DataError("manifest produced no samples");
  if (!cmd.hierarchy_path.empty()) {
    dataset.hierarchy = load_hierarchy(cmd.hierarchy_path);
    dataset.validate();
  }
  featurize_dataset(dataset);
  save_dataset(dataset, cmd.out_dataset);
  if (!cmd.out_csv.empty()) write_file(cmd.out_csv, features_to_csv(dataset));
  std::cout << "featurized " << dataset.size() << " samples across " << dataset.labels.size()
            << " classes -> " << cmd.out_dataset << "\n";
  return 0;
}

int run_train(TrainCmd& cmd) {
  sync_shared_model_flags(cmd.model);
  Dataset dataset = load_dataset(cmd.dataset);
  if (!dataset.has_features()) throw DataError("dataset is not featurized");
  TrainingSet data = training_set_from_dataset(dataset);
  AnyModel model = train_model(cmd.model.spec, data, cmd.model.seed, cmd.model.threads);
  save_model_file(model, cmd.out);
  std::cout << "trained " << model_kind(model) << " on " << data.n << " samples ("
            << data.labels.size() << " classes) -> " << cmd.out << "\n";
  return 0;
}

int run_eval(EvalCmd& cmd) {
  sync_shared_model_flags(cmd.model);
  Dataset dataset = load_dataset(cmd.dataset);
  if (!dataset.has_features()) throw DataError("dataset is not featurized");
  if (!cmd.hierarchy_path.empty()) {
    dataset.hierarchy = load_hierarchy(cmd.hierarchy_path);
    dataset.validate();
  }

  json run_config{{"dataset", cmd.dataset}, {"command", "eval"}};
  EvalReport report;
  if (!cmd.model_file.empty()) {
    if (!cmd.strategy.empty())
      throw ConfigError("--model-file evaluates on the whole dataset; drop --strategy");
    AnyModel model = load_model_file(cmd.model_file);
    report = evaluate_model(dataset, model, cmd.model.threads);
    run_config["model_file"] = cmd.model_file;
  } else {
    if (cmd.strategy.empty())
      throw ConfigError("--strategy is required (frame, subject or camera)");
    SplitPlan plan;
    if (cmd.strategy == "frame")
      plan = frame_folds(dataset, cmd.folds, cmd.model.seed, cmd.stratified);
    else if (cmd.strategy == "subject")
      plan = subject_folds(dataset, cmd.folds, cmd.model.seed);
    else if (cmd.strategy == "camera")
      plan = camera_splits(dataset, cmd.train_cameras);
    else
      throw ConfigError("unknown strategy '" + cmd.strategy + "'");

    CvOptions options;
    options.seed = cmd.model.seed;
    options.n_threads = cmd.model.threads;
    options.per_fold_average = cmd.per_fold;
    report = run_cv(dataset, plan, make_trainer(cmd.model.spec, cmd.model.threads), options);

    run_config["strategy"] = cmd.strategy;
    if (cmd.strategy == "camera")
      run_config["train_cameras"] = cmd.train_cameras;
    else
      run_config["folds"] = cmd.folds;
    run_config["stratified"] = cmd.stratified;
    run_config["aggregate"] = cmd.per_fold ? "per_fold_mean" : "pooled";
    run_config.update(model_flags_echo(cmd.model));
  }

  json doc = report_to_json(report, run_config);
  std::cout << render_report_text(doc);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  if (!cmd.out.empty()) {
    write_file(cmd.out, doc.dump(2) + "\n");
    std::cout << "report -> " << cmd.out << "\n";
  }
  if (!cmd.confusion_csv.empty())
    write_file(cmd.confusion_csv, confusion_to_csv(report.confusion));
  return 0;
}

int run_report(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DataError("report file is not valid JSON: " + std::string(e.what()));
  }
  std::cout << render_report_text(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pose-keypoint posture classification benchmark"};
  app.set_version_flag("--version", posebench::kVersion);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags override it");
  app.require_subcommand(1);

  std::uint64_t default_seed = 0;
  try {
    default_seed = env_default_seed();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  SynthCmd synth_cmd;
  synth_cmd.config.seed = default_seed;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic multi-view dataset");
  synth->add_option("--out", synth_cmd.out, "Output directory")->required();
  synth->add_option("--classes", synth_cmd.config.n_classes, "Number of classes")
      ->capture_default_str();
  synth->add_option("--subjects", synth_cmd.config.n_subjects, "Number of subjects")
      ->capture_default_str();
  synth->add_option("--cameras", synth_cmd.config.n_cameras, "Number of cameras")
      ->capture_default_str();
  synth->add_option("--frames", synth_cmd.config.frames_per_video, "Frames per video")
      ->capture_default_str();
  synth->add_option("--fps", synth_cmd.config.fps, "Frame rate")->capture_default_str();
  synth->add_option("--class-separation", synth_cmd.config.class_separation,
                    "Std dev of per-class skeleton displacement")
      ->capture_default_str();
  synth->add_option("--subject-noise", synth_cmd.config.subject_noise,
                    "Std dev of per-subject offset")
      ->capture_default_str();
  synth->add_option("--temporal-noise", synth_cmd.config.temporal_noise,
                    "Per-frame random walk step")
      ->capture_default_str();
  synth->add_option("--yaw-step-deg", synth_cmd.yaw_step_deg, "Camera yaw spacing in degrees")
      ->capture_default_str();
  synth->add_option("--seed", synth_cmd.config.seed, "Generator seed")->capture_default_str();
  synth->add_flag("--with-hierarchy", synth_cmd.with_hierarchy,
                  "Also write a three-level label hierarchy (hierarchy.json)");

  FeaturizeCmd feat_cmd;
  CLI::App* featurize = app.add_subcommand(
      "featurize", "Parse pose JSON via a manifest and emit a featurized dataset");
  featurize->add_option("--manifest", feat_cmd.manifest, "Manifest CSV")->required();
  featurize->add_option("--out-dataset", feat_cmd.out_dataset, "Output dataset JSON")
      ->required();
  featurize->add_option("--out-csv", feat_cmd.out_csv, "Optional feature CSV export");
  featurize->add_option("--buffer", feat_cmd.options.still_buffer_s,
                        "Seconds trimmed around segment boundaries")
      ->capture_default_str();
  featurize->add_option("--max-frames", feat_cmd.options.max_frames_per_segment,
                        "Frame cap per video segment")
      ->capture_default_str();
  featurize->add_flag("--still", feat_cmd.options.include_still,
                      "Emit pre-segment frames as the reserved 'still' class");
  featurize->add_option("--hierarchy", feat_cmd.hierarchy_path,
                        "Hierarchy JSON to embed in the dataset");

  TrainCmd train_cmd;
  CLI::App* train = app.add_subcommand("train", "Train a classifier on a dataset");
  train->add_option("--dataset", train_cmd.dataset, "Featurized dataset JSON")->required();
  train->add_option("--out", train_cmd.out, "Output model file")->required();
  add_model_flags(train, train_cmd.model, default_seed);

  EvalCmd eval_cmd;
  CLI::App* eval = app.add_subcommand("eval", "Cross-validate a classifier on a dataset");
  eval->add_option("--dataset", eval_cmd.dataset, "Featurized dataset JSON")->required();
  eval->add_option("--strategy", eval_cmd.strategy,
                   "Cross-validation grouping: frame, subject or camera");
  eval->add_option("--folds", eval_cmd.folds, "Fold count for frame/subject strategies")
      ->capture_default_str();
  eval->add_option("--train-cameras", eval_cmd.train_cameras,
                   "Camera strategy: cameras in each training subset")
      ->capture_default_str();
  eval->add_flag("--stratified", eval_cmd.stratified, "Stratify frame folds by label");
  eval->add_flag("--per-fold", eval_cmd.per_fold,
                 "Average metrics over folds instead of pooling the confusion matrix");
  eval->add_option("--model-file", eval_cmd.model_file,
                   "Score a pretrained model on the whole dataset instead of running CV");
  eval->add_option("--hierarchy", eval_cmd.hierarchy_path,
                   "Hierarchy JSON for per-level accuracy");
  eval->add_option("--out", eval_cmd.out, "Report JSON path");
  eval->add_option("--confusion-csv", eval_cmd.confusion_csv, "Confusion matrix CSV path");
  add_model_flags(eval, eval_cmd.model, default_seed);

  std::string report_path;
  CLI::App* report = app.add_subcommand("report", "Render a report JSON as a text table");
  report->add_option("--report", report_path, "Report JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(synth)) return run_synth(synth_cmd);
    if (app.got_subcommand(featurize)) return run_featurize(feat_cmd);
    if (app.got_subcommand(train)) return run_train(train_cmd);
    if (app.got_subcommand(eval)) return run_eval(eval_cmd);
    if (app.got_subcommand(report)) return run_report(report_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
