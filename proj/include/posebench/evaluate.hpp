#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "posebench/folds.hpp"
#include "posebench/metrics.hpp"
#include "posebench/model_io.hpp"
#include "posebench/training_set.hpp"
#include "posebench/types.hpp"

namespace posebench {

struct Predictor {
  std::function<std::vector<double>(std::span<const double>)> predict_proba;
};

// Trains a model on one fold; fold_seed is derived from (cv seed, fold index).
using TrainerFn = std::function<Predictor(const TrainingSet& train, std::uint64_t fold_seed)>;

// Model family + hyperparameters used by the CLI and the evaluation harness.
struct TrainerSpec {
  std::string kind = "forest";  // forest | gbt | ensemble
  ForestParams forest;
  GbtParams gbt;
  std::vector<std::string> members = {"forest", "gbt"};  // ensemble composition
};

AnyModel train_model(const TrainerSpec& spec, const TrainingSet& data, std::uint64_t seed,
                     int n_threads);
TrainerFn make_trainer(const TrainerSpec& spec, int n_threads);

struct CvOptions {
  std::uint64_t seed = 0;
  int n_threads = 1;
  bool per_fold_average = false;  // default: metrics from the pooled confusion
};

struct EvalReport {
  std::string strategy;
  int n_folds = 0;
  int k = 0;
  int n_train_cameras = 0;
  std::uint64_t seed = 0;
  double train_fraction = 0.0;
  bool per_fold_average = false;
  LeakageVerdict leakage;
  ConfusionMatrix confusion;  // pooled across folds
  MetricsSummary metrics;
  std::map<std::string, double> per_level_accuracy;  // empty without hierarchy
  std::vector<std::string> warnings;
};

// Trains on each fold's train side, predicts its test side, pools all test
// predictions into one confusion matrix, and reports metrics plus the plan's
// leakage verdict. A class present in test but absent from a fold's training
// side is recorded as a warning, not an error.
EvalReport run_cv(const Dataset& dataset, const SplitPlan& plan, const TrainerFn& trainer,
                  const CvOptions& options);

// Scores a pretrained model on the whole dataset (single test fold, no train
// side, leakage trivially absent).
EvalReport evaluate_model(const Dataset& dataset, const AnyModel& model, int n_threads = 1);

}  // namespace posebench
