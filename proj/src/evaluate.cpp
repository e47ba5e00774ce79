#include "posebench/evaluate.hpp"

#include <algorithm>
#include <set>

#include "posebench/errors.hpp"
#include "posebench/parallel.hpp"
#include "posebench/rng.hpp"

namespace posebench {

namespace {

constexpr std::uint64_t kCvFoldStream = 0x43564c44;
constexpr std::uint64_t kEnsembleMemberStream = 0x454e534d;

}  // namespace

AnyModel train_model(const TrainerSpec& spec, const TrainingSet& data, std::uint64_t seed,
                     int n_threads) {
  if (spec.kind == "forest") {
    ForestParams params = spec.forest;
    params.seed = seed;
    return fit_forest(data, params, n_threads);
  }
  if (spec.kind == "gbt") {
    GbtParams params = spec.gbt;
    params.seed = seed;
    return fit_gbt(data, params, n_threads);
  }
  if (spec.kind == "ensemble") {
    if (spec.members.empty()) throw ConfigError("ensemble trainer needs at least one member");
    std::vector<EnsembleMember> members;
    for (std::size_t i = 0; i < spec.members.size(); ++i) {
      std::uint64_t member_seed = Rng::derive(seed, {kEnsembleMemberStream, i}).next_u64();
      const std::string& kind = spec.members[i];
      EnsembleMember member;
      if (kind == "forest") {
        ForestParams params = spec.forest;
        params.seed = member_seed;
        member.model = fit_forest(data, params, n_threads);
      } else if (kind == "gbt") {
        GbtParams params = spec.gbt;
        params.seed = member_seed;
        member.model = fit_gbt(data, params, n_threads);
      } else {
        throw ConfigError("unknown ensemble member kind '" + kind + "'");
      }
      members.push_back(std::move(member));
    }
    return make_ensemble(std::move(members));
  }
  throw ConfigError("unknown model kind '" + spec.kind + "'");
}

TrainerFn make_trainer(const TrainerSpec& spec, int n_threads) {
  return [spec, n_threads](const TrainingSet& train, std::uint64_t fold_seed) {
    AnyModel model = train_model(spec, train, fold_seed, n_threads);
    return Predictor{[model = std::move(model)](std::span<const double> x) {
      return model_predict_proba(model, x);
    }};
  };
}

namespace {

struct PooledEval {
  ConfusionMatrix confusion;
  std::vector<int> predictions;  // pooled, aligned with truths
  std::vector<int> truths;
  std::vector<MetricsSummary> per_fold;
};

void score_fold(const Dataset& dataset, const std::vector<std::int32_t>& test,
                const Predictor& predictor, int n_threads, PooledEval& pooled) {
  std::vector<int> fold_pred(test.size());
  parallel_for(test.size(), n_threads, [&](std::size_t i) {
    std::vector<double> proba = predictor.predict_proba(dataset.features[test[i]]);
    fold_pred[i] = argmax_class(proba);
  });
  ConfusionMatrix fold_confusion(dataset.labels);
  for (std::size_t i = 0; i < test.size(); ++i) {
    int truth = dataset.label_index(dataset.meta[test[i]].label);
    fold_confusion.at(truth, fold_pred[i]) += 1;
    pooled.confusion.at(truth, fold_pred[i]) += 1;
    pooled.predictions.push_back(fold_pred[i]);
    pooled.truths.push_back(truth);
  }
  pooled.per_fold.push_back(compute_metrics(fold_confusion));
}

MetricsSummary average_fold_metrics(const std::vector<MetricsSummary>& folds, int n_classes) {
  MetricsSummary avg;
  avg.per_class.resize(n_classes);
  for (const auto& fold : folds) {
    for (int j = 0; j < n_classes; ++j) {
      avg.per_class[j].precision += fold.per_class[j].precision;
      avg.per_class[j].recall += fold.per_class[j].recall;
      avg.per_class[j].f1 += fold.per_class[j].f1;
    }
    avg.macro.precision += fold.macro.precision;
    avg.macro.recall += fold.macro.recall;
    avg.macro.f1 += fold.macro.f1;
    avg.accuracy += fold.accuracy;
  }
  const double n = static_cast<double>(folds.size());
  for (auto& m : avg.per_class) {
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
  }
  avg.macro.precision /= n;
  avg.macro.recall /= n;
  avg.macro.f1 /= n;
  avg.accuracy /= n;
  return avg;
}

}  // namespace

EvalReport run_cv(const Dataset& dataset, const SplitPlan& plan, const TrainerFn& trainer,
                  const CvOptions& options) {
  if (!dataset.has_features()) throw DataError("run_cv: dataset is not featurized");
  if (plan.folds.empty()) throw DataError("run_cv: plan has no folds");
  for (const auto& fold : plan.folds) {
    for (auto idx : fold.train)
      if (idx < 0 || static_cast<std::size_t>(idx) >= dataset.size())
        throw DataError("run_cv: plan train index out of range");
    for (auto idx : fold.test)
      if (idx < 0 || static_cast<std::size_t>(idx) >= dataset.size())
        throw DataError("run_cv: plan test index out of range");
  }

  EvalReport report;
  report.strategy = grouping_name(plan.grouping);
  report.n_folds = static_cast<int>(plan.folds.size());
  report.k = plan.k;
  report.n_train_cameras = plan.n_train_cameras;
  report.seed = plan.seed;
  report.train_fraction = plan.train_fraction;
  report.per_fold_average = options.per_fold_average;
  report.leakage = check_leakage(plan, dataset);
  report.confusion = ConfusionMatrix(dataset.labels);

  PooledEval pooled{ConfusionMatrix(dataset.labels), {}, {}, {}};
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const Fold& fold = plan.folds[f];
    TrainingSet train = training_set_from_dataset(dataset, fold.train);

    std::set<int> train_classes(train.y.begin(), train.y.end());
    std::set<int> test_classes;
    for (auto idx : fold.test)
      test_classes.insert(dataset.label_index(dataset.meta[idx].label));
    for (int c : test_classes) {
      if (!train_classes.count(c))
        report.warnings.push_back("fold " + std::to_string(f) + ": class '" +
                                  dataset.labels[c] +
                                  "' appears in test but not in training data");
    }

    std::uint64_t fold_seed = Rng::derive(options.seed, {kCvFoldStream, f}).next_u64();
    Predictor predictor = trainer(train, fold_seed);
    score_fold(dataset, fold.test, predictor, options.n_threads, pooled);
  }

  report.confusion = std::move(pooled.confusion);
  report.metrics = options.per_fold_average
                       ? average_fold_metrics(pooled.per_fold, report.confusion.size())
                       : compute_metrics(report.confusion);
  if (dataset.hierarchy)
    report.per_level_accuracy =
        hierarchy_rollup(pooled.predictions, pooled.truths, dataset.labels, *dataset.hierarchy);
  return report;
}

EvalReport evaluate_model(const Dataset& dataset, const AnyModel& model, int n_threads) {
  if (!dataset.has_features()) throw DataError("evaluate_model: dataset is not featurized");
  if (model_labels(model) != dataset.labels)
    throw DataError("model label vocabulary does not match the dataset");

  EvalReport report;
  report.strategy = "pretrained";
  report.n_folds = 1;
  report.confusion = ConfusionMatrix(dataset.labels);

  PooledEval pooled{ConfusionMatrix(dataset.labels), {}, {}, {}};
  std::vector<std::int32_t> all(dataset.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int32_t>(i);
  Predictor predictor{
      [&model](std::span<const double> x) { return model_predict_proba(model, x); }};
  score_fold(dataset, all, predictor, n_threads, pooled);

  report.confusion = std::move(pooled.confusion);
  report.metrics = compute_metrics(report.confusion);
  if (dataset.hierarchy)
    report.per_level_accuracy =
        hierarchy_rollup(pooled.predictions, pooled.truths, dataset.labels, *dataset.hierarchy);
  return report;
}

}  // namespace posebench
