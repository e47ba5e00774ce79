#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "posebench/tree.hpp"
#include "posebench/training_set.hpp"

namespace posebench {

struct ForestParams {
  int n_trees = 500;
  int mtry = 0;             // 0 => floor(sqrt(d)), resolved at fit time
  int min_leaf_samples = 1;
  int max_depth = 0;        // 0 => grow to purity
  int histogram_bins = 0;   // 0 => exact splits
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct ForestModel {
  ForestParams params;
  std::int32_t n_features = 0;
  std::vector<std::string> labels;
  std::vector<ClassTree> trees;
};

// Bootstrap-resampled CART trees; tree i draws its randomness from
// (seed, i), so the result is independent of thread count and training
// order. Throws DataError on an empty or single-class dataset.
ForestModel fit_forest(const TrainingSet& data, ForestParams params, int n_threads = 1);

enum class VoteMode { kSoft, kHard };

// Soft voting: mean of per-tree probability vectors. Hard voting (behind
// the flag): each tree casts one vote for its argmax class.
std::vector<double> forest_predict_proba(const ForestModel& model, std::span<const double> x,
                                         VoteMode mode = VoteMode::kSoft);

// Accuracy over training samples using only the trees whose bootstrap missed
// them. Bootstrap draws are replayed from the model seed, so this needs the
// exact training set the model was fit on.
double forest_oob_accuracy(const ForestModel& model, const TrainingSet& data);

}  // namespace posebench
