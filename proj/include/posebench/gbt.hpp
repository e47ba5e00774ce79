#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "posebench/tree.hpp"
#include "posebench/training_set.hpp"

namespace posebench {

struct GbtParams {
  int n_rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 6;
  int min_leaf_samples = 1;
  int histogram_bins = 0;
  std::uint64_t seed = 0;
};

// Multiclass log-loss boosting: per round, one squared-error regression tree
// per class fit to the residual (one-hot minus softmax probability). Leaf
// values carry the Newton step scaled by the learning rate, so prediction is
// a plain sum of tree outputs over the base log-prior scores.
struct BoostedModel {
  GbtParams params;
  std::int32_t n_features = 0;
  std::vector<std::string> labels;
  std::vector<double> base_scores;   // per-class log prior
  std::vector<RegTree> trees;        // round-major: trees[round * n_classes + class]
  std::vector<double> train_loss;    // [0] = initial loss, then one entry per round
};

BoostedModel fit_gbt(const TrainingSet& data, GbtParams params, int n_threads = 1);

std::vector<double> gbt_predict_proba(const BoostedModel& model, std::span<const double> x);

// Softmax with max subtraction; shared by training and prediction.
void softmax_inplace(std::span<double> scores);

}  // namespace posebench
