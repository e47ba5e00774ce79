#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "posebench/rng.hpp"
#include "posebench/training_set.hpp"

namespace posebench {

struct ClassDistribution {
  std::vector<std::int64_t> counts;

  std::int64_t total() const {
    std::int64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

// 1 - sum_j p_j^2 over the distribution; range [0, 1 - 1/c].
// Throws DataError when the distribution is empty (impurity undefined).
double gini_impurity(std::span<const std::int64_t> counts);
double gini_impurity(const ClassDistribution& dist);

struct TreeParams {
  int mtry = 0;             // candidate features per split; 0 => all
  int min_leaf_samples = 1;
  int max_depth = 0;        // 0 => grow to purity
  int histogram_bins = 0;   // 0 => exact midpoint splits
};

// Flat node record; index 0 is the root. feature == -1 marks a leaf.
// Samples with x[feature] <= threshold route left. Classification leaves
// store their class distribution as a [leaf_begin, leaf_end) range of the
// tree's sparse (class, count) pool; regression leaves reuse `threshold`
// as the leaf value.
struct TreeNodeRec {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t leaf_begin = -1;
  std::int32_t leaf_end = -1;

  bool is_leaf() const { return feature < 0; }
};

struct ClassTree {
  std::int32_t n_features = 0;
  std::int32_t n_classes = 0;
  std::vector<TreeNodeRec> nodes;
  std::vector<std::pair<std::int32_t, std::int64_t>> leaf_pool;
};

struct RegTree {
  std::int32_t n_features = 0;
  std::vector<TreeNodeRec> nodes;
};

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;  // parent impurity minus weighted child impurity
};

// Best exact split over the candidate features: minimizes weighted child
// Gini over all midpoints between consecutive distinct values, ties broken
// by (lower feature index, lower threshold). Returns nullopt when no
// candidate feature separates the samples.
std::optional<SplitChoice> best_split(const TrainingSet& data,
                                      std::span<const std::int32_t> sample_idx,
                                      std::span<const int> candidate_features,
                                      int min_leaf = 1);

// Feature quantization shared across the trees of one ensemble fit. Cut
// points sit strictly between adjacent representable values, so routing by
// threshold agrees with routing by bin code. At most 255 cuts per feature;
// when a feature has fewer distinct values than bins the cuts equal the
// exact splitter's midpoints.
struct BinnedMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::uint8_t> codes;        // column-major, codes[f * n + i]
  std::vector<std::vector<double>> cuts;  // ascending per feature
};

BinnedMatrix build_bins(const TrainingSet& data, int max_bins);

// Inputs for one tree. sample_idx lists distinct training rows;
// sample_weight (parallel, empty => all ones) carries bootstrap
// multiplicities. Both vectors are consumed by the grower.
struct GrowInput {
  const TrainingSet* data = nullptr;
  const BinnedMatrix* bins = nullptr;  // null => exact splits
  std::vector<std::int32_t> sample_idx;
  std::vector<std::int32_t> sample_weight;
};

ClassTree grow_class_tree(GrowInput in, const TreeParams& params, Rng& rng);

// Squared-error regression tree over `targets` (indexed by training row).
// Leaves hold the weighted mean target. When leaf_of_sample is non-null it
// receives, per training row in sample_idx, the leaf node index (so callers
// can overwrite leaf values, as boosting does).
RegTree grow_reg_tree(GrowInput in, std::span<const double> targets, const TreeParams& params,
                      std::vector<std::int32_t>* leaf_of_sample = nullptr);

// CART on every sample of `data` (convenience wrapper over grow_class_tree).
ClassTree fit_tree(const TrainingSet& data, const TreeParams& params, Rng& rng);

// Routes x to a leaf and returns its distribution normalized to
// probabilities. Throws DataError on dimension mismatch.
std::vector<double> tree_predict(const ClassTree& tree, std::span<const double> x);
double reg_tree_predict(const RegTree& tree, std::span<const double> x);

// Hard prediction rule used everywhere: argmax with lower-index tie-break.
int argmax_class(std::span<const double> probabilities);

}  // namespace posebench
