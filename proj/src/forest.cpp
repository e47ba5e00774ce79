#include "posebench/forest.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "posebench/errors.hpp"
#include "posebench/parallel.hpp"

namespace posebench {

namespace {

constexpr std::uint64_t kForestTreeStream = 0x464f5245;  // per-tree rng stream tag

void bootstrap_draw(Rng& rng, std::size_t n, std::vector<std::int32_t>& idx,
                    std::vector<std::int32_t>& wgt) {
  std::vector<std::int32_t> counts(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++counts[rng.uniform_index(n)];
  idx.clear();
  wgt.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] > 0) {
      idx.push_back(static_cast<std::int32_t>(i));
      wgt.push_back(counts[i]);
    }
  }
}

void check_trainable(const TrainingSet& data) {
  if (data.n == 0) throw DataError("cannot train on an empty dataset");
  std::set<std::int32_t> distinct(data.y.begin(), data.y.end());
  if (distinct.size() < 2)
    throw DataError("cannot train a classifier on a single-class dataset");
}

}  // namespace

ForestModel fit_forest(const TrainingSet& data, ForestParams params, int n_threads) {
  check_trainable(data);
  if (params.n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (params.mtry <= 0)
    params.mtry = static_cast<int>(std::floor(std::sqrt(static_cast<double>(data.d))));
  params.mtry = std::min<int>(params.mtry, static_cast<int>(data.d));

  BinnedMatrix bins;
  const BinnedMatrix* bins_ptr = nullptr;
  if (params.histogram_bins > 0) {
    bins = build_bins(data, params.histogram_bins);
    bins_ptr = &bins;
  }

  ForestModel model;
  model.params = params;
  model.n_features = static_cast<std::int32_t>(data.d);
  model.labels = data.labels;
  model.trees.resize(params.n_trees);

  TreeParams tp{params.mtry, params.min_leaf_samples, params.max_depth, params.histogram_bins};
  parallel_for(static_cast<std::size_t>(params.n_trees), n_threads, [&](std::size_t i) {
    Rng rng = Rng::derive(params.seed, {kForestTreeStream, i});
    GrowInput in;
    in.data = &data;
    in.bins = bins_ptr;
    if (params.bootstrap) {
      bootstrap_draw(rng, data.n, in.sample_idx, in.sample_weight);
    } else {
      in.sample_idx.resize(data.n);
      std::iota(in.sample_idx.begin(), in.sample_idx.end(), 0);
    }
    model.trees[i] = grow_class_tree(std::move(in), tp, rng);
  });
  return model;
}

std::vector<double> forest_predict_proba(const ForestModel& model, std::span<const double> x,
                                         VoteMode mode) {
  if (model.trees.empty()) throw DataError("forest model has no trees");
  std::vector<double> acc(model.labels.size(), 0.0);
  for (const auto& tree : model.trees) {
    std::vector<double> p = tree_predict(tree, x);
    if (mode == VoteMode::kSoft) {
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += p[j];
    } else {
      acc[argmax_class(p)] += 1.0;
    }
  }
  const double scale = 1.0 / static_cast<double>(model.trees.size());
  for (double& v : acc) v *= scale;
  return acc;
}

double forest_oob_accuracy(const ForestModel& model, const TrainingSet& data) {
  if (!model.params.bootstrap)
    throw DataError("out-of-bag accuracy requires a bootstrapped forest");
  std::vector<std::vector<double>> votes(data.n,
                                         std::vector<double>(model.labels.size(), 0.0));
  std::vector<int> oob_trees(data.n, 0);
  std::vector<std::int32_t> counts(data.n);
  std::vector<double> x(data.d);
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    Rng rng = Rng::derive(model.params.seed, {kForestTreeStream, t});
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < data.n; ++i) ++counts[rng.uniform_index(data.n)];
    for (std::size_t i = 0; i < data.n; ++i) {
      if (counts[i] != 0) continue;
      for (std::size_t f = 0; f < data.d; ++f) x[f] = data.at(i, f);
      std::vector<double> p = tree_predict(model.trees[t], x);
      for (std::size_t j = 0; j < p.size(); ++j) votes[i][j] += p[j];
      ++oob_trees[i];
    }
  }
  std::int64_t correct = 0, counted = 0;
  for (std::size_t i = 0; i < data.n; ++i) {
    if (oob_trees[i] == 0) continue;
    ++counted;
    if (argmax_class(votes[i]) == data.y[i]) ++correct;
  }
  if (counted == 0) throw DataError("no out-of-bag samples to score");
  return static_cast<double>(correct) / static_cast<double>(counted);
}

}  // namespace posebench
