#include "posebench/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "posebench/errors.hpp"
#include "posebench/parallel.hpp"

namespace posebench {

void softmax_inplace(std::span<double> scores) {
  double mx = scores[0];
  for (double v : scores) mx = std::max(mx, v);
  double sum = 0.0;
  for (double& v : scores) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : scores) v /= sum;
}

namespace {

// Probability floor for log priors of classes absent from the training fold.
constexpr double kPriorFloor = 1e-12;

double mean_log_loss(const std::vector<double>& probs, const std::vector<std::int32_t>& y,
                     int n_classes) {
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    loss -= std::log(probs[i * n_classes + y[i]]);
  return loss / static_cast<double>(y.size());
}

}  // namespace

BoostedModel fit_gbt(const TrainingSet& data, GbtParams params, int n_threads) {
  if (data.n == 0) throw DataError("cannot train on an empty dataset");
  {
    std::set<std::int32_t> distinct(data.y.begin(), data.y.end());
    if (distinct.size() < 2)
      throw DataError("cannot train a classifier on a single-class dataset");
  }
  if (params.n_rounds < 0) throw ConfigError("n_rounds must be >= 0");
  if (!(params.learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");

  const int K = data.n_classes();
  const std::size_t n = data.n;

  BoostedModel model;
  model.params = params;
  model.n_features = static_cast<std::int32_t>(data.d);
  model.labels = data.labels;
  model.base_scores.resize(K);
  {
    std::vector<std::int64_t> counts(K, 0);
    for (auto label : data.y) ++counts[label];
    for (int c = 0; c < K; ++c) {
      double prior = static_cast<double>(counts[c]) / static_cast<double>(n);
      model.base_scores[c] = std::log(std::max(prior, kPriorFloor));
    }
  }

  BinnedMatrix bins;
  const BinnedMatrix* bins_ptr = nullptr;
  if (params.histogram_bins > 0) {
    bins = build_bins(data, params.histogram_bins);
    bins_ptr = &bins;
  }

  std::vector<double> scores(n * K);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < K; ++c) scores[i * K + c] = model.base_scores[c];

  std::vector<double> probs(n * K);
  auto recompute = [&] {
    std::copy(scores.begin(), scores.end(), probs.begin());
    for (std::size_t i = 0; i < n; ++i)
      softmax_inplace(std::span<double>(probs.data() + i * K, K));
  };
  recompute();
  model.train_loss.push_back(mean_log_loss(probs, data.y, K));

  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf_samples = params.min_leaf_samples;
  tp.histogram_bins = params.histogram_bins;

  const double shrink = params.learning_rate * static_cast<double>(K - 1) /
                        static_cast<double>(K);
  std::vector<std::vector<double>> residuals(K, std::vector<double>(n));
  std::vector<std::vector<std::int32_t>> leaf_of(K);
  model.trees.resize(static_cast<std::size_t>(params.n_rounds) * K);

  for (int round = 0; round < params.n_rounds; ++round) {
    parallel_for(static_cast<std::size_t>(K), n_threads, [&](std::size_t c) {
      std::vector<double>& r = residuals[c];
      for (std::size_t i = 0; i < n; ++i)
        r[i] = (data.y[i] == static_cast<std::int32_t>(c) ? 1.0 : 0.0) - probs[i * K + c];

      GrowInput in;
      in.data = &data;
      in.bins = bins_ptr;
      in.sample_idx.resize(n);
      std::iota(in.sample_idx.begin(), in.sample_idx.end(), 0);
      RegTree tree = grow_reg_tree(std::move(in), r, tp, &leaf_of[c]);

      // Newton leaf values: shrink * sum(residual) / sum(p * (1 - p)).
      std::vector<double> num(tree.nodes.size(), 0.0), den(tree.nodes.size(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        std::int32_t leaf = leaf_of[c][i];
        double p = probs[i * K + c];
        num[leaf] += r[i];
        den[leaf] += p * (1.0 - p);
      }
      for (std::size_t node = 0; node < tree.nodes.size(); ++node) {
        if (!tree.nodes[node].is_leaf()) continue;
        tree.nodes[node].threshold =
            den[node] > 1e-10 ? shrink * num[node] / den[node] : 0.0;
      }
      for (std::size_t i = 0; i < n; ++i)
        scores[i * K + c] += tree.nodes[leaf_of[c][i]].threshold;
      model.trees[static_cast<std::size_t>(round) * K + c] = std::move(tree);
    });
    recompute();
    model.train_loss.push_back(mean_log_loss(probs, data.y, K));
  }
  return model;
}

std::vector<double> gbt_predict_proba(const BoostedModel& model, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(model.n_features))
    throw DataError("gbt_predict_proba: feature dimension mismatch");
  std::vector<double> scores = model.base_scores;
  const int K = static_cast<int>(model.labels.size());
  for (std::size_t t = 0; t < model.trees.size(); ++t)
    scores[t % K] += reg_tree_predict(model.trees[t], x);
  softmax_inplace(scores);
  return scores;
}

}  // namespace posebench
