#include "posebench/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "posebench/errors.hpp"

namespace posebench {

double gini_impurity(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0) throw DataError("gini_impurity: negative class count");
    total += c;
  }
  if (total == 0) throw DataError("gini_impurity: empty distribution");
  double acc = 0.0;
  for (auto c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    acc += p * p;
  }
  return 1.0 - acc;
}

double gini_impurity(const ClassDistribution& dist) { return gini_impurity(dist.counts); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cut strictly between a and b (a < b) so that value a routes left and value
// b routes right; falls back to a itself when the midpoint rounds onto an
// endpoint.
inline double cut_between(double a, double b) {
  double m = (a + b) / 2.0;
  if (m > a && m < b) return m;
  return a;
}

inline double gini_pair_impurity(const std::int64_t* left, const std::int64_t* parent, int nc,
                                 std::int64_t wl, std::int64_t wr) {
  double accl = 0.0, accr = 0.0;
  const double dl = static_cast<double>(wl), dr = static_cast<double>(wr);
  for (int j = 0; j < nc; ++j) {
    double pl = static_cast<double>(left[j]) / dl;
    double pr = static_cast<double>(parent[j] - left[j]) / dr;
    accl += pl * pl;
    accr += pr * pr;
  }
  double gl = 1.0 - accl, gr = 1.0 - accr;
  return (dl * gl + dr * gr) / (dl + dr);
}

struct ClassItem {
  double v;
  std::int32_t label;
  std::int32_t w;
};

struct RegItem {
  double v;
  double t;
  std::int32_t w;
};

struct CandidateSplit {
  int feature = -1;
  double threshold = 0.0;
  int split_bin = -1;           // >= 0 on the histogram path
  double objective = kInf;      // minimized
};

// Sweeps sorted items of one feature; boundaries between distinct values.
// Strict improvement keeps the first (lowest feature, lowest threshold) among
// ties because features are visited in ascending order.
void sweep_class_items(std::span<const ClassItem> items, int feature,
                       const std::int64_t* parent_counts, int nc, std::int64_t wt, int min_leaf,
                       std::int64_t* left_scratch, CandidateSplit& best) {
  std::fill(left_scratch, left_scratch + nc, 0);
  std::int64_t wl = 0;
  const std::size_t m = items.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    left_scratch[items[i].label] += items[i].w;
    wl += items[i].w;
    if (!(items[i + 1].v > items[i].v)) continue;
    std::int64_t wr = wt - wl;
    if (wl < min_leaf || wr < min_leaf) continue;
    double imp = gini_pair_impurity(left_scratch, parent_counts, nc, wl, wr);
    if (imp < best.objective) {
      best.feature = feature;
      best.threshold = cut_between(items[i].v, items[i + 1].v);
      best.split_bin = -1;
      best.objective = imp;
    }
  }
}

class TreeGrower {
 public:
  TreeGrower(const TrainingSet& data, const BinnedMatrix* bins, const TreeParams& params,
             Rng* rng)
      : data_(data), bins_(bins), params_(params), rng_(rng), nc_(data.n_classes()) {
    if (bins_ && (bins_->n != data.n || bins_->d != data.d))
      throw DataError("binned matrix shape does not match training data");
    d_ = static_cast<int>(data.d);
    mtry_ = params_.mtry;
    if (mtry_ <= 0 || mtry_ > d_) mtry_ = d_;
    identity_.resize(d_);
    std::iota(identity_.begin(), identity_.end(), 0);
    parent_counts_.resize(nc_);
    left_scratch_.resize(nc_);
    if (bins_) {
      bin_weight_.assign(256, 0);
      bin_count_.assign(256 * static_cast<std::size_t>(nc_), 0);
      bin_sum_.assign(256, 0.0);
    }
  }

  ClassTree grow_classification(std::vector<std::int32_t> idx, std::vector<std::int32_t> wgt) {
    init_samples(std::move(idx), std::move(wgt));
    regression_ = false;
    node_labels_.resize(idx_.size());
    ClassTree tree;
    tree.n_features = d_;
    tree.n_classes = nc_;
    run();
    tree.nodes = std::move(nodes_);
    tree.leaf_pool = std::move(pool_);
    return tree;
  }

  RegTree grow_regression(std::vector<std::int32_t> idx, std::vector<std::int32_t> wgt,
                          std::span<const double> targets,
                          std::vector<std::int32_t>* leaf_of_sample) {
    init_samples(std::move(idx), std::move(wgt));
    regression_ = true;
    targets_ = targets;
    leaf_of_sample_ = leaf_of_sample;
    if (leaf_of_sample_) leaf_of_sample_->assign(data_.n, -1);
    node_targets_.resize(idx_.size());
    RegTree tree;
    tree.n_features = d_;
    run();
    tree.nodes = std::move(nodes_);
    return tree;
  }

 private:
  struct NodeTask {
    std::int32_t node;
    std::int32_t begin;
    std::int32_t end;
    std::int32_t depth;
  };

  void init_samples(std::vector<std::int32_t> idx, std::vector<std::int32_t> wgt) {
    idx_ = std::move(idx);
    if (idx_.empty()) throw DataError("cannot grow a tree from zero samples");
    wgt_ = std::move(wgt);
    if (wgt_.empty()) wgt_.assign(idx_.size(), 1);
    if (wgt_.size() != idx_.size()) throw DataError("sample weight array size mismatch");
    part_idx_.resize(idx_.size());
    part_wgt_.resize(idx_.size());
    if (!bins_) {
      class_items_.resize(idx_.size());
      reg_items_.resize(idx_.size());
    }
    nodes_.clear();
    pool_.clear();
    leaf_of_sample_ = nullptr;
  }

  void run() {
    std::vector<NodeTask> stack;
    nodes_.emplace_back();
    stack.push_back({0, 0, static_cast<std::int32_t>(idx_.size()), 0});
    while (!stack.empty()) {
      NodeTask task = stack.back();
      stack.pop_back();
      process(task, stack);
    }
  }

  void process(const NodeTask& task, std::vector<NodeTask>& stack) {
    const std::int32_t begin = task.begin, end = task.end;
    const std::int32_t m = end - begin;
    std::int64_t wt = 0;
    bool pure = true;

    if (!regression_) {
      std::fill(parent_counts_.begin(), parent_counts_.end(), 0);
      for (std::int32_t pos = begin; pos < end; ++pos) {
        std::int32_t label = data_.y[idx_[pos]];
        node_labels_[pos] = label;
        parent_counts_[label] += wgt_[pos];
        wt += wgt_[pos];
      }
      int seen = 0;
      for (int j = 0; j < nc_; ++j) seen += parent_counts_[j] > 0;
      pure = seen <= 1;
    } else {
      node_sum_ = 0.0;
      double tmin = kInf, tmax = -kInf;
      for (std::int32_t pos = begin; pos < end; ++pos) {
        double t = targets_[idx_[pos]];
        node_targets_[pos] = t;
        node_sum_ += t * wgt_[pos];
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
        wt += wgt_[pos];
      }
      pure = !(tmax > tmin);
    }

    const bool depth_capped = params_.max_depth > 0 && task.depth >= params_.max_depth;
    if (pure || m < 2 || wt < 2 * params_.min_leaf_samples || depth_capped) {
      make_leaf(task.node, begin, end, wt);
      return;
    }

    pick_candidates();
    CandidateSplit best;
    if (regression_) {
      // Splits must beat the parent's score; constant targets never split.
      double parent_score = node_sum_ * node_sum_ / static_cast<double>(wt);
      best.objective = -(parent_score + 1e-12 * (std::abs(parent_score) + 1.0));
      for (int f : candidates_) {
        if (bins_)
          sweep_reg_hist(f, begin, end, wt, best);
        else
          sweep_reg_exact(f, begin, end, wt, best);
      }
    } else {
      for (int f : candidates_) {
        if (bins_)
          sweep_class_hist(f, begin, end, wt, best);
        else
          sweep_class_exact(f, begin, end, wt, best);
      }
    }

    if (best.feature < 0) {
      make_leaf(task.node, begin, end, wt);
      return;
    }

    std::int32_t mid = partition(begin, end, best);
    if (mid == begin || mid == end) {
      make_leaf(task.node, begin, end, wt);
      return;
    }

    std::int32_t left = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    std::int32_t right = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[task.node].feature = best.feature;
    nodes_[task.node].threshold = best.threshold;
    nodes_[task.node].left = left;
    nodes_[task.node].right = right;
    stack.push_back({right, mid, end, task.depth + 1});
    stack.push_back({left, begin, mid, task.depth + 1});
  }

  void pick_candidates() {
    if (mtry_ >= d_) {
      candidates_ = identity_;
      return;
    }
    feature_pool_ = identity_;
    rng_->sample_without_replacement(feature_pool_, mtry_, candidates_);
    std::sort(candidates_.begin(), candidates_.end());
  }

  void make_leaf(std::int32_t node, std::int32_t begin, std::int32_t end, std::int64_t wt) {
    TreeNodeRec& rec = nodes_[node];
    rec.feature = -1;
    if (!regression_) {
      rec.leaf_begin = static_cast<std::int32_t>(pool_.size());
      for (int j = 0; j < nc_; ++j)
        if (parent_counts_[j] > 0) pool_.emplace_back(j, parent_counts_[j]);
      rec.leaf_end = static_cast<std::int32_t>(pool_.size());
    } else {
      rec.threshold = node_sum_ / static_cast<double>(wt);
    }
    if (leaf_of_sample_)
      for (std::int32_t pos = begin; pos < end; ++pos) (*leaf_of_sample_)[idx_[pos]] = node;
  }

  void sweep_class_exact(int f, std::int32_t begin, std::int32_t end, std::int64_t wt,
                         CandidateSplit& best) {
    const double* col = data_.column(f);
    const std::int32_t m = end - begin;
    for (std::int32_t pos = begin; pos < end; ++pos)
      class_items_[pos - begin] = {col[idx_[pos]], node_labels_[pos], wgt_[pos]};
    std::span<ClassItem> items(class_items_.data(), m);
    std::sort(items.begin(), items.end(),
              [](const ClassItem& a, const ClassItem& b) { return a.v < b.v; });
    sweep_class_items(items, f, parent_counts_.data(), nc_, wt, params_.min_leaf_samples,
                      left_scratch_.data(), best);
  }

  void sweep_class_hist(int f, std::int32_t begin, std::int32_t end, std::int64_t wt,
                        CandidateSplit& best) {
    const std::uint8_t* codes = bins_->codes.data() + static_cast<std::size_t>(f) * bins_->n;
    touched_.clear();
    for (std::int32_t pos = begin; pos < end; ++pos) {
      std::uint8_t b = codes[idx_[pos]];
      if (bin_weight_[b] == 0) touched_.push_back(b);
      bin_weight_[b] += wgt_[pos];
      bin_count_[static_cast<std::size_t>(b) * nc_ + node_labels_[pos]] += wgt_[pos];
    }
    std::sort(touched_.begin(), touched_.end());
    if (touched_.size() >= 2) {
      std::fill(left_scratch_.begin(), left_scratch_.end(), 0);
      std::int64_t wl = 0;
      const auto& cuts = bins_->cuts[f];
      for (std::size_t t = 0; t + 1 < touched_.size(); ++t) {
        int b = touched_[t];
        for (int j = 0; j < nc_; ++j)
          left_scratch_[j] += bin_count_[static_cast<std::size_t>(b) * nc_ + j];
        wl += bin_weight_[b];
        std::int64_t wr = wt - wl;
        if (wl < params_.min_leaf_samples || wr < params_.min_leaf_samples) continue;
        double imp = gini_pair_impurity(left_scratch_.data(), parent_counts_.data(), nc_, wl, wr);
        if (imp < best.objective) {
          best.feature = f;
          best.threshold = cuts[b];
          best.split_bin = b;
          best.objective = imp;
        }
      }
    }
    for (int b : touched_) {
      bin_weight_[b] = 0;
      std::fill_n(bin_count_.begin() + static_cast<std::size_t>(b) * nc_, nc_, 0);
    }
  }

  void sweep_reg_exact(int f, std::int32_t begin, std::int32_t end, std::int64_t wt,
                       CandidateSplit& best) {
    const double* col = data_.column(f);
    const std::int32_t m = end - begin;
    for (std::int32_t pos = begin; pos < end; ++pos)
      reg_items_[pos - begin] = {col[idx_[pos]], node_targets_[pos], wgt_[pos]};
    std::span<RegItem> items(reg_items_.data(), m);
    std::sort(items.begin(), items.end(),
              [](const RegItem& a, const RegItem& b) { return a.v < b.v; });
    double ls = 0.0;
    std::int64_t wl = 0;
    for (std::int32_t i = 0; i + 1 < m; ++i) {
      ls += items[i].t * items[i].w;
      wl += items[i].w;
      if (!(items[i + 1].v > items[i].v)) continue;
      std::int64_t wr = wt - wl;
      if (wl < params_.min_leaf_samples || wr < params_.min_leaf_samples) continue;
      double rs = node_sum_ - ls;
      double objective = -(ls * ls / static_cast<double>(wl) + rs * rs / static_cast<double>(wr));
      if (objective < best.objective) {
        best.feature = f;
        best.threshold = cut_between(items[i].v, items[i + 1].v);
        best.split_bin = -1;
        best.objective = objective;
      }
    }
  }

  void sweep_reg_hist(int f, std::int32_t begin, std::int32_t end, std::int64_t wt,
                      CandidateSplit& best) {
    const std::uint8_t* codes = bins_->codes.data() + static_cast<std::size_t>(f) * bins_->n;
    touched_.clear();
    for (std::int32_t pos = begin; pos < end; ++pos) {
      std::uint8_t b = codes[idx_[pos]];
      if (bin_weight_[b] == 0) touched_.push_back(b);
      bin_weight_[b] += wgt_[pos];
      bin_sum_[b] += node_targets_[pos] * wgt_[pos];
    }
    std::sort(touched_.begin(), touched_.end());
    if (touched_.size() >= 2) {
      double ls = 0.0;
      std::int64_t wl = 0;
      const auto& cuts = bins_->cuts[f];
      for (std::size_t t = 0; t + 1 < touched_.size(); ++t) {
        int b = touched_[t];
        ls += bin_sum_[b];
        wl += bin_weight_[b];
        std::int64_t wr = wt - wl;
        if (wl < params_.min_leaf_samples || wr < params_.min_leaf_samples) continue;
        double rs = node_sum_ - ls;
        double objective =
            -(ls * ls / static_cast<double>(wl) + rs * rs / static_cast<double>(wr));
        if (objective < best.objective) {
          best.feature = f;
          best.threshold = cuts[b];
          best.split_bin = b;
          best.objective = objective;
        }
      }
    }
    for (int b : touched_) {
      bin_weight_[b] = 0;
      bin_sum_[b] = 0.0;
    }
  }

  // Stable two-pass partition keeps relative order, so growth is fully
  // deterministic given the input order.
  std::int32_t partition(std::int32_t begin, std::int32_t end, const CandidateSplit& best) {
    std::int32_t k = 0;
    const std::int32_t m = end - begin;
    if (best.split_bin >= 0) {
      const std::uint8_t* codes =
          bins_->codes.data() + static_cast<std::size_t>(best.feature) * bins_->n;
      for (std::int32_t pos = begin; pos < end; ++pos)
        if (codes[idx_[pos]] <= best.split_bin) {
          part_idx_[k] = idx_[pos];
          part_wgt_[k] = wgt_[pos];
          ++k;
        }
      std::int32_t mid = begin + k;
      for (std::int32_t pos = begin; pos < end; ++pos)
        if (codes[idx_[pos]] > best.split_bin) {
          part_idx_[k] = idx_[pos];
          part_wgt_[k] = wgt_[pos];
          ++k;
        }
      std::copy_n(part_idx_.begin(), m, idx_.begin() + begin);
      std::copy_n(part_wgt_.begin(), m, wgt_.begin() + begin);
      return mid;
    }
    const double* col = data_.column(best.feature);
    for (std::int32_t pos = begin; pos < end; ++pos)
      if (col[idx_[pos]] <= best.threshold) {
        part_idx_[k] = idx_[pos];
        part_wgt_[k] = wgt_[pos];
        ++k;
      }
    std::int32_t mid = begin + k;
    for (std::int32_t pos = begin; pos < end; ++pos)
      if (col[idx_[pos]] > best.threshold) {
        part_idx_[k] = idx_[pos];
        part_wgt_[k] = wgt_[pos];
        ++k;
      }
    std::copy_n(part_idx_.begin(), m, idx_.begin() + begin);
    std::copy_n(part_wgt_.begin(), m, wgt_.begin() + begin);
    return mid;
  }

  const TrainingSet& data_;
  const BinnedMatrix* bins_;
  TreeParams params_;
  Rng* rng_;
  int nc_;
  int d_ = 0;
  int mtry_ = 0;
  bool regression_ = false;
  std::span<const double> targets_;
  std::vector<std::int32_t>* leaf_of_sample_ = nullptr;

  std::vector<std::int32_t> idx_, wgt_;
  std::vector<TreeNodeRec> nodes_;
  std::vector<std::pair<std::int32_t, std::int64_t>> pool_;

  double node_sum_ = 0.0;
  std::vector<std::int32_t> node_labels_;
  std::vector<double> node_targets_;
  std::vector<std::int64_t> parent_counts_, left_scratch_;
  std::vector<std::int32_t> bin_weight_;
  std::vector<std::int32_t> bin_count_;
  std::vector<double> bin_sum_;
  std::vector<int> touched_;
  std::vector<int> identity_, feature_pool_, candidates_;
  std::vector<ClassItem> class_items_;
  std::vector<RegItem> reg_items_;
  std::vector<std::int32_t> part_idx_, part_wgt_;
};

}  // namespace

std::optional<SplitChoice> best_split(const TrainingSet& data,
                                      std::span<const std::int32_t> sample_idx,
                                      std::span<const int> candidate_features, int min_leaf) {
  if (sample_idx.size() < 2) throw DataError("best_split requires at least 2 samples");
  if (candidate_features.empty()) throw DataError("best_split requires candidate features");
  const int nc = data.n_classes();
  std::vector<std::int64_t> parent(nc, 0), left_scratch(nc, 0);
  std::int64_t wt = 0;
  for (auto row : sample_idx) {
    parent[data.y[row]] += 1;
    wt += 1;
  }
  std::vector<int> features(candidate_features.begin(), candidate_features.end());
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  std::vector<ClassItem> items(sample_idx.size());
  CandidateSplit best;
  for (int f : features) {
    if (f < 0 || static_cast<std::size_t>(f) >= data.d)
      throw DataError("best_split: candidate feature index out of range");
    const double* col = data.column(f);
    for (std::size_t i = 0; i < sample_idx.size(); ++i)
      items[i] = {col[sample_idx[i]], data.y[sample_idx[i]], 1};
    std::sort(items.begin(), items.end(),
              [](const ClassItem& a, const ClassItem& b) { return a.v < b.v; });
    sweep_class_items(items, f, parent.data(), nc, wt, min_leaf, left_scratch.data(), best);
  }
  if (best.feature < 0) return std::nullopt;
  double acc = 0.0;
  for (int j = 0; j < nc; ++j) {
    double p = static_cast<double>(parent[j]) / static_cast<double>(wt);
    acc += p * p;
  }
  double parent_gini = 1.0 - acc;
  return SplitChoice{best.feature, best.threshold, parent_gini - best.objective};
}

BinnedMatrix build_bins(const TrainingSet& data, int max_bins) {
  if (max_bins < 2 || max_bins > 256)
    throw ConfigError("histogram bins must lie in [2, 256]");
  BinnedMatrix bm;
  bm.n = data.n;
  bm.d = data.d;
  bm.codes.resize(data.n * data.d);
  bm.cuts.resize(data.d);

  std::vector<double> sorted(data.n);
  std::vector<double> values;
  std::vector<std::int64_t> multiplicity;
  for (std::size_t f = 0; f < data.d; ++f) {
    const double* col = data.column(f);
    std::copy(col, col + data.n, sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    values.clear();
    multiplicity.clear();
    for (double v : sorted) {
      if (values.empty() || v > values.back()) {
        values.push_back(v);
        multiplicity.push_back(1);
      } else {
        ++multiplicity.back();
      }
    }
    std::vector<double>& cuts = bm.cuts[f];
    if (values.size() <= static_cast<std::size_t>(max_bins)) {
      for (std::size_t i = 0; i + 1 < values.size(); ++i)
        cuts.push_back(cut_between(values[i], values[i + 1]));
    } else {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        acc += multiplicity[i];
        if (static_cast<int>(cuts.size()) >= max_bins - 1) break;
        double quota = static_cast<double>(cuts.size() + 1) * static_cast<double>(data.n) /
                       static_cast<double>(max_bins);
        if (static_cast<double>(acc) >= quota)
          cuts.push_back(cut_between(values[i], values[i + 1]));
      }
    }
    std::uint8_t* codes = bm.codes.data() + f * data.n;
    for (std::size_t i = 0; i < data.n; ++i) {
      auto it = std::lower_bound(cuts.begin(), cuts.end(), col[i]);
      codes[i] = static_cast<std::uint8_t>(it - cuts.begin());
    }
  }
  return bm;
}

ClassTree grow_class_tree(GrowInput in, const TreeParams& params, Rng& rng) {
  if (!in.data) throw DataError("grow_class_tree: missing training data");
  TreeGrower grower(*in.data, in.bins, params, &rng);
  return grower.grow_classification(std::move(in.sample_idx), std::move(in.sample_weight));
}

RegTree grow_reg_tree(GrowInput in, std::span<const double> targets, const TreeParams& params,
                      std::vector<std::int32_t>* leaf_of_sample) {
  if (!in.data) throw DataError("grow_reg_tree: missing training data");
  if (targets.size() != in.data->n)
    throw DataError("grow_reg_tree: target array must cover every training row");
  TreeParams reg_params = params;
  reg_params.mtry = 0;  // regression trees consider every feature
  TreeGrower grower(*in.data, in.bins, reg_params, nullptr);
  return grower.grow_regression(std::move(in.sample_idx), std::move(in.sample_weight), targets,
                                leaf_of_sample);
}

ClassTree fit_tree(const TrainingSet& data, const TreeParams& params, Rng& rng) {
  if (data.n == 0) throw DataError("fit_tree: empty training set");
  GrowInput in;
  in.data = &data;
  BinnedMatrix bins;
  if (params.histogram_bins > 0) {
    bins = build_bins(data, params.histogram_bins);
    in.bins = &bins;
  }
  in.sample_idx.resize(data.n);
  std::iota(in.sample_idx.begin(), in.sample_idx.end(), 0);
  return grow_class_tree(std::move(in), params, rng);
}

std::vector<double> tree_predict(const ClassTree& tree, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(tree.n_features))
    throw DataError("tree_predict: input has " + std::to_string(x.size()) +
                    " features, tree expects " + std::to_string(tree.n_features));
  const TreeNodeRec* node = &tree.nodes[0];
  while (!node->is_leaf())
    node = &tree.nodes[x[node->feature] <= node->threshold ? node->left : node->right];
  std::vector<double> probs(tree.n_classes, 0.0);
  std::int64_t total = 0;
  for (std::int32_t i = node->leaf_begin; i < node->leaf_end; ++i)
    total += tree.leaf_pool[i].second;
  for (std::int32_t i = node->leaf_begin; i < node->leaf_end; ++i)
    probs[tree.leaf_pool[i].first] =
        static_cast<double>(tree.leaf_pool[i].second) / static_cast<double>(total);
  return probs;
}

double reg_tree_predict(const RegTree& tree, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(tree.n_features))
    throw DataError("reg_tree_predict: feature dimension mismatch");
  const TreeNodeRec* node = &tree.nodes[0];
  while (!node->is_leaf())
    node = &tree.nodes[x[node->feature] <= node->threshold ? node->left : node->right];
  return node->threshold;
}

int argmax_class(std::span<const double> probabilities) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(probabilities.size()); ++j)
    if (probabilities[j] > probabilities[best]) best = j;
  return best;
}

}  // namespace posebench
