#include "posebench/folds.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "posebench/errors.hpp"
#include "posebench/rng.hpp"

namespace posebench {

namespace {

constexpr std::uint64_t kFoldStream = 0x464f4c44;

void finalize(SplitPlan& plan) {
  double fraction = 0.0;
  for (auto& fold : plan.folds) {
    std::sort(fold.train.begin(), fold.train.end());
    std::sort(fold.test.begin(), fold.test.end());
    fraction += static_cast<double>(fold.train.size()) /
                static_cast<double>(fold.train.size() + fold.test.size());
  }
  plan.train_fraction = fraction / static_cast<double>(plan.folds.size());
}

// Near-equal partition: the first (size % k) groups get one extra element.
std::vector<std::vector<std::int32_t>> partition_groups(const std::vector<std::int32_t>& items,
                                                        int k) {
  std::vector<std::vector<std::int32_t>> groups(k);
  const std::size_t base = items.size() / k;
  const std::size_t extra = items.size() % k;
  std::size_t at = 0;
  for (int g = 0; g < k; ++g) {
    std::size_t take = base + (static_cast<std::size_t>(g) < extra ? 1 : 0);
    groups[g].assign(items.begin() + at, items.begin() + at + take);
    at += take;
  }
  return groups;
}

}  // namespace

std::string grouping_name(Grouping g) {
  switch (g) {
    case Grouping::kFrame: return "frame";
    case Grouping::kSubject: return "subject";
    case Grouping::kCamera: return "camera";
  }
  return "?";
}

SplitPlan frame_folds(const Dataset& dataset, int k, std::uint64_t seed, bool stratified) {
  if (k < 2) throw ConfigError("frame_folds: k must be >= 2");
  if (dataset.size() < static_cast<std::size_t>(k))
    throw DataError("frame_folds: dataset smaller than k");

  std::vector<std::int32_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::derive(seed, {kFoldStream, 0});
  rng.shuffle(order);

  std::vector<std::vector<std::int32_t>> groups;
  if (!stratified) {
    groups = partition_groups(order, k);
  } else {
    // Round-robin per label over the shuffled order.
    groups.resize(k);
    std::map<std::string, int> next_fold;
    for (std::int32_t idx : order) {
      int& fold = next_fold[dataset.meta[idx].label];
      groups[fold].push_back(idx);
      fold = (fold + 1) % k;
    }
  }

  SplitPlan plan;
  plan.grouping = Grouping::kFrame;
  plan.k = k;
  plan.seed = seed;
  plan.folds.resize(k);
  for (int f = 0; f < k; ++f) {
    plan.folds[f].test = groups[f];
    for (int g = 0; g < k; ++g)
      if (g != f)
        plan.folds[f].train.insert(plan.folds[f].train.end(), groups[g].begin(),
                                   groups[g].end());
  }
  finalize(plan);
  return plan;
}

SplitPlan subject_folds(const Dataset& dataset, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("subject_folds: k must be >= 2");
  std::map<std::string, std::vector<std::int32_t>> by_subject;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    by_subject[dataset.meta[i].subject_id].push_back(static_cast<std::int32_t>(i));
  if (by_subject.size() < static_cast<std::size_t>(k))
    throw DataError("subject_folds: fewer distinct subjects than folds");

  std::vector<std::string> subjects;
  for (const auto& [subject, _] : by_subject) subjects.push_back(subject);
  Rng rng = Rng::derive(seed, {kFoldStream, 1});
  rng.shuffle(subjects);

  std::vector<std::int32_t> subject_ids(subjects.size());
  std::iota(subject_ids.begin(), subject_ids.end(), 0);
  auto groups = partition_groups(subject_ids, k);

  SplitPlan plan;
  plan.grouping = Grouping::kSubject;
  plan.k = k;
  plan.seed = seed;
  plan.folds.resize(k);
  for (int f = 0; f < k; ++f) {
    std::set<std::int32_t> test_subjects(groups[f].begin(), groups[f].end());
    for (std::size_t s = 0; s < subjects.size(); ++s) {
      const auto& samples = by_subject.at(subjects[s]);
      auto& dst = test_subjects.count(static_cast<std::int32_t>(s)) ? plan.folds[f].test
                                                                    : plan.folds[f].train;
      dst.insert(dst.end(), samples.begin(), samples.end());
    }
  }
  finalize(plan);
  return plan;
}

SplitPlan camera_splits(const Dataset& dataset, int n_train_cameras) {
  std::map<std::string, std::vector<std::int32_t>> by_camera;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    by_camera[dataset.meta[i].camera_id].push_back(static_cast<std::int32_t>(i));
  const int m = static_cast<int>(by_camera.size());
  if (n_train_cameras < 1 || n_train_cameras >= m)
    throw ConfigError("camera_splits: n_train_cameras must lie in [1, cameras-1]");

  std::vector<std::string> cameras;
  for (const auto& [camera, _] : by_camera) cameras.push_back(camera);

  SplitPlan plan;
  plan.grouping = Grouping::kCamera;
  plan.n_train_cameras = n_train_cameras;

  // All size-n combinations in lexicographic order.
  std::vector<int> combo(n_train_cameras);
  std::iota(combo.begin(), combo.end(), 0);
  while (true) {
    Fold fold;
    std::set<int> train_set(combo.begin(), combo.end());
    for (int c = 0; c < m; ++c) {
      const auto& samples = by_camera.at(cameras[c]);
      auto& dst = train_set.count(c) ? fold.train : fold.test;
      dst.insert(dst.end(), samples.begin(), samples.end());
    }
    plan.folds.push_back(std::move(fold));

    int pos = n_train_cameras - 1;
    while (pos >= 0 && combo[pos] == m - n_train_cameras + pos) --pos;
    if (pos < 0) break;
    ++combo[pos];
    for (int j = pos + 1; j < n_train_cameras; ++j) combo[j] = combo[j - 1] + 1;
  }
  finalize(plan);
  return plan;
}

LeakageVerdict check_leakage(const SplitPlan& plan, const Dataset& dataset) {
  LeakageVerdict verdict;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    std::set<std::string> train_videos, reported;
    for (auto idx : plan.folds[f].train) train_videos.insert(dataset.meta[idx].video_id);
    for (auto idx : plan.folds[f].test) {
      const SampleMeta& meta = dataset.meta[idx];
      if (!train_videos.count(meta.video_id)) continue;
      if (!reported.insert(meta.video_id).second) continue;
      std::string group_key;
      switch (plan.grouping) {
        case Grouping::kFrame: group_key = meta.video_id; break;
        case Grouping::kSubject: group_key = meta.subject_id; break;
        case Grouping::kCamera: group_key = meta.camera_id; break;
      }
      verdict.violations.push_back({static_cast<int>(f), meta.video_id, group_key});
    }
  }
  verdict.leaky = !verdict.violations.empty();
  return verdict;
}

}  // namespace posebench
