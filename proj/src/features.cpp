#include "posebench/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "posebench/errors.hpp"

namespace posebench {

std::vector<Keypoint> top_k_by_confidence(std::span<const Keypoint> keypoints, int k) {
  if (keypoints.empty()) throw DataError("top_k_by_confidence: empty keypoint set");
  if (k < 1) throw DataError("top_k_by_confidence: k must be >= 1");

  std::vector<int> order(keypoints.size());
  std::iota(order.begin(), order.end(), 0);
  // Higher confidence first; equal confidences keep the lower index.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return keypoints[a].confidence > keypoints[b].confidence;
  });
  int take = std::min<int>(k, static_cast<int>(order.size()));
  order.resize(take);
  std::sort(order.begin(), order.end());

  std::vector<Keypoint> out;
  out.reserve(take);
  for (int idx : order) out.push_back(keypoints[idx]);
  return out;
}

AggregatePoints aggregate_keypoint_set(std::span<const Keypoint> keypoints, int k) {
  std::vector<Keypoint> top = top_k_by_confidence(keypoints, k);
  AggregatePoints agg;
  agg.min_x = agg.max_x = top[0].x;
  agg.min_y = agg.max_y = top[0].y;
  double sum_x = 0.0, sum_y = 0.0;
  for (const auto& p : top) {
    sum_x += p.x;
    sum_y += p.y;
    agg.min_x = std::min(agg.min_x, p.x);
    agg.max_x = std::max(agg.max_x, p.x);
    agg.min_y = std::min(agg.min_y, p.y);
    agg.max_y = std::max(agg.max_y, p.y);
  }
  agg.mean_x = sum_x / static_cast<double>(top.size());
  agg.mean_y = sum_y / static_cast<double>(top.size());
  return agg;
}

std::pair<double, double> normalize_to_bbox(double x, double y, const BoundingBox& box) {
  return {(x - box.x) / box.w, (y - box.y) / box.h};
}

namespace {

void put_normalized(FeatureVector& out, int at, double x, double y, const BoundingBox& box) {
  auto [nx, ny] = normalize_to_bbox(x, y, box);
  out[at] = nx;
  out[at + 1] = ny;
}

void put_aggregate(FeatureVector& out, int at, std::span<const Keypoint> set,
                   const BoundingBox& box) {
  AggregatePoints agg = aggregate_keypoint_set(set, kAggregateTopK);
  put_normalized(out, at, agg.mean_x, agg.mean_y, box);
  put_normalized(out, at + 2, agg.min_x, agg.min_y, box);
  put_normalized(out, at + 4, agg.max_x, agg.max_y, box);
}

}  // namespace

FeatureVector featurize(const PoseDetection& detection) {
  if (detection.keypoints.size() != static_cast<std::size_t>(kKeypointCount))
    throw DataError("featurize: detection has " + std::to_string(detection.keypoints.size()) +
                    " keypoints, expected " + std::to_string(kKeypointCount));
  if (!(detection.box.w > 0.0) || !(detection.box.h > 0.0))
    throw DataError("featurize: nonpositive box extent");
  for (int i = 0; i < kKeypointCount; ++i) {
    const Keypoint& p = detection.keypoints[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw DataError("featurize: non-finite coordinate at keypoint " + std::to_string(i));
  }

  std::span<const Keypoint> all(detection.keypoints);
  FeatureVector out{};
  for (int i = 0; i < kBodyCount; ++i) {
    const Keypoint& p = detection.keypoints[kBodyBegin + i];
    put_normalized(out, kFeatureBodyBegin + 2 * i, p.x, p.y, detection.box);
  }
  put_aggregate(out, kFeatureFaceBegin, all.subspan(kFaceBegin, kFaceCount), detection.box);
  put_aggregate(out, kFeatureLeftHandBegin, all.subspan(kLeftHandBegin, kLeftHandCount),
                detection.box);
  put_aggregate(out, kFeatureRightHandBegin, all.subspan(kRightHandBegin, kRightHandCount),
                detection.box);
  out[kFeatureAspectRatio] = detection.box.w / detection.box.h;
  return out;
}

void featurize_dataset(Dataset& dataset, bool keep_poses) {
  if (!dataset.has_poses()) throw DataError("featurize_dataset: dataset carries no raw poses");
  dataset.features.resize(dataset.meta.size());
  for (std::size_t i = 0; i < dataset.poses.size(); ++i) {
    try {
      dataset.features[i] = featurize(dataset.poses[i]);
    } catch (const DataError& e) {
      throw DataError("sample " + std::to_string(i) + " (video " + dataset.meta[i].video_id +
                      ", frame " + std::to_string(dataset.meta[i].frame_index) + "): " + e.what());
    }
  }
  if (!keep_poses) {
    dataset.poses.clear();
    dataset.poses.shrink_to_fit();
  }
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string features_to_csv(const Dataset& dataset) {
  if (!dataset.has_features()) throw DataError("features_to_csv: dataset is not featurized");
  std::string out = "video_id,subject_id,camera_id,frame_index,label";
  for (int f = 0; f < kFeatureDim; ++f) {
    char col[8];
    std::snprintf(col, sizeof(col), ",f%02d", f);
    out += col;
  }
  out += '\n';
  for (std::size_t i = 0; i < dataset.meta.size(); ++i) {
    const SampleMeta& m = dataset.meta[i];
    out += m.video_id + ',' + m.subject_id + ',' + m.camera_id + ',' +
           std::to_string(m.frame_index) + ',' + m.label;
    for (double v : dataset.features[i]) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace posebench
