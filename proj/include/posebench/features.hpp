#pragma once

#include <span>
#include <string>
#include <vector>

#include "posebench/types.hpp"

namespace posebench {

inline constexpr int kAggregateTopK = 10;

// The min(k, n) keypoints with highest confidence; ties favor the lower
// original index. Output preserves original index order.
std::vector<Keypoint> top_k_by_confidence(std::span<const Keypoint> keypoints, int k);

// Componentwise mean/min/max over the top-k-confidence subset (pixel space).
AggregatePoints aggregate_keypoint_set(std::span<const Keypoint> keypoints,
                                       int k = kAggregateTopK);

// Affine map into box coordinates: ((x-box.x)/w, (y-box.y)/h). Values outside
// [0,1] are legitimate (keypoints can fall outside an imperfect box) and are
// not clamped.
std::pair<double, double> normalize_to_bbox(double x, double y, const BoundingBox& box);

// The 71-dimension feature vector; layout documented on FeatureVector.
// Aggregates are computed in pixel space then normalized (equivalent to the
// reverse order for mean/min/max under a positive-extent box).
// Throws DataError on a non-finite keypoint coordinate, naming its index.
FeatureVector featurize(const PoseDetection& detection);

// Fills dataset.features from dataset.poses; poses are dropped afterwards
// unless keep_poses. Throws DataError identifying the offending sample.
void featurize_dataset(Dataset& dataset, bool keep_poses = false);

// CSV export: metadata columns then f00..f70. Row order follows the dataset.
std::string features_to_csv(const Dataset& dataset);

}  // namespace posebench
