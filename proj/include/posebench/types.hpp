#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace posebench {

// Keypoint layout of the 136-point full-body skeleton consumed from the
// upstream pose estimator: 26 body, 68 face, 21 left hand, 21 right hand.
inline constexpr int kKeypointCount = 136;
inline constexpr int kBodyBegin = 0;
inline constexpr int kBodyCount = 26;
inline constexpr int kFaceBegin = 26;
inline constexpr int kFaceCount = 68;
inline constexpr int kLeftHandBegin = 94;
inline constexpr int kLeftHandCount = 21;
inline constexpr int kRightHandBegin = 115;
inline constexpr int kRightHandCount = 21;

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  bool operator==(const Keypoint&) const = default;
};

struct BoundingBox {
  double x = 0.0;  // left edge, pixels
  double y = 0.0;  // top edge, pixels
  double w = 0.0;
  double h = 0.0;

  bool operator==(const BoundingBox&) const = default;
};

// One person in one frame as reported by the pose estimator.
struct PoseDetection {
  std::string frame_id;
  std::vector<Keypoint> keypoints;  // exactly kKeypointCount, layout above
  BoundingBox box;
  double score = 0.0;

  bool operator==(const PoseDetection&) const = default;
};

// The fixed 71-dimension classifier input.
//   [0, 52)   body keypoints 0..25 as (x, y) pairs, box-normalized
//   [52, 58)  face (mean, min, max) points as (x, y) pairs
//   [58, 64)  left hand likewise
//   [64, 70)  right hand likewise
//   [70]      box aspect ratio w / h
inline constexpr int kFeatureDim = 71;
inline constexpr int kFeatureBodyBegin = 0;
inline constexpr int kFeatureFaceBegin = 52;
inline constexpr int kFeatureLeftHandBegin = 58;
inline constexpr int kFeatureRightHandBegin = 64;
inline constexpr int kFeatureAspectRatio = 70;

using FeatureVector = std::array<double, kFeatureDim>;

// Componentwise mean/min/max over a keypoint subset.
struct AggregatePoints {
  double mean_x = 0, mean_y = 0;
  double min_x = 0, min_y = 0;
  double max_x = 0, max_y = 0;
};

struct SampleMeta {
  std::string video_id;
  std::string subject_id;
  std::string camera_id;
  std::int64_t frame_index = 0;
  std::string label;

  bool operator==(const SampleMeta&) const = default;
};

struct ManifestEntry {
  std::string path;  // pose JSON, relative paths resolved against the manifest
  std::string video_id;
  std::string subject_id;
  std::string camera_id;
  std::string label;
  double start_s = 0.0;
  double end_s = 0.0;
  double fps = 0.0;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::string base_dir;  // directory of the manifest file, "" for in-memory
};

// Maps each leaf label to its (level-2, level-1) superclasses.
struct Hierarchy {
  std::map<std::string, std::array<std::string, 2>> up;

  bool operator==(const Hierarchy&) const = default;
};

// Labeled samples plus grouping metadata. `poses` and `features` are
// parallel to `meta`; either may be empty depending on pipeline stage.
struct Dataset {
  std::vector<SampleMeta> meta;
  std::vector<PoseDetection> poses;      // raw stage (may be empty)
  std::vector<FeatureVector> features;   // featurized stage (may be empty)
  std::vector<std::string> labels;       // sorted distinct vocabulary
  std::optional<Hierarchy> hierarchy;

  std::size_t size() const { return meta.size(); }
  bool has_poses() const { return poses.size() == meta.size() && !meta.empty(); }
  bool has_features() const { return features.size() == meta.size() && !meta.empty(); }
  int label_index(const std::string& label) const;
  // Throws DataError if a sample label is missing from the vocabulary or a
  // present hierarchy does not cover the vocabulary.
  void validate() const;
};

inline constexpr const char* kStillLabel = "still";

}  // namespace posebench
