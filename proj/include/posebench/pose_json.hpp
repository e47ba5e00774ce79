#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "posebench/types.hpp"

namespace posebench {

struct PoseParseResult {
  std::vector<PoseDetection> detections;
  std::vector<std::string> warnings;  // e.g. confidences outside [0, 1]
};

// Parses the estimator's native output: a JSON array of objects with
// `image_id` (string), `keypoints` (flat [x,y,c] triples, length 408),
// `box` ([x,y,w,h]) and `score`. Throws ParseError with the byte offset on
// malformed JSON and on structural violations (bad keypoint count,
// nonpositive box extents), naming the offending frame.
PoseParseResult parse_pose_json(std::string_view bytes);

// Inverse of parse_pose_json; round-trips exactly.
std::string pose_detections_to_json(const std::vector<PoseDetection>& detections);

// Keeps the highest-score detection per frame_id; ties go to the earliest
// detection in input order.
std::map<std::string, PoseDetection> resolve_detections(
    const std::vector<PoseDetection>& detections);

// Frame index encoded in a frame id ("000042" or "42.jpg" -> 42).
// Throws DataError when the id carries no digits.
std::int64_t parse_frame_index(const std::string& frame_id);

}  // namespace posebench
