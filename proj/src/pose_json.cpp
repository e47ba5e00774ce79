#include "posebench/pose_json.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "posebench/errors.hpp"

namespace posebench {

using nlohmann::json;

namespace {

std::string frame_name(const json& obj, std::size_t position) {
  if (obj.contains("image_id") && obj["image_id"].is_string())
    return obj["image_id"].get<std::string>();
  return "#" + std::to_string(position);
}

}  // namespace

PoseParseResult parse_pose_json(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError("pose JSON parse error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_array()) throw ParseError("pose JSON root must be an array of detections");

  PoseParseResult result;
  result.detections.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& obj = doc[i];
    const std::string name = frame_name(obj, i);
    if (!obj.is_object())
      throw ParseError("pose JSON entry " + name + " is not an object");
    if (!obj.contains("image_id") || !obj["image_id"].is_string())
      throw ParseError("pose JSON entry " + name + " lacks a string image_id");
    if (!obj.contains("keypoints") || !obj["keypoints"].is_array())
      throw ParseError("frame " + name + ": missing keypoints array");
    if (!obj.contains("box") || !obj["box"].is_array() || obj["box"].size() != 4 ||
        !obj["box"][0].is_number() || !obj["box"][1].is_number() ||
        !obj["box"][2].is_number() || !obj["box"][3].is_number())
      throw ParseError("frame " + name + ": box must be [x,y,w,h]");
    if (!obj.contains("score") || !obj["score"].is_number())
      throw ParseError("frame " + name + ": missing numeric score");

    const json& kp = obj["keypoints"];
    if (kp.size() != static_cast<std::size_t>(3 * kKeypointCount))
      throw ParseError("frame " + name + ": keypoints array length " +
                       std::to_string(kp.size()) + ", expected " +
                       std::to_string(3 * kKeypointCount));

    PoseDetection det;
    det.frame_id = obj["image_id"].get<std::string>();
    det.score = obj["score"].get<double>();
    det.box.x = obj["box"][0].get<double>();
    det.box.y = obj["box"][1].get<double>();
    det.box.w = obj["box"][2].get<double>();
    det.box.h = obj["box"][3].get<double>();
    if (!(det.box.w > 0.0) || !(det.box.h > 0.0))
      throw ParseError("frame " + name + ": nonpositive box extent (w=" +
                       std::to_string(det.box.w) + ", h=" + std::to_string(det.box.h) + ")");

    det.keypoints.resize(kKeypointCount);
    for (int k = 0; k < kKeypointCount; ++k) {
      if (!kp[3 * k].is_number() || !kp[3 * k + 1].is_number() || !kp[3 * k + 2].is_number())
        throw ParseError("frame " + name + ": non-numeric keypoint entry at index " +
                         std::to_string(k));
      Keypoint& p = det.keypoints[k];
      p.x = kp[3 * k].get<double>();
      p.y = kp[3 * k + 1].get<double>();
      p.confidence = kp[3 * k + 2].get<double>();
      if (p.confidence < 0.0 || p.confidence > 1.0) {
        std::ostringstream msg;
        msg << "frame " << name << ": keypoint " << k << " confidence " << p.confidence
            << " outside [0,1]";
        result.warnings.push_back(msg.str());
      }
    }
    result.detections.push_back(std::move(det));
  }
  return result;
}

std::string pose_detections_to_json(const std::vector<PoseDetection>& detections) {
  json arr = json::array();
  for (const auto& det : detections) {
    json kp = json::array();
    for (const auto& p : det.keypoints) {
      kp.push_back(p.x);
      kp.push_back(p.y);
      kp.push_back(p.confidence);
    }
    arr.push_back(json{{"image_id", det.frame_id},
                       {"keypoints", std::move(kp)},
                       {"box", json::array({det.box.x, det.box.y, det.box.w, det.box.h})},
                       {"score", det.score}});
  }
  return arr.dump();
}

std::map<std::string, PoseDetection> resolve_detections(
    const std::vector<PoseDetection>& detections) {
  std::map<std::string, PoseDetection> best;
  for (const auto& det : detections) {
    auto [it, inserted] = best.try_emplace(det.frame_id, det);
    if (!inserted && det.score > it->second.score) it->second = det;
  }
  return best;
}

std::int64_t parse_frame_index(const std::string& frame_id) {
  std::size_t begin = frame_id.find_first_of("0123456789");
  if (begin == std::string::npos)
    throw DataError("frame id '" + frame_id + "' carries no frame index digits");
  std::size_t end = begin;
  while (end < frame_id.size() && std::isdigit(static_cast<unsigned char>(frame_id[end])))
    ++end;
  return std::stoll(frame_id.substr(begin, end - begin));
}

}  // namespace posebench
