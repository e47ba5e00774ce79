#include "posebench/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "posebench/errors.hpp"

namespace posebench {

using nlohmann::json;

namespace {

json pose_to_json(const PoseDetection& det) {
  json kp = json::array();
  for (const auto& p : det.keypoints) {
    kp.push_back(p.x);
    kp.push_back(p.y);
    kp.push_back(p.confidence);
  }
  return json{{"image_id", det.frame_id},
              {"keypoints", std::move(kp)},
              {"box", json::array({det.box.x, det.box.y, det.box.w, det.box.h})},
              {"score", det.score}};
}

PoseDetection pose_from_json(const json& obj) {
  PoseDetection det;
  det.frame_id = obj.at("image_id").get<std::string>();
  det.score = obj.at("score").get<double>();
  const json& box = obj.at("box");
  det.box = {box.at(0).get<double>(), box.at(1).get<double>(), box.at(2).get<double>(),
             box.at(3).get<double>()};
  const json& kp = obj.at("keypoints");
  if (kp.size() != static_cast<std::size_t>(3 * kKeypointCount))
    throw DataError("dataset pose entry has wrong keypoint array length");
  det.keypoints.resize(kKeypointCount);
  for (int k = 0; k < kKeypointCount; ++k) {
    det.keypoints[k] = {kp.at(3 * k).get<double>(), kp.at(3 * k + 1).get<double>(),
                        kp.at(3 * k + 2).get<double>()};
  }
  return det;
}

}  // namespace

std::string dataset_to_json(const Dataset& dataset) {
  json doc;
  doc["format_version"] = 1;
  doc["labels"] = dataset.labels;
  if (dataset.hierarchy) {
    json h = json::object();
    for (const auto& [leaf, up] : dataset.hierarchy->up)
      h[leaf] = json::array({up[0], up[1]});
    doc["hierarchy"] = std::move(h);
  }
  json samples = json::array();
  for (std::size_t i = 0; i < dataset.meta.size(); ++i) {
    const SampleMeta& m = dataset.meta[i];
    json s{{"video_id", m.video_id},
           {"subject_id", m.subject_id},
           {"camera_id", m.camera_id},
           {"frame_index", m.frame_index},
           {"label", m.label}};
    if (dataset.has_features()) s["features"] = dataset.features[i];
    if (dataset.has_poses()) s["pose"] = pose_to_json(dataset.poses[i]);
    samples.push_back(std::move(s));
  }
  doc["samples"] = std::move(samples);
  return doc.dump();
}

Dataset dataset_from_json(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError("dataset JSON parse error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object() || !doc.contains("samples") || !doc.contains("labels"))
    throw DataError("dataset JSON must carry 'samples' and 'labels'");
  if (doc.value("format_version", 0) != 1)
    throw DataError("unsupported dataset format_version");

  Dataset ds;
  bool any_features = false, any_poses = false;
  try {
    ds.labels = doc["labels"].get<std::vector<std::string>>();
    if (doc.contains("hierarchy")) {
      Hierarchy h;
      for (const auto& [leaf, up] : doc["hierarchy"].items())
        h.up[leaf] = {up.at(0).get<std::string>(), up.at(1).get<std::string>()};
      ds.hierarchy = std::move(h);
    }
    const json& samples = doc["samples"];
    for (const auto& s : samples) {
      SampleMeta m;
      m.video_id = s.at("video_id").get<std::string>();
      m.subject_id = s.at("subject_id").get<std::string>();
      m.camera_id = s.at("camera_id").get<std::string>();
      m.frame_index = s.at("frame_index").get<std::int64_t>();
      m.label = s.at("label").get<std::string>();
      ds.meta.push_back(std::move(m));
      if (s.contains("features")) {
        const json& f = s["features"];
        if (f.size() != kFeatureDim)
          throw DataError("dataset sample carries " + std::to_string(f.size()) +
                          " features, expected " + std::to_string(kFeatureDim));
        FeatureVector fv;
        for (int i = 0; i < kFeatureDim; ++i) fv[i] = f.at(i).get<double>();
        ds.features.push_back(fv);
        any_features = true;
      }
      if (s.contains("pose")) {
        ds.poses.push_back(pose_from_json(s["pose"]));
        any_poses = true;
      }
    }
  } catch (const json::exception& e) {
    throw DataError("malformed dataset JSON: " + std::string(e.what()));
  }
  if (any_features && ds.features.size() != ds.meta.size())
    throw DataError("dataset mixes samples with and without features");
  if (any_poses && ds.poses.size() != ds.meta.size())
    throw DataError("dataset mixes samples with and without poses");
  ds.validate();
  return ds;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  write_file(path, dataset_to_json(dataset));
}

Dataset load_dataset(const std::string& path) { return dataset_from_json(read_file(path)); }

Hierarchy hierarchy_from_json(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError("hierarchy JSON parse error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw DataError("hierarchy JSON must be an object");
  Hierarchy h;
  for (const auto& [leaf, up] : doc.items()) {
    if (!up.is_array() || up.size() != 2 || !up.at(0).is_string() || !up.at(1).is_string())
      throw DataError("hierarchy entry for '" + leaf + "' must be [level2, level1]");
    h.up[leaf] = {up.at(0).get<std::string>(), up.at(1).get<std::string>()};
  }
  return h;
}

std::string hierarchy_to_json(const Hierarchy& hierarchy) {
  json doc = json::object();
  for (const auto& [leaf, up] : hierarchy.up) doc[leaf] = json::array({up[0], up[1]});
  return doc.dump();
}

Hierarchy load_hierarchy(const std::string& path) {
  return hierarchy_from_json(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace posebench
