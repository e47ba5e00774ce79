#include "posebench/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "posebench/dataset_io.hpp"
#include "posebench/errors.hpp"
#include "posebench/pose_json.hpp"
#include "posebench/rng.hpp"

namespace posebench {

namespace {

constexpr std::uint64_t kBaseStream = 0x53594e42;
constexpr std::uint64_t kClassStream = 0x53594e43;
constexpr std::uint64_t kSubjectStream = 0x53594e53;
constexpr std::uint64_t kVideoStream = 0x53594e56;

// Default camera yaw spread: cameras 60 degrees apart, so adjacent views
// transfer partially while distant ones differ sharply.
constexpr double kDefaultYawStep = 60.0 * 3.14159265358979323846 / 180.0;

// Unit-space coordinates map to a pixel-like range for the emitted JSON.
constexpr double kPixelScale = 160.0;
constexpr double kPixelOffset = 480.0;

using Point3 = std::array<double, 3>;

std::string format_id(const char* prefix, int width, int value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, value);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_classes < 1) throw ConfigError("synth: n_classes must be >= 1");
  if (n_subjects < 1) throw ConfigError("synth: n_subjects must be >= 1");
  if (n_cameras < 1) throw ConfigError("synth: n_cameras must be >= 1");
  if (frames_per_video < 1) throw ConfigError("synth: frames_per_video must be >= 1");
  if (class_separation < 0 || subject_noise < 0 || temporal_noise < 0)
    throw ConfigError("synth: noise parameters must be >= 0");
  if (!camera_angles.empty() &&
      camera_angles.size() != static_cast<std::size_t>(n_cameras))
    throw ConfigError("synth: camera_angles length must equal n_cameras");
  if (!(fps > 0)) throw ConfigError("synth: fps must be > 0");
}

std::vector<double> SynthConfig::default_angles(int n_cameras) {
  std::vector<double> angles(n_cameras);
  for (int i = 0; i < n_cameras; ++i) angles[i] = i * kDefaultYawStep;
  return angles;
}

Dataset generate_dataset(const SynthConfig& config) {
  config.validate();
  const std::vector<double> angles =
      config.camera_angles.empty() ? SynthConfig::default_angles(config.n_cameras)
                                   : config.camera_angles;

  // Shared base skeleton: body spread wide, face and hands clustered.
  std::vector<Point3> base(kKeypointCount);
  {
    Rng rng = Rng::derive(config.seed, {kBaseStream});
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_double(); };
    for (int k = 0; k < kBodyCount; ++k)
      base[k] = {uniform(-1, 1), uniform(-1, 1), uniform(-0.3, 0.3)};
    for (int k = kFaceBegin; k < kFaceBegin + kFaceCount; ++k)
      base[k] = {uniform(-0.15, 0.15), 0.8 + uniform(-0.15, 0.15), uniform(-0.15, 0.15)};
    for (int k = kLeftHandBegin; k < kLeftHandBegin + kLeftHandCount; ++k)
      base[k] = {-0.7 + uniform(-0.1, 0.1), 0.1 + uniform(-0.1, 0.1), uniform(-0.1, 0.1)};
    for (int k = kRightHandBegin; k < kRightHandBegin + kRightHandCount; ++k)
      base[k] = {0.7 + uniform(-0.1, 0.1), 0.1 + uniform(-0.1, 0.1), uniform(-0.1, 0.1)};
  }

  const int class_width = config.n_classes > 100 ? 3 : 2;
  Dataset dataset;
  for (int c = 0; c < config.n_classes; ++c)
    dataset.labels.push_back(format_id("class_", class_width, c));

  std::vector<Point3> prototype(kKeypointCount), posed(kKeypointCount);
  std::vector<std::array<double, 2>> projected(kKeypointCount), walk(kKeypointCount);
  std::vector<double> confidences(kKeypointCount);

  for (int c = 0; c < config.n_classes; ++c) {
    // Class identity lives in the horizontal plane (x, z), which camera yaw
    // mixes; the vertical axis stays class-neutral so that held-out-camera
    // folds cannot shortcut through rotation-invariant coordinates.
    Rng class_rng = Rng::derive(config.seed, {kClassStream, static_cast<std::uint64_t>(c)});
    for (int k = 0; k < kKeypointCount; ++k) {
      prototype[k][0] = base[k][0] + config.class_separation * class_rng.normal();
      prototype[k][1] = base[k][1];
      prototype[k][2] = base[k][2] + config.class_separation * class_rng.normal();
    }

    for (int s = 0; s < config.n_subjects; ++s) {
      Rng subject_rng = Rng::derive(config.seed, {kSubjectStream, static_cast<std::uint64_t>(c),
                                                  static_cast<std::uint64_t>(s)});
      for (int k = 0; k < kKeypointCount; ++k)
        for (int a = 0; a < 3; ++a)
          posed[k][a] = prototype[k][a] + config.subject_noise * subject_rng.normal();

      for (int cam = 0; cam < config.n_cameras; ++cam) {
        const double cos_yaw = std::cos(angles[cam]);
        const double sin_yaw = std::sin(angles[cam]);
        for (int k = 0; k < kKeypointCount; ++k) {
          projected[k] = {posed[k][0] * cos_yaw + posed[k][2] * sin_yaw, posed[k][1]};
          walk[k] = {0.0, 0.0};
        }

        Rng video_rng = Rng::derive(config.seed, {kVideoStream, static_cast<std::uint64_t>(c),
                                                  static_cast<std::uint64_t>(s),
                                                  static_cast<std::uint64_t>(cam)});
        for (int k = 0; k < kKeypointCount; ++k)
          confidences[k] = video_rng.next_double_open_closed();
        const double video_score = video_rng.next_double_open_closed();

        const std::string video_id = dataset.labels[c] + "_" + format_id("s", 3, s) + "_" +
                                     format_id("cam", 2, cam);
        for (int frame = 0; frame < config.frames_per_video; ++frame) {
          if (frame > 0 && config.temporal_noise > 0) {
            for (int k = 0; k < kKeypointCount; ++k) {
              walk[k][0] += config.temporal_noise * video_rng.normal();
              walk[k][1] += config.temporal_noise * video_rng.normal();
            }
          }
          PoseDetection det;
          det.frame_id = format_id("", 6, frame);
          det.score = video_score;
          det.keypoints.resize(kKeypointCount);
          for (int k = 0; k < kKeypointCount; ++k) {
            det.keypoints[k].x = kPixelOffset + kPixelScale * (projected[k][0] + walk[k][0]);
            det.keypoints[k].y = kPixelOffset + kPixelScale * (projected[k][1] + walk[k][1]);
            det.keypoints[k].confidence = confidences[k];
          }
          double min_x = det.keypoints[0].x, max_x = min_x;
          double min_y = det.keypoints[0].y, max_y = min_y;
          for (int k = 1; k < kBodyCount; ++k) {
            min_x = std::min(min_x, det.keypoints[k].x);
            max_x = std::max(max_x, det.keypoints[k].x);
            min_y = std::min(min_y, det.keypoints[k].y);
            max_y = std::max(max_y, det.keypoints[k].y);
          }
          const double margin_x = 0.05 * std::max(max_x - min_x, 1.0);
          const double margin_y = 0.05 * std::max(max_y - min_y, 1.0);
          det.box = {min_x - margin_x, min_y - margin_y, (max_x - min_x) + 2 * margin_x,
                     (max_y - min_y) + 2 * margin_y};

          dataset.poses.push_back(std::move(det));
          dataset.meta.push_back(SampleMeta{video_id, format_id("s", 3, s),
                                            format_id("cam", 2, cam), frame,
                                            dataset.labels[c]});
        }
      }
    }
  }
  dataset.validate();
  return dataset;
}

Hierarchy make_synthetic_hierarchy(const std::vector<std::string>& labels, int level2_group,
                                   int level1_group) {
  if (level2_group < 1 || level1_group < 1)
    throw ConfigError("hierarchy group sizes must be >= 1");
  // Group sizes must nest, otherwise a level-2 group would straddle two
  // level-1 parents.
  if (level1_group % level2_group != 0)
    throw ConfigError("level1_group must be a multiple of level2_group");
  Hierarchy h;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    h.up[labels[i]] = {format_id("group_", 2, static_cast<int>(i) / level2_group),
                       format_id("super_", 2, static_cast<int>(i) / level1_group)};
  }
  return h;
}

void write_synth_files(const Dataset& dataset, const SynthConfig& config,
                       const std::string& dir) {
  if (!dataset.has_poses()) throw DataError("write_synth_files: dataset carries no raw poses");
  std::filesystem::create_directories(dir);

  std::string manifest = "path,video_id,subject_id,camera_id,label,start_s,end_s,fps\n";
  char window[64];
  std::snprintf(window, sizeof(window), "0,%.6f,%.6f",
                static_cast<double>(config.frames_per_video) / config.fps, config.fps);

  std::size_t begin = 0;
  while (begin < dataset.size()) {
    std::size_t end = begin;
    while (end < dataset.size() && dataset.meta[end].video_id == dataset.meta[begin].video_id)
      ++end;
    const SampleMeta& m = dataset.meta[begin];
    std::vector<PoseDetection> video(dataset.poses.begin() + begin,
                                     dataset.poses.begin() + end);
    const std::string file_name = m.video_id + ".json";
    write_file((std::filesystem::path(dir) / file_name).string(),
               pose_detections_to_json(video));
    manifest += file_name + "," + m.video_id + "," + m.subject_id + "," + m.camera_id + "," +
                m.label + "," + window + "\n";
    begin = end;
  }
  write_file((std::filesystem::path(dir) / "manifest.csv").string(), manifest);
}

}  // namespace posebench
