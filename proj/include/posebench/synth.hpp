#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posebench/types.hpp"

namespace posebench {

// Multi-view multi-subject keypoint generator. Per class, a 3-D skeleton
// prototype (shared base pose plus a per-point class displacement of standard
// deviation class_separation); per (class, subject), an additional per-point
// offset of standard deviation subject_noise; per camera, a yaw rotation and
// orthographic projection; per frame, a 2-D random walk of step
// temporal_noise. One video per (class, subject, camera) triple.
struct SynthConfig {
  int n_classes = 12;
  int n_subjects = 20;
  int n_cameras = 4;
  int frames_per_video = 60;
  double class_separation = 0.6;
  double subject_noise = 0.6;
  double temporal_noise = 0.012;
  std::vector<double> camera_angles;  // yaw radians; empty => default_angles
  double fps = 30.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
  static std::vector<double> default_angles(int n_cameras);
};

// Deterministic: the same config yields a byte-identical dataset. Every
// generated detection satisfies the 136-keypoint layout and has positive box
// extents (tight body box with a 5% margin).
Dataset generate_dataset(const SynthConfig& config);

// Three-level hierarchy over consecutive labels: level-2 groups of
// level2_group leaves, level-1 groups of level1_group leaves.
Hierarchy make_synthetic_hierarchy(const std::vector<std::string>& labels,
                                   int level2_group = 2, int level1_group = 4);

// Writes one pose JSON file per video plus manifest.csv into dir, in exactly
// the formats the ingest module consumes.
void write_synth_files(const Dataset& dataset, const SynthConfig& config,
                       const std::string& dir);

}  // namespace posebench
