#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posebench/types.hpp"

namespace posebench {

// Reads the UTF-8 CSV manifest with header
// path,video_id,subject_id,camera_id,label,start_s,end_s,fps.
// Relative pose-JSON paths resolve against the manifest's directory.
Manifest load_manifest(const std::string& manifest_path);
Manifest parse_manifest_csv(const std::string& text, const std::string& base_dir = "");

// Uniform frame sampling over a time window. `frame_indices` are the sorted
// indices with detections available; a frame qualifies when its index lies in
// [round(start_s*fps), round(end_s*fps)]. If more than max_n qualify, max_n
// are kept at near-equal spacing including the first and last qualifying
// frame. Deterministic; no qualifying frames yields an empty sequence.
std::vector<std::int64_t> sample_frames(const std::vector<std::int64_t>& frame_indices,
                                        double start_s, double end_s, double fps, int max_n);

struct IngestOptions {
  double still_buffer_s = 1.0;
  int max_frames_per_segment = 200;
  bool include_still = false;  // emit pre-asana frames as the "still" class
};

// Parses every pose file referenced by the manifest, keeps the best detection
// per frame, samples the asana window [start+buffer, end-buffer] (and, when
// asked, a per-video still window [0, first_start-buffer]) and assembles the
// labeled dataset. Non-fatal oddities (degenerate windows, frames without
// detections) are reported through `warnings`.
Dataset assemble_dataset(const Manifest& manifest, const IngestOptions& options,
                         std::vector<std::string>* warnings = nullptr);

}  // namespace posebench
