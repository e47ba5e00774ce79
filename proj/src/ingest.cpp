#include "posebench/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "posebench/errors.hpp"
#include "posebench/pose_json.hpp"

namespace posebench {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

double parse_number(const std::string& s, const std::string& context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError(context + ": '" + s + "' is not a number");
  return value;
}

}  // namespace

Manifest parse_manifest_csv(const std::string& text, const std::string& base_dir) {
  Manifest manifest;
  manifest.base_dir = base_dir;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("manifest is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string expected = "path,video_id,subject_id,camera_id,label,start_s,end_s,fps";
  if (line != expected)
    throw DataError("manifest header mismatch: expected '" + expected + "', got '" + line + "'");

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_row(line);
    const std::string where = "manifest line " + std::to_string(line_no);
    if (fields.size() != 8)
      throw DataError(where + ": expected 8 columns, got " + std::to_string(fields.size()));
    ManifestEntry e;
    e.path = fields[0];
    e.video_id = fields[1];
    e.subject_id = fields[2];
    e.camera_id = fields[3];
    e.label = fields[4];
    e.start_s = parse_number(fields[5], where + " start_s");
    e.end_s = parse_number(fields[6], where + " end_s");
    e.fps = parse_number(fields[7], where + " fps");
    if (!(e.start_s < e.end_s))
      throw DataError(where + ": start_s must be < end_s");
    if (!(e.fps > 0.0)) throw DataError(where + ": fps must be > 0");
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

Manifest load_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest '" + manifest_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest_csv(buf.str(),
                            std::filesystem::path(manifest_path).parent_path().string());
}

std::vector<std::int64_t> sample_frames(const std::vector<std::int64_t>& frame_indices,
                                        double start_s, double end_s, double fps, int max_n) {
  if (!(start_s < end_s)) throw DataError("sample_frames: start_s must be < end_s");
  if (max_n < 1) throw DataError("sample_frames: max_n must be >= 1");

  // Window endpoints map to frame indices by the same rounding rule used for
  // the frame -> time mapping (index = round(t * fps)).
  const std::int64_t first = std::llround(start_s * fps);
  const std::int64_t last = std::llround(end_s * fps);
  auto lo = std::lower_bound(frame_indices.begin(), frame_indices.end(), first);
  auto hi = std::upper_bound(frame_indices.begin(), frame_indices.end(), last);
  std::vector<std::int64_t> eligible(lo, hi);
  if (static_cast<int>(eligible.size()) <= max_n) return eligible;

  std::vector<std::int64_t> picked;
  picked.reserve(max_n);
  if (max_n == 1) {
    picked.push_back(eligible.front());
    return picked;
  }
  const double stride = static_cast<double>(eligible.size() - 1) / (max_n - 1);
  for (int j = 0; j < max_n; ++j) {
    auto pos = static_cast<std::size_t>(std::llround(j * stride));
    picked.push_back(eligible[pos]);
  }
  return picked;
}

namespace {

struct ResolvedFile {
  std::map<std::string, PoseDetection> by_frame_id;
  std::vector<std::int64_t> indices;                    // sorted
  std::map<std::int64_t, const PoseDetection*> by_index;
};

const ResolvedFile& load_pose_file(const std::string& path, const std::string& base_dir,
                                   std::map<std::string, ResolvedFile>& cache,
                                   std::vector<std::string>* warnings) {
  auto it = cache.find(path);
  if (it != cache.end()) return it->second;

  std::filesystem::path full(path);
  if (full.is_relative() && !base_dir.empty()) full = std::filesystem::path(base_dir) / full;
  std::ifstream in(full, std::ios::binary);
  if (!in) throw DataError("cannot open pose file '" + full.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();

  ResolvedFile file;
  PoseParseResult parsed;
  try {
    parsed = parse_pose_json(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()) + " (in '" + full.string() + "')");
  }
  if (warnings)
    for (auto& w : parsed.warnings) warnings->push_back(path + ": " + w);

  file.by_frame_id = resolve_detections(parsed.detections);
  for (const auto& [frame_id, det] : file.by_frame_id) {
    std::int64_t index = parse_frame_index(frame_id);
    auto [pos, inserted] = file.by_index.emplace(index, &det);
    if (!inserted)
      throw DataError("pose file '" + full.string() + "': frame ids '" + pos->second->frame_id +
                      "' and '" + frame_id + "' map to the same frame index " +
                      std::to_string(index));
    file.indices.push_back(index);
  }
  std::sort(file.indices.begin(), file.indices.end());
  return cache.emplace(path, std::move(file)).first->second;
}

}  // namespace

Dataset assemble_dataset(const Manifest& manifest, const IngestOptions& options,
                         std::vector<std::string>* warnings) {
  Dataset dataset;
  std::map<std::string, ResolvedFile> file_cache;
  std::map<std::string, std::pair<std::string, std::string>> video_identity;
  std::set<std::pair<std::string, std::int64_t>> seen_frames;

  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  auto emit = [&](const PoseDetection& det, const ManifestEntry& entry, std::int64_t index,
                  const std::string& label) {
    if (!seen_frames.emplace(entry.video_id, index).second)
      throw DataError("video '" + entry.video_id + "' frame " + std::to_string(index) +
                      " sampled by more than one manifest entry");
    dataset.poses.push_back(det);
    dataset.meta.push_back(
        SampleMeta{entry.video_id, entry.subject_id, entry.camera_id, index, label});
  };

  for (const auto& entry : manifest.entries) {
    auto it = video_identity.find(entry.video_id);
    if (it == video_identity.end()) {
      video_identity.emplace(entry.video_id, std::make_pair(entry.subject_id, entry.camera_id));
    } else if (it->second != std::make_pair(entry.subject_id, entry.camera_id)) {
      throw DataError("video '" + entry.video_id +
                      "' mapped to conflicting subject/camera pairs in the manifest");
    }

    const double start = entry.start_s + options.still_buffer_s;
    const double end = entry.end_s - options.still_buffer_s;
    if (!(start < end)) {
      warn("skipping '" + entry.video_id + "' (" + entry.label +
           "): window degenerate after applying buffer");
      continue;
    }
    const ResolvedFile& file =
        load_pose_file(entry.path, manifest.base_dir, file_cache, warnings);
    auto picked =
        sample_frames(file.indices, start, end, entry.fps, options.max_frames_per_segment);
    if (picked.empty()) {
      warn("skipping '" + entry.video_id + "' (" + entry.label +
           "): no detections inside the buffered window");
      continue;
    }
    for (std::int64_t index : picked) emit(*file.by_index.at(index), entry, index, entry.label);
  }

  if (options.include_still) {
    // One still block per video, ending before the earliest segment starts.
    std::map<std::string, const ManifestEntry*> earliest;
    std::vector<std::string> video_order;
    for (const auto& entry : manifest.entries) {
      auto [it, inserted] = earliest.try_emplace(entry.video_id, &entry);
      if (inserted)
        video_order.push_back(entry.video_id);
      else if (entry.start_s < it->second->start_s)
        it->second = &entry;
    }
    for (const auto& video_id : video_order) {
      const ManifestEntry& entry = *earliest.at(video_id);
      const double still_end = entry.start_s - options.still_buffer_s;
      if (!(still_end > 0.0)) continue;
      const ResolvedFile& file =
          load_pose_file(entry.path, manifest.base_dir, file_cache, warnings);
      auto picked =
          sample_frames(file.indices, 0.0, still_end, entry.fps, options.max_frames_per_segment);
      for (std::int64_t index : picked)
        emit(*file.by_index.at(index), entry, index, kStillLabel);
    }
  }

  std::set<std::string> distinct;
  for (const auto& m : dataset.meta) distinct.insert(m.label);
  dataset.labels.assign(distinct.begin(), distinct.end());
  dataset.validate();
  return dataset;
}

}  // namespace posebench
