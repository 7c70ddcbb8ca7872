#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "vwords/apps/apps.hpp"
#include "vwords/features/features.hpp"
#include "vwords/io/netpbm.hpp"
#include "vwords/io/records.hpp"

namespace vwords {

enum class LipMethod { nearest_colour, layer_fusion };

/// Every tunable of the system, with its default.
struct Config {
  bool deinterlace = false;
  FaceConfig face;
  int track_margin = 16;  // px around the previous face box; < 0 disables tracking
  LipMethod lips = LipMethod::nearest_colour;
  NearestColourConfig nearest;
  LayerFusionConfig fusion;
  double motion_threshold = 5.0;
  int lead = 3;  // frames added before each annotated word
  std::size_t k = 1;
  Decision decision = Decision::wknn;
  std::string weights = "sd";  // sd | si | uniform | path to a weights file
  DistanceMode mode = DistanceMode::dtw;
  double verify_threshold = 2.7;
  int max_tries = 3;
  double spot_threshold = 2.4;
};

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error("config: " + key + ": expected a boolean, got '" + v + "'");
}

inline Config parse_config(const std::map<std::string, std::string>& kv) {
  Config c;
  for (const auto& [key, v] : kv) {
    const std::string at = "config: " + key + ": ";
    if (key == "deinterlace") c.deinterlace = parse_bool(v, key);
    else if (key == "face.weighted") c.face.weighted = parse_bool(v, key);
    else if (key == "face.top_n") c.face.top_n = text::parse_number<std::size_t>(v, at);
    else if (key == "face.template") c.face.face_template = read_template(v);
    else if (key == "face.entropy_theta") c.face.entropy_theta = text::parse_number<double>(v, at);
    else if (key == "face.track_margin") c.track_margin = text::parse_number<int>(v, at);
    else if (key == "lips.method") {
      if (v == "nearest_colour") c.lips = LipMethod::nearest_colour;
      else if (v == "layer_fusion") c.lips = LipMethod::layer_fusion;
      else throw Error(at + "expected nearest_colour or layer_fusion");
    } else if (key == "lips.vote_threshold") c.fusion.vote_threshold = text::parse_number<int>(v, at);
    else if (key == "lips.motion_threshold") c.motion_threshold = text::parse_number<double>(v, at);
    else if (key == "lips.max_iters") c.nearest.max_iters = c.fusion.max_iters = text::parse_number<int>(v, at);
    else if (key == "segment.lead") c.lead = text::parse_number<int>(v, at);
    else if (key == "classify.k") c.k = text::parse_number<std::size_t>(v, at);
    else if (key == "classify.decision") {
      if (v == "wknn") c.decision = Decision::wknn;
      else if (v == "knn") c.decision = Decision::knn;
      else throw Error(at + "expected knn or wknn");
    } else if (key == "classify.weights") c.weights = v;
    else if (key == "classify.mode") c.mode = parse_mode(v);
    else if (key == "verify.threshold") c.verify_threshold = text::parse_number<double>(v, at);
    else if (key == "verify.max_tries") c.max_tries = text::parse_number<int>(v, at);
    else if (key == "spot.threshold") c.spot_threshold = text::parse_number<double>(v, at);
    else throw Error("config: unknown key '" + key + "'");
  }
  if (c.lead < 0) throw Error("config: segment.lead must be >= 0");
  if (c.k < 1) throw Error("config: classify.k must be >= 1");
  if (c.face.top_n < 1) throw Error("config: face.top_n must be >= 1");
  return c;
}

inline Config read_config(const std::string& path) {
  return parse_config(text::parse_key_values(text::read_file(path), path));
}

using FrameSequence = std::vector<RgbImage>;

/// Numbered PPM frames of a directory, in numeric order. Numbers must be
/// contiguous and all frames the same size.
inline FrameSequence load_clip(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("clip directory not found: " + dir);
  static const std::regex numbered(R"(.*?(\d+)\.ppm)");
  std::vector<std::pair<long, fs::path>> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && std::regex_match(name, m, numbered)) files.emplace_back(std::stol(m[1]), e.path());
  }
  if (files.empty()) throw Error("no numbered .ppm frames in " + dir);
  std::sort(files.begin(), files.end());
  FrameSequence frames;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (files[i].first != files.front().first + static_cast<long>(i))
      throw Error("missing frame " + std::to_string(files.front().first + static_cast<long>(i)) + " in " + dir);
    frames.push_back(read_ppm(files[i].second.string()));
    if (frames.back().width() != frames.front().width() || frames.back().height() != frames.front().height())
      throw Error(files[i].second.string() + ": frame size differs from the first frame");
  }
  return frames;
}

inline void save_clip(const std::string& dir, const FrameSequence& frames) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%05zu.ppm", i);
    write_ppm((std::filesystem::path(dir) / name).string(), frames[i]);
  }
}

struct WordSegment {
  Annotation word;
  int first = 0;  // after the lead
  int last = 0;
};

inline std::vector<WordSegment> segment(std::size_t n_frames, const std::vector<Annotation>& annotations,
                                        int lead = 3) {
  std::vector<WordSegment> out;
  for (const Annotation& a : annotations) {
    if (a.end >= static_cast<int>(n_frames))
      throw Error("word '" + a.label + "' ends at frame " + std::to_string(a.end) + " but the clip has " +
                  std::to_string(n_frames) + " frames");
    out.push_back({a, std::max(0, a.start - lead), a.end});
  }
  return out;
}

/// Face, region and mouth of one frame; `mouth` is empty when no lips were found.
struct FrameResult {
  FaceBox face;
  Roi roi;
  LipMask mask;
  std::optional<MouthRoi> mouth;
};

/// Runs the per-frame front end over the listed frames, in order, tracking the
/// face and (for layer fusion) gating on motion between consecutive frames.
inline std::map<int, FrameResult> process_frames(const FrameSequence& frames, const std::vector<int>& wanted,
                                                 const Config& cfg) {
  std::map<int, FrameResult> out;
  std::optional<FaceBox> prev_face;
  const FrameResult* prev = nullptr;
  int prev_index = -2;
  for (int i : wanted) {
    const RgbImage frame = cfg.deinterlace ? deinterlace_blend(frames.at(static_cast<std::size_t>(i)))
                                           : frames.at(static_cast<std::size_t>(i));
    FrameResult r;
    r.face = prev_face && cfg.track_margin >= 0 ? track_face(*prev_face, frame, cfg.track_margin, cfg.face)
                                                : localize_face(frame, cfg.face);
    r.roi = roi_from_face(r.face, frame);
    if (cfg.lips == LipMethod::nearest_colour) {
      r.mask = nearest_colour(r.roi, cfg.nearest);
    } else {
      MotionGate gate;
      gate.threshold = cfg.motion_threshold;
      if (prev && prev_index == i - 1) {
        gate.prev_roi = &prev->roi.image;
        gate.prev_mask = &prev->mask;
      }
      r.mask = layer_fusion(r.roi, cfg.fusion, gate);
    }
    try {
      r.mouth = mouth_from_mask(r.mask, r.roi);
    } catch (const LipsNotFound&) {
    }
    prev_face = r.face;
    prev = &out.insert_or_assign(i, std::move(r)).first->second;
    prev_index = i;
  }
  return out;
}

/// Mouth sequence of every word. Frames without lips reuse the previous mouth
/// (or the next one at the start of a word).
inline std::vector<std::vector<MouthRoi>> word_mouths(const FrameSequence& frames,
                                                      const std::vector<Annotation>& annotations,
                                                      const Config& cfg) {
  const auto segments = segment(frames.size(), annotations, cfg.lead);
  std::vector<int> wanted;
  for (const WordSegment& s : segments)
    for (int f = s.first; f <= s.last; ++f) wanted.push_back(f);
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  const auto results = process_frames(frames, wanted, cfg);

  std::vector<std::vector<MouthRoi>> out;
  for (const WordSegment& s : segments) {
    std::vector<std::optional<MouthRoi>> seq;
    for (int f = s.first; f <= s.last; ++f) seq.push_back(results.at(f).mouth);
    const auto first_ok = std::find_if(seq.begin(), seq.end(), [](const auto& m) { return m.has_value(); });
    if (first_ok == seq.end())
      throw Error("word '" + s.word.label + "' (frames " + std::to_string(s.first) + "-" + std::to_string(s.last) +
                  "): lips not found in any frame");
    std::vector<MouthRoi> mouths;
    const MouthRoi* last = &**first_ok;
    for (const auto& m : seq) {
      if (m) last = &*m;
      mouths.push_back(*last);
    }
    out.push_back(std::move(mouths));
  }
  return out;
}

inline std::vector<FeatureMatrix> run_pipeline(const FrameSequence& frames, const std::vector<Annotation>& annotations,
                                               const Config& cfg) {
  const auto mouths = word_mouths(frames, annotations, cfg);
  std::vector<FeatureMatrix> out;
  for (std::size_t w = 0; w < mouths.size(); ++w) {
    const Annotation& a = annotations[w];
    FeatureMatrix m;
    try {
      m = build_signature(mouths[w]);
    } catch (const Error& e) {
      throw Error("word '" + a.label + "': " + e.what());
    }
    m.label = a.label;
    m.speaker = a.speaker;
    m.session = a.session;
    m.repetition = a.repetition;
    m.group = a.group;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace vwords
