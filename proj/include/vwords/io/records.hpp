#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "vwords/apps/apps.hpp"
#include "vwords/eval/eval.hpp"
#include "vwords/face/face_loc.hpp"
#include "vwords/io/text.hpp"

namespace vwords {

namespace fs = std::filesystem;

// ---- feature matrix files -------------------------------------------------

inline constexpr std::string_view kFeatureHeader = "frame,H,W,M,Q,R,ER,RC,T";

inline std::string encode_features(const FeatureMatrix& m) {
  std::string out;
  if (!m.label.empty()) out += "# label=" + m.label + "\n";
  if (!m.speaker.empty()) out += "# speaker=" + m.speaker + "\n";
  out += "# session=" + std::to_string(m.session) + "\n";
  out += "# repetition=" + std::to_string(m.repetition) + "\n";
  if (!m.group.empty()) out += "# group=" + m.group + "\n";
  out += kFeatureHeader;
  out += '\n';
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    out += std::to_string(i + 1);
    for (double v : m.rows[i]) out += "," + text::fixed6(v);
    out += '\n';
  }
  return out;
}

inline FeatureMatrix decode_features(const std::string& content, const std::string& source = "features") {
  FeatureMatrix m;
  bool header = false;
  const auto ls = text::lines(content);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string at = text::where(source, i + 1);
    const std::string_view l = text::trim(ls[i]);
    if (l.empty()) continue;
    if (l.front() == '#') {
      const auto eq = l.find('=');
      if (eq == std::string_view::npos) continue;  // free comment
      const std::string key(text::trim(l.substr(1, eq - 1)));
      const std::string value(text::trim(l.substr(eq + 1)));
      if (key == "label") m.label = value;
      else if (key == "speaker") m.speaker = value;
      else if (key == "session") m.session = text::parse_number<int>(value, at);
      else if (key == "repetition") m.repetition = text::parse_number<int>(value, at);
      else if (key == "group") m.group = value;
      continue;
    }
    if (!header) {
      if (l != kFeatureHeader) throw Error(at + "expected header '" + std::string(kFeatureHeader) + "'");
      header = true;
      continue;
    }
    const auto cells = text::split(l, ',');
    if (cells.size() != kFeatureCount + 1)
      throw Error(at + "expected " + std::to_string(kFeatureCount + 1) + " columns");
    const int frame = text::parse_number<int>(cells[0], at);
    if (frame != static_cast<int>(m.rows.size()) + 1) throw Error(at + "frame numbers must run 1, 2, 3, ...");
    FeatureRow row{};
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = text::parse_number<double>(cells[k + 1], at);
    m.rows.push_back(row);
  }
  if (!header) throw Error(source + ": missing header line");
  return m;
}

inline void write_features(const std::string& path, const FeatureMatrix& m) {
  text::write_file(path, encode_features(m));
}
inline FeatureMatrix read_features(const std::string& path) { return decode_features(text::read_file(path), path); }

// ---- word annotations -----------------------------------------------------

inline const std::vector<std::string>& word_groups() {
  static const std::vector<std::string> g{"Nu", "LAL1", "LAL2", "LG", "Sec"};
  return g;
}

struct Annotation {
  std::string label;
  int start = 0;  // first frame, 0-based
  int end = 0;    // last frame, inclusive
  std::string speaker;
  int session = 1;
  int repetition = 0;
  std::string group = "Nu";
};

/// `label,start,end,speaker,session,repetition,group`, `#` comments.
inline std::vector<Annotation> decode_annotations(const std::string& content,
                                                  const std::string& source = "annotations") {
  std::vector<Annotation> out;
  const auto ls = text::lines(content);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string at = text::where(source, i + 1);
    const std::string_view l = text::trim(ls[i]);
    if (l.empty() || l.front() == '#') continue;
    const auto c = text::split(l, ',');
    if (c.size() != 7) throw Error(at + "expected 7 fields: label,start,end,speaker,session,repetition,group");
    Annotation a;
    a.label = c[0];
    a.start = text::parse_number<int>(c[1], at);
    a.end = text::parse_number<int>(c[2], at);
    a.speaker = c[3];
    a.session = text::parse_number<int>(c[4], at);
    a.repetition = text::parse_number<int>(c[5], at);
    a.group = c[6];
    if (a.label.empty()) throw Error(at + "empty label");
    if (a.start < 0 || a.end < a.start) throw Error(at + "need 0 <= start <= end");
    if (a.session != 1 && a.session != 2) throw Error(at + "session must be 1 or 2");
    const auto& g = word_groups();
    if (std::find(g.begin(), g.end(), a.group) == g.end()) throw Error(at + "unknown group '" + a.group + "'");
    out.push_back(std::move(a));
  }
  return out;
}

inline std::string encode_annotations(const std::vector<Annotation>& as) {
  std::string out = "# label,start,end,speaker,session,repetition,group\n";
  for (const Annotation& a : as)
    out += a.label + "," + std::to_string(a.start) + "," + std::to_string(a.end) + "," + a.speaker + "," +
           std::to_string(a.session) + "," + std::to_string(a.repetition) + "," + a.group + "\n";
  return out;
}

inline std::vector<Annotation> read_annotations(const std::string& path) {
  return decode_annotations(text::read_file(path), path);
}

// ---- weights, template, curve -----------------------------------------------

inline FeatureWeights decode_weights(const std::string& content, const std::string& source = "weights") {
  const auto kv = text::parse_key_values(content, source);
  std::array<double, kFeatureCount> w{};
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const std::string name(kFeatureNames[k]);
    const auto it = kv.find(name);
    if (it == kv.end()) throw Error(source + ": missing weight " + name);
    w[k] = text::parse_number<double>(it->second, source + ": " + name + ": ");
    if (w[k] < 0.0) throw Error(source + ": negative weight " + name);
    sum += w[k];
  }
  if (kv.size() != w.size()) throw Error(source + ": unexpected keys; expected exactly H W M Q R ER RC T");
  if (std::abs(sum - 1.0) > 1e-6) throw Error(source + ": weights sum to " + std::to_string(sum) + ", not 1");
  return FeatureWeights::normalized(w);
}

inline std::string encode_weights(const FeatureWeights& w) {
  std::string out;
  for (std::size_t k = 0; k < kFeatureCount; ++k) out += std::string(kFeatureNames[k]) + "=" + text::fixed(w[k], 9) + "\n";
  return out;
}

inline FeatureWeights read_weights(const std::string& path) { return decode_weights(text::read_file(path), path); }

/// 13 lines of 13 cell values (0 feature, 1 tissue, 2 don't care).
inline FaceTemplate decode_template(const std::string& content, const std::string& source = "template") {
  FaceTemplate t;
  int row = 0;
  const auto ls = text::lines(content);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string_view l = text::trim(ls[i]);
    if (l.empty() || l.front() == '#') continue;
    const std::string at = text::where(source, i + 1);
    if (row >= FaceTemplate::kSize) throw Error(at + "more than 13 rows");
    std::istringstream in{std::string(l)};
    int col = 0;
    for (std::string tok; in >> tok; ++col) {
      if (col >= FaceTemplate::kSize) throw Error(at + "more than 13 cells");
      const int v = text::parse_number<int>(tok, at);
      if (v < 0 || v > 2) throw Error(at + "cell values are 0, 1 or 2");
      t.cells[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = static_cast<std::uint8_t>(v);
    }
    if (col != FaceTemplate::kSize) throw Error(at + "expected 13 cells");
    ++row;
  }
  if (row != FaceTemplate::kSize) throw Error(source + ": expected 13 rows");
  return t;
}

inline FaceTemplate read_template(const std::string& path) { return decode_template(text::read_file(path), path); }

inline std::string encode_curve(const ThresholdCurve& c) {
  std::string out = "threshold,frr,far\n";
  for (std::size_t i = 0; i < c.thresholds.size(); ++i)
    out += text::fixed6(c.thresholds[i]) + "," + text::fixed6(c.frr[i]) + "," + text::fixed6(c.far[i]) + "\n";
  return out;
}

// ---- signature stores ---------------------------------------------------------

/// Directory of feature files indexed by manifest.csv
/// (`file,label,speaker,session,repetition,group`).
inline TrainingSet load_store(const std::string& dir) {
  const fs::path root(dir);
  const std::string manifest = (root / "manifest.csv").string();
  TrainingSet out;
  const auto ls = text::lines(text::read_file(manifest));
  bool header = false;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string_view l = text::trim(ls[i]);
    if (l.empty() || l.front() == '#') continue;
    const std::string at = text::where(manifest, i + 1);
    if (!header) {
      if (l != "file,label,speaker,session,repetition,group") throw Error(at + "unexpected manifest header");
      header = true;
      continue;
    }
    const auto c = text::split(l, ',');
    if (c.size() != 6) throw Error(at + "expected 6 fields");
    FeatureMatrix m = read_features((root / c[0]).string());
    m.label = c[1];
    m.speaker = c[2];
    m.session = text::parse_number<int>(c[3], at);
    m.repetition = text::parse_number<int>(c[4], at);
    m.group = c[5];
    out.push_back(std::move(m));
  }
  return out;
}

inline void save_store(const std::string& dir, const TrainingSet& set) {
  const fs::path root(dir);
  fs::create_directories(root);
  std::string manifest = "file,label,speaker,session,repetition,group\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const FeatureMatrix& m = set[i];
    char name[32];
    std::snprintf(name, sizeof name, "sig_%05zu.csv", i);
    write_features((root / name).string(), m);
    manifest += std::string(name) + "," + m.label + "," + m.speaker + "," + std::to_string(m.session) + "," +
                std::to_string(m.repetition) + "," + m.group + "\n";
  }
  text::write_file((root / "manifest.csv").string(), manifest);
}

inline DistanceMode parse_mode(const std::string& s) {
  if (s == "dtw") return DistanceMode::dtw;
  if (s == "euclid" || s == "euclid_interp") return DistanceMode::euclid_interp;
  throw Error("unknown distance mode '" + s + "' (dtw|euclid)");
}

inline const char* to_string(DistanceMode m) { return m == DistanceMode::dtw ? "dtw" : "euclid"; }

inline FeatureWeights parse_weights_profile(const std::string& s) {
  if (s == "sd") return FeatureWeights::speaker_dependent();
  if (s == "si") return FeatureWeights::speaker_independent();
  if (s == "uniform") return FeatureWeights{};
  return read_weights(s);
}

/// profile.txt (client, threshold, max_tries, mode, weights) next to a store.
inline PasswordProfile load_profile(const std::string& dir) {
  const std::string path = (fs::path(dir) / "profile.txt").string();
  const auto kv = text::parse_key_values(text::read_file(path), path);
  auto get = [&](const std::string& k, const std::string& fallback) {
    const auto it = kv.find(k);
    return it == kv.end() ? fallback : it->second;
  };
  PasswordProfile p;
  p.client = get("client", "");
  p.threshold = text::parse_number<double>(get("threshold", "0"), path + ": threshold: ");
  p.max_tries = text::parse_number<int>(get("max_tries", "3"), path + ": max_tries: ");
  p.mode = parse_mode(get("mode", "dtw"));
  p.weights = parse_weights_profile(get("weights", "sd"));
  p.enrolled = load_store(dir);
  validate(p);
  return p;
}

/// watchlist.txt (threshold, mode, weights) next to a store of security words.
inline WatchList load_watchlist(const std::string& dir) {
  const std::string path = (fs::path(dir) / "watchlist.txt").string();
  const auto kv = text::parse_key_values(text::read_file(path), path);
  auto get = [&](const std::string& k, const std::string& fallback) {
    const auto it = kv.find(k);
    return it == kv.end() ? fallback : it->second;
  };
  WatchList w;
  w.threshold = text::parse_number<double>(get("threshold", "0"), path + ": threshold: ");
  w.mode = parse_mode(get("mode", "dtw"));
  w.weights = parse_weights_profile(get("weights", "sd"));
  w.words = load_store(dir);
  if (w.words.empty()) throw Error(path + ": watch list is empty");
  return w;
}

}  // namespace vwords
