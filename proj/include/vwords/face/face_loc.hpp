#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "vwords/imaging/colour.hpp"
#include "vwords/imaging/filters.hpp"
#include "vwords/imaging/image.hpp"
#include "vwords/imaging/resize.hpp"
#include "vwords/imaging/wavelet.hpp"

namespace vwords {

/// 13x13 face pattern applied to the binary LL3 grid.
/// Cell values: 0 = feature (black), 1 = tissue (white), 2 = neutral.
struct FaceTemplate {
  static constexpr int kSize = 13;
  std::array<std::array<std::uint8_t, kSize>, kSize> cells{};
  /// One template cell covers scale x scale original pixels (three Haar levels).
  int scale = 8;

  std::uint8_t at(int col, int row) const { return cells[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]; }

  int count(std::uint8_t value) const {
    int n = 0;
    for (const auto& row : cells)
      n += static_cast<int>(std::count(row.begin(), row.end(), value));
    return n;
  }

  int box_size() const { return kSize * scale; }
};

/// The mean binary LL3 face: eyes with brows, nose and mouth are black.
inline FaceTemplate default_face_template() {
  FaceTemplate t;
  t.cells = {{
      {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
      {1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1},
      {1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1},
      {1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1},
      {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
      {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
      {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
      {1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1},
      {1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1},
      {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
      {1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1},
      {1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1},
      {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
  }};
  return t;
}

/// Default template with the two outermost cells of each bottom (chin) corner
/// marked neutral.
inline FaceTemplate neutral_chin_face_template() {
  FaceTemplate t = default_face_template();
  auto& last = t.cells[FaceTemplate::kSize - 1];
  last[0] = last[1] = last[FaceTemplate::kSize - 2] = last[FaceTemplate::kSize - 1] = 2;
  return t;
}

struct CandidateWindow {
  int x = 0;  // LL3 column of the top-left cell
  int y = 0;  // LL3 row of the top-left cell
  double hd = 0.0;
  int colour_score = 0;

  friend bool operator==(const CandidateWindow&, const CandidateWindow&) = default;
};

using FaceBox = Rect;

/// Plain or weighted Hamming score of one template placement.
///
/// Plain: +1 per matching non-neutral cell. Weighted: a white match adds
/// B/(B+W) and a black match adds W/(B+W), with W and B the white and black
/// counts of the whole window.
inline double hamming_score(const BinaryImage& grid, const FaceTemplate& t, int x0, int y0,
                            bool weighted) {
  constexpr int n = FaceTemplate::kSize;
  int white_matches = 0, black_matches = 0, white = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::uint8_t bit = grid.at(x0 + i, y0 + j);
      white += bit;
      const std::uint8_t cell = t.at(i, j);
      if (cell == 2 || cell != bit) continue;
      if (bit) ++white_matches;
      else ++black_matches;
    }
  }
  if (!weighted) return white_matches + black_matches;
  const double total = n * n;
  const double black = total - white;
  return white_matches * (black / total) + black_matches * (white / total);
}

/// Scores every placement and returns the best `top_n` windows, highest score
/// first, ties kept in raster (row-major) order.
inline std::vector<CandidateWindow> scan_template(const BinaryImage& ll3, const FaceTemplate& t,
                                                  bool weighted, std::size_t top_n) {
  constexpr int n = FaceTemplate::kSize;
  if (ll3.width() < n || ll3.height() < n)
    throw Error("LL3 grid " + std::to_string(ll3.width()) + "x" + std::to_string(ll3.height()) +
                " is smaller than the 13x13 face template");
  std::vector<CandidateWindow> all;
  all.reserve(static_cast<std::size_t>((ll3.width() - n + 1) * (ll3.height() - n + 1)));
  for (int y = 0; y + n <= ll3.height(); ++y)
    for (int x = 0; x + n <= ll3.width(); ++x) all.push_back({x, y, hamming_score(ll3, t, x, y, weighted), 0});
  std::stable_sort(all.begin(), all.end(),
                   [](const CandidateWindow& a, const CandidateWindow& b) { return a.hd > b.hd; });
  if (all.size() > top_n) all.resize(top_n);
  return all;
}

/// Simplified Kovac et al. skin rule (uniform daylight).
inline bool is_skin(const Rgb& p) noexcept {
  const int r = p.r, g = p.g, b = p.b;
  return r > 95 && g > 40 && b > 20 && r - std::min(g, b) > 15 && r - g > 15 && r > b;
}

/// Number of skin pixels under the template's tissue cells.
inline int skin_score(const RgbImage& frame_resized, const CandidateWindow& window,
                      const FaceTemplate& t) {
  constexpr int n = FaceTemplate::kSize;
  int score = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (t.at(i, j) != 1) continue;
      const int x = window.x + i, y = window.y + j;
      if (frame_resized.contains(x, y) && is_skin(frame_resized.at(x, y))) ++score;
    }
  }
  return score;
}

/// Fuzzy OR of the wavelet and colour counters: a counter is High when it
/// reaches the midpoint of its range over the candidates. Returns the first
/// candidate with a High output.
inline CandidateWindow fuzzy_fuse(const std::vector<CandidateWindow>& candidates) {
  if (candidates.empty()) throw Error("fuzzy_fuse needs at least one candidate");
  auto [hd_min, hd_max] = std::minmax_element(
      candidates.begin(), candidates.end(),
      [](const CandidateWindow& a, const CandidateWindow& b) { return a.hd < b.hd; });
  auto [c_min, c_max] = std::minmax_element(
      candidates.begin(), candidates.end(),
      [](const CandidateWindow& a, const CandidateWindow& b) { return a.colour_score < b.colour_score; });
  const double hd_mid = (hd_max->hd + hd_min->hd) / 2.0;
  const double colour_mid = (c_max->colour_score + c_min->colour_score) / 2.0;
  for (const auto& c : candidates)
    if (c.hd >= hd_mid || c.colour_score >= colour_mid) return c;
  return *hd_max;  // unreachable: the max-hd candidate is always High
}

struct FaceConfig {
  FaceTemplate face_template = default_face_template();
  bool weighted = true;
  std::size_t top_n = 5;
  std::optional<double> entropy_theta;  // use the entropy edge detector instead of the dual filter
};

struct FaceTrace {
  BinaryImage ll3_binary;
  std::vector<CandidateWindow> candidates;
  CandidateWindow chosen;
};

/// Full localizer on one frame; `trace` receives the intermediate products.
inline FaceBox localize_face(const RgbImage& frame, const FaceConfig& config = {},
                             FaceTrace* trace = nullptr) {
  const int side = config.face_template.box_size();
  if (frame.width() < side || frame.height() < side)
    throw Error("frame " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                " is smaller than the " + std::to_string(side) + "px face box");
  const GrayImage gray = to_gray(frame);
  const BinaryImage edges =
      config.entropy_theta ? entropy_edge(gray, *config.entropy_theta) : dual_filter_edge(gray).binary;
  const auto pyramid = haar_pyramid(from_binary(edges), 3);
  const GrayImage& ll3 = pyramid.approximation();
  BinaryImage ll3_binary = binarize_local_avg(ll3);

  auto candidates = scan_template(ll3_binary, config.face_template, config.weighted, config.top_n);
  const RgbImage small = box_resize(frame, ll3.width(), ll3.height());
  for (auto& c : candidates) c.colour_score = skin_score(small, c, config.face_template);
  const CandidateWindow chosen = fuzzy_fuse(candidates);

  const int scale = config.face_template.scale;
  FaceBox box{chosen.x * scale, chosen.y * scale, side, side};
  box.x = std::min(box.x, frame.width() - side);
  box.y = std::min(box.y, frame.height() - side);
  if (trace) *trace = {std::move(ll3_binary), std::move(candidates), chosen};
  return box;
}

/// Searches only around the previous box (expanded by `margin` on each side);
/// falls back to the full frame when that region would leave the image.
inline FaceBox track_face(const FaceBox& prev, const RgbImage& frame, int margin,
                          const FaceConfig& config = {}) {
  const Rect region{prev.x - margin, prev.y - margin, prev.width + 2 * margin,
                    prev.height + 2 * margin};
  const bool inside = region.x >= 0 && region.y >= 0 && region.right() <= frame.width() &&
                      region.bottom() <= frame.height();
  if (!inside || margin < 0) return localize_face(frame, config);
  FaceBox box = localize_face(crop(frame, region), config);
  box.x += region.x;
  box.y += region.y;
  return box;
}

}  // namespace vwords
