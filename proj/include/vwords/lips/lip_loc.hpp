#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "vwords/face/face_loc.hpp"
#include "vwords/imaging/colour.hpp"
#include "vwords/imaging/components.hpp"
#include "vwords/imaging/filters.hpp"
#include "vwords/imaging/morphology.hpp"
#include "vwords/lips/kmeans.hpp"

namespace vwords {

/// Lip search area: the bottom third of a face box.
struct Roi {
  int origin_x = 0;  // offset of the crop inside the frame
  int origin_y = 0;
  RgbImage image;
  FaceBox face;  // the face the region was cut from
};

using LipMask = BinaryImage;  // 1 = lip pixel

/// Bottom tri-sector of the face box (floor division; any remainder stays with
/// the upper sectors), clipped to the frame.
inline Roi roi_from_face(const FaceBox& face, const RgbImage& frame) {
  if (face.width <= 0 || face.height <= 0) throw Error("roi_from_face: degenerate face box");
  const int third = face.height / 3;
  if (third <= 0) throw Error("roi_from_face: face box shorter than three pixels");
  const Rect wanted{face.x, face.bottom() - third, face.width, third};
  const Rect clipped = intersect(wanted, {0, 0, frame.width(), frame.height()});
  if (clipped.empty()) throw Error("roi_from_face: face box lies outside the frame");
  return {clipped.x, clipped.y, crop(frame, clipped), face};
}

namespace detail {

inline void minmax_normalize(std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double a = *lo, range = *hi - *lo;
  for (double& x : v) x = range > 0.0 ? (x - a) / range : 0.0;
}

}  // namespace detail

/// Lip-Map score Cr^2 (Cr^2 - eta Cr/Cb)^2 with both terms min-max normalised
/// over the region; the result is rescaled to [0,1] (all zero when uniform).
inline GrayImage lip_map(const RgbImage& roi) {
  const std::size_t n = roi.size();
  std::vector<double> cr2(n), ratio(n);
  double ratio_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const YCbCr c = ycbcr(roi.pixels()[i]);
    cr2[i] = c.cr * c.cr;
    if (c.cb > 0.0) {
      ratio[i] = c.cr / c.cb;
      ratio_max = std::max(ratio_max, ratio[i]);
    } else {
      ratio[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  for (double& r : ratio)
    if (std::isnan(r)) r = ratio_max;
  detail::minmax_normalize(cr2);
  detail::minmax_normalize(ratio);
  const double sum_cr2 = std::accumulate(cr2.begin(), cr2.end(), 0.0);
  const double sum_ratio = std::accumulate(ratio.begin(), ratio.end(), 0.0);
  const double eta = sum_ratio > 0.0 ? 0.95 * sum_cr2 / sum_ratio : 0.0;

  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = cr2[i] - eta * ratio[i];
    score[i] = cr2[i] * d * d;
  }
  detail::minmax_normalize(score);
  GrayImage out(roi.width(), roi.height());
  std::copy(score.begin(), score.end(), out.pixels().begin());
  return out;
}

inline GrayImage lip_map(const Roi& roi) { return lip_map(roi.image); }

/// Eight-component pixel descriptor, every component scaled to [0,1]:
/// r, g, b chromaticity, warped hue, Cb, Cr, x, y.
using PixelFeature = std::array<double, 8>;

inline PixelFeature pixel_feature(const RgbImage& img, int x, int y) {
  const Rgb& p = img.at(x, y);
  const Chromaticity c = trichromatic(p);
  const YCbCr yc = ycbcr(p);
  const double fx = img.width() > 1 ? static_cast<double>(x) / (img.width() - 1) : 0.0;
  const double fy = img.height() > 1 ? static_cast<double>(y) / (img.height() - 1) : 0.0;
  return {c.r, c.g, c.b, warped_hue(p) / 180.0, std::clamp(yc.cb / 255.0, 0.0, 1.0),
          std::clamp(yc.cr / 255.0, 0.0, 1.0), fx, fy};
}

/// Descriptors of every pixel (row-major), each component min-max stretched
/// over the region so colour and position spread over comparable ranges.
inline std::vector<PixelFeature> pixel_features(const RgbImage& img) {
  std::vector<PixelFeature> f;
  f.reserve(img.size());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) f.push_back(pixel_feature(img, x, y));
  for (std::size_t d = 0; d < PixelFeature{}.size(); ++d) {
    double lo = f.front()[d], hi = lo;
    for (const auto& v : f) {
      lo = std::min(lo, v[d]);
      hi = std::max(hi, v[d]);
    }
    for (auto& v : f) v[d] = hi > lo ? (v[d] - lo) / (hi - lo) : 0.0;
  }
  return f;
}

namespace detail {

inline double feature_distance2(const PixelFeature& a, const PixelFeature& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline PixelFeature mean_feature(const std::vector<PixelFeature>& f, const std::vector<std::size_t>& idx) {
  PixelFeature m{};
  for (std::size_t i : idx)
    for (std::size_t d = 0; d < m.size(); ++d) m[d] += f[i][d];
  for (double& v : m) v /= static_cast<double>(idx.size());
  return m;
}

/// Largest component, joined with the runner-up when their boxes are within
/// `gap` pixels of each other.
inline LipMask keep_lip_components(const BinaryImage& mask, int gap) {
  const Labelling l = label_components(mask, Connectivity::eight);
  if (l.components.empty()) return BinaryImage(mask.width(), mask.height(), 0);
  std::vector<Component> sorted = l.components;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Component& a, const Component& b) { return a.area > b.area; });
  if (sorted.size() >= 2 && rect_gap(sorted[0].bounds, sorted[1].bounds) <= gap)
    return select_labels(l, {sorted[0].label, sorted[1].label});
  return select_labels(l, {sorted[0].label});
}

inline void require_roi_size(const RgbImage& img, const char* who) {
  if (img.width() < 3 || img.height() < 3)
    throw Error(std::string(who) + ": region must be at least 3x3");
}

}  // namespace detail

struct NearestColourConfig {
  int max_iters = 50;  // k-means on the Lip-Map
  int neighbour_gap = 2;  // px between boxes of two components that count as one mouth
};

/// Nearest-colour lip segmentation.
///
/// The Lip-Map is split in two by k-means; the high cluster seeds a lip
/// prototype, the farthest half of the pixels from it seeds a non-lip
/// prototype, and every pixel goes to the nearer of the two. The mask is opened
/// and reduced to the largest blob, or the two largest when they are adjacent.
/// Returns an all-zero mask when nothing survives.
inline LipMask nearest_colour(const RgbImage& roi, const NearestColourConfig& cfg = {}) {
  detail::require_roi_size(roi, "nearest_colour");
  const int w = roi.width(), h = roi.height();
  const std::size_t n = roi.size();
  LipMask empty(w, h, 0);

  const GrayImage map = lip_map(roi);
  PointSet pts{1, std::vector<double>(map.pixels().begin(), map.pixels().end())};
  const KMeans2Result km = kmeans2(pts, cfg.max_iters);
  if (km.empty_cluster) return empty;
  const std::uint8_t lip_cluster = km.centers[1][0] >= km.centers[0][0] ? 1 : 0;

  const std::vector<PixelFeature> features = pixel_features(roi);

  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < n; ++i)
    if (km.labels[i] == lip_cluster) seeds.push_back(i);
  PixelFeature lip = detail::mean_feature(features, seeds);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = detail::feature_distance2(features[i], lip);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
  order.resize(std::max<std::size_t>(1, n / 2));
  PixelFeature skin = detail::mean_feature(features, order);

  // The prototypes stay fixed, so a second assignment pass changes nothing.
  std::vector<std::uint8_t> label(n);
  for (std::size_t i = 0; i < n; ++i)
    label[i] = detail::feature_distance2(features[i], lip) < detail::feature_distance2(features[i], skin) ? 1 : 0;

  BinaryImage raw(w, h, 0);
  for (std::size_t i = 0; i < n; ++i) raw.pixels()[i] = label[i] == 1 ? 1 : 0;
  const BinaryImage opened = morphology(raw, MorphOp::open, 1);
  return detail::keep_lip_components(opened, cfg.neighbour_gap);
}

inline LipMask nearest_colour(const Roi& roi, const NearestColourConfig& cfg = {}) {
  return nearest_colour(roi.image, cfg);
}

/// Previous frame's region and mask, for the motion-gated tracker.
struct MotionGate {
  const RgbImage* prev_roi = nullptr;
  const LipMask* prev_mask = nullptr;
  double threshold = 5.0;  // mean absolute intensity difference
};

struct LayerFusionConfig {
  int vote_threshold = 2;
  int max_iters = 50;
};

/// Per-pixel vote count (0..5) from the five clustered cue layers:
/// chromaticity, pseudo hue, warped hue, Lip-Map and Sobel edge magnitude.
inline Image<int> lip_votes(const RgbImage& roi, int max_iters = 50) {
  const int w = roi.width(), h = roi.height();
  const std::size_t n = roi.size();
  Image<int> votes(w, h, 0);

  // Clusters `values` (dim-wide rows) and votes for the cluster whose centre has
  // the larger (or smaller) first coordinate.
  auto vote = [&](PointSet pts, bool lip_is_high) {
    const KMeans2Result km = kmeans2(pts, max_iters);
    if (km.empty_cluster) return;
    const bool one_is_high = km.centers[1][0] >= km.centers[0][0];
    const std::uint8_t lip = one_is_high == lip_is_high ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i)
      if (km.labels[i] == lip) ++votes.pixels()[i];
  };

  PointSet rgb{3, {}}, phue{1, {}}, whue{1, {}};
  rgb.coords.reserve(3 * n);
  for (const Rgb& p : roi.pixels()) {
    const Chromaticity c = trichromatic(p);
    rgb.coords.insert(rgb.coords.end(), {c.r, c.g, c.b});
    phue.coords.push_back(pseudo_hue(p));
    whue.coords.push_back(warped_hue(p));
  }
  vote(std::move(rgb), true);
  vote(std::move(phue), true);
  vote(std::move(whue), false);

  const GrayImage map = lip_map(roi);
  vote(PointSet{1, {map.pixels().begin(), map.pixels().end()}}, true);

  const GrayImage gray = to_gray(roi);
  const GrayImage sh = sobel(gray, SobelDirection::horizontal);
  const GrayImage sv = sobel(gray, SobelDirection::vertical);
  PointSet edge{1, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) edge.coords[i] = std::hypot(sh.pixels()[i], sv.pixels()[i]);
  vote(std::move(edge), true);
  return votes;
}

inline double mean_abs_difference(const RgbImage& a, const RgbImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(luma(a.pixels()[i]) - luma(b.pixels()[i]));
  return s / static_cast<double>(a.size());
}

/// Layer-fusion lip segmentation: grow 4-connected regions from the
/// maximum-vote pixels through pixels with at least `vote_threshold` votes,
/// open, and keep the largest area. With a motion gate, an unchanged region
/// returns the previous mask.
inline LipMask layer_fusion(const RgbImage& roi, const LayerFusionConfig& cfg = {},
                            const MotionGate& gate = {}) {
  detail::require_roi_size(roi, "layer_fusion");
  if (gate.prev_roi && gate.prev_mask && gate.prev_mask->width() == roi.width() &&
      gate.prev_mask->height() == roi.height() &&
      mean_abs_difference(*gate.prev_roi, roi) < gate.threshold)
    return *gate.prev_mask;

  const int w = roi.width(), h = roi.height();
  LipMask grown(w, h, 0);
  const Image<int> votes = lip_votes(roi, cfg.max_iters);
  const int top = *std::max_element(votes.pixels().begin(), votes.pixels().end());
  if (top < cfg.vote_threshold || top == 0) return grown;

  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (votes.at(x, y) == top) {
        grown.at(x, y) = 1;
        queue.emplace_back(x, y);
      }
  constexpr std::array<std::pair<int, int>, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (const auto& [dx, dy] : kSteps) {
      const int nx = x + dx, ny = y + dy;
      if (!grown.contains(nx, ny) || grown.at(nx, ny) || votes.at(nx, ny) < cfg.vote_threshold) continue;
      grown.at(nx, ny) = 1;
      queue.emplace_back(nx, ny);
    }
  }
  const BinaryImage opened = morphology(grown, MorphOp::open, 1);
  return detail::keep_lip_components(opened, -1);
}

inline LipMask layer_fusion(const Roi& roi, const LayerFusionConfig& cfg = {}, const MotionGate& gate = {}) {
  return layer_fusion(roi.image, cfg, gate);
}

/// Detected mouth: tight box around the lip mask plus its inscribed ellipse.
struct MouthRoi {
  Rect box;          // in region coordinates
  int origin_x = 0;  // region offset inside the frame
  int origin_y = 0;
  RgbImage pixels;      // crop of the box
  BinaryImage ellipse;  // 1 inside the inscribed ellipse, same size as `pixels`
  FaceBox face;

  double semi_axis_x() const { return box.width / 2.0; }
  double semi_axis_y() const { return box.height / 2.0; }
  std::size_t ellipse_area() const { return count_ones(ellipse); }
};

/// Axis-aligned ellipse inscribed in a w x h box, sampled at pixel centres.
inline BinaryImage inscribed_ellipse(int w, int h) {
  BinaryImage out(w, h, 0);
  const double a = w / 2.0, b = h / 2.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (x + 0.5 - a) / a, dy = (y + 0.5 - b) / b;
      out.at(x, y) = dx * dx + dy * dy <= 1.0 ? 1 : 0;
    }
  }
  return out;
}

inline MouthRoi mouth_from_mask(const LipMask& mask, const Roi& roi) {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask.at(x, y)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) throw LipsNotFound();
  MouthRoi m;
  m.box = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  m.origin_x = roi.origin_x;
  m.origin_y = roi.origin_y;
  m.pixels = crop(roi.image, m.box);
  m.ellipse = inscribed_ellipse(m.box.width, m.box.height);
  m.face = roi.face;
  return m;
}

}  // namespace vwords
