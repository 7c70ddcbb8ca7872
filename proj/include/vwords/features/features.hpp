#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "vwords/imaging/colour.hpp"
#include "vwords/imaging/filters.hpp"
#include "vwords/imaging/histogram.hpp"
#include "vwords/imaging/resize.hpp"
#include "vwords/imaging/wavelet.hpp"
#include "vwords/lips/lip_loc.hpp"

namespace vwords {

inline constexpr int kFeatureCount = 8;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{"H", "W", "M", "Q",
                                                                          "R", "ER", "RC", "T"};
enum Feature { kH, kW, kM, kQ, kR, kER, kRC, kT };

/// Raw per-frame measurements.
struct FrameFeatures {
  double h = 0.0;   // mouth height, px
  double w = 0.0;   // mouth width, px
  double m = 0.0;   // mutual information with the previous frame, bits
  double q = 0.0;   // quality index against the previous frame
  double r = 0.0;   // HL / LH significant-coefficient ratio
  double er = 0.0;  // vertical / horizontal Sobel energy
  double rc = 0.0;  // mean red
  double t = 0.0;   // teeth pixels
};

using FeatureRow = std::array<double, kFeatureCount>;

/// A visual word: one normalised row per frame plus its bookkeeping.
struct FeatureMatrix {
  std::vector<FeatureRow> rows;
  std::string label;
  std::string speaker;
  int session = 1;
  int repetition = 0;
  std::string group;

  std::size_t frames() const { return rows.size(); }
  std::vector<double> column(int k) const {
    std::vector<double> c;
    c.reserve(rows.size());
    for (const FeatureRow& r : rows) c.push_back(r[static_cast<std::size_t>(k)]);
    return c;
  }
  bool operator==(const FeatureMatrix&) const = default;
};

inline constexpr int kSignatureSide = 50;
inline constexpr int kMutualBins = 32;

inline std::pair<double, double> geom_hw(const MouthRoi& mouth) {
  return {static_cast<double>(mouth.box.height), static_cast<double>(mouth.box.width)};
}

/// Luma of the mouth crop, bilinearly scaled to 50x50.
inline GrayImage signature_gray(const MouthRoi& mouth) {
  return bilinear_resize(to_gray(mouth.pixels), kSignatureSide, kSignatureSide);
}

inline HaarLevel signature_bands(const MouthRoi& mouth) { return haar_step(signature_gray(mouth)); }

inline BinRange ll_range() { return {0.0, 255.0}; }
inline BinRange detail_range() { return {-127.5, 127.5}; }

inline double band_mutual_information(const GrayImage& x, const GrayImage& y, BinRange range,
                                      int bins = kMutualBins) {
  return mutual_information(histograms(x, y, bins, range));
}

/// Mean of the per-band mutual informations of two level-1 decompositions.
inline double mutual_feature(const HaarLevel& curr, const HaarLevel& prev, int bins = kMutualBins) {
  return (band_mutual_information(curr.ll, prev.ll, ll_range(), bins) +
          band_mutual_information(curr.hl, prev.hl, detail_range(), bins) +
          band_mutual_information(curr.lh, prev.lh, detail_range(), bins) +
          band_mutual_information(curr.hh, prev.hh, detail_range(), bins)) /
         4.0;
}

inline double mutual_feature(const MouthRoi& curr, const MouthRoi& prev) {
  return mutual_feature(signature_bands(curr), signature_bands(prev));
}

/// Universal quality index of two equally sized samples (unbiased moments).
/// A vanishing denominator yields 1 for identical samples and 0 otherwise.
inline double quality_index(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("quality_index: sample sizes differ");
  if (x.size() < 2) throw Error("quality_index: need at least two samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double vx = 0.0, vy = 0.0, cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
    cxy += (x[i] - mx) * (y[i] - my);
  }
  vx /= n - 1.0;
  vy /= n - 1.0;
  cxy /= n - 1.0;
  const double den = (vx + vy) * (mx * mx + my * my);
  if (den <= 0.0) return std::equal(x.begin(), x.end(), y.begin()) ? 1.0 : 0.0;
  return std::clamp(4.0 * cxy * mx * my / den, -1.0, 1.0);
}

inline double quality_index(const GrayImage& x, const GrayImage& y) {
  if (x.width() != y.width() || x.height() != y.height())
    throw Error("quality_index: image dimensions differ");
  return quality_index(x.pixels(), y.pixels());
}

inline double quality_feature(const HaarLevel& curr, const HaarLevel& prev) {
  return (quality_index(curr.ll, prev.ll) + quality_index(curr.hl, prev.hl) +
          quality_index(curr.lh, prev.lh) + quality_index(curr.hh, prev.hh)) /
         4.0;
}

inline double quality_feature(const MouthRoi& curr, const MouthRoi& prev) {
  return quality_feature(signature_bands(curr), signature_bands(prev));
}

/// Coefficients further than one (population) standard deviation from the
/// band median.
inline std::size_t significant_count(const GrayImage& band) {
  std::vector<double> v(band.pixels().begin(), band.pixels().end());
  const double n = static_cast<double>(v.size());
  double mu = 0.0;
  for (double c : v) mu += c;
  mu /= n;
  double var = 0.0;
  for (double c : v) var += (c - mu) * (c - mu);
  const double sigma = std::sqrt(var / n);

  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  const double median = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [&](double c) { return std::abs(c - median) > sigma; }));
}

inline double wavelet_ratio(const HaarLevel& bands) {
  return (static_cast<double>(significant_count(bands.hl)) + 1.0) /
         (static_cast<double>(significant_count(bands.lh)) + 1.0);
}

inline double wavelet_ratio(const GrayImage& gray) {
  return wavelet_ratio(haar_step(bilinear_resize(gray, kSignatureSide, kSignatureSide)));
}

inline double wavelet_ratio(const MouthRoi& mouth) { return wavelet_ratio(signature_bands(mouth)); }

inline double edge_ratio(const GrayImage& gray) {
  const GrayImage v = sobel(gray, SobelDirection::vertical);
  const GrayImage h = sobel(gray, SobelDirection::horizontal);
  double sv = 0.0, sh = 0.0;
  for (double x : v.pixels()) sv += std::abs(x);
  for (double x : h.pixels()) sh += std::abs(x);
  return sv / (sh + 1.0);
}

// Crops thinner than the Sobel support fall back to the 50x50 rescale.
inline double edge_ratio(const MouthRoi& mouth) {
  if (mouth.pixels.width() < 3 || mouth.pixels.height() < 3) return edge_ratio(signature_gray(mouth));
  return edge_ratio(to_gray(mouth.pixels));
}

inline double red_colour(const RgbImage& pixels, const BinaryImage& ellipse) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (!ellipse.pixels()[i]) continue;
    sum += pixels.pixels()[i].r;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

inline double red_colour(const MouthRoi& mouth) { return red_colour(mouth.pixels, mouth.ellipse); }

/// Teeth pixels among CIE samples: a* or u* at least one standard deviation
/// below its mean. A channel with no spread contributes nothing.
inline std::size_t teeth_count(std::span<const LabLuv> samples) {
  if (samples.empty()) return 0;
  const double n = static_cast<double>(samples.size());
  double ma = 0.0, mu = 0.0;
  for (const LabLuv& s : samples) {
    ma += s.a;
    mu += s.u;
  }
  ma /= n;
  mu /= n;
  double va = 0.0, vu = 0.0;
  for (const LabLuv& s : samples) {
    va += (s.a - ma) * (s.a - ma);
    vu += (s.u - mu) * (s.u - mu);
  }
  const double sa = std::sqrt(va / n), su = std::sqrt(vu / n);
  constexpr double kFlat = 1e-9;
  std::size_t t = 0;
  for (const LabLuv& s : samples) {
    const bool low_a = sa > kFlat && s.a <= ma - sa;
    const bool low_u = su > kFlat && s.u <= mu - su;
    if (low_a || low_u) ++t;
  }
  return t;
}

inline double teeth(const RgbImage& pixels, const BinaryImage& ellipse) {
  std::vector<LabLuv> samples;
  for (std::size_t i = 0; i < pixels.size(); ++i)
    if (ellipse.pixels()[i]) samples.push_back(lab_luv(pixels.pixels()[i]));
  return static_cast<double>(teeth_count(samples));
}

inline double teeth(const MouthRoi& mouth) { return teeth(mouth.pixels, mouth.ellipse); }

/// Raw features of `curr`; M and Q are taken against `prev`.
inline FrameFeatures frame_features(const MouthRoi& curr, const MouthRoi& prev) {
  const HaarLevel bc = signature_bands(curr);
  const HaarLevel bp = signature_bands(prev);
  FrameFeatures f;
  std::tie(f.h, f.w) = geom_hw(curr);
  f.m = mutual_feature(bc, bp);
  f.q = quality_feature(bc, bp);
  f.r = wavelet_ratio(bc);
  f.er = edge_ratio(curr);
  f.rc = red_colour(curr);
  f.t = teeth(curr);
  return f;
}

/// Fixed normalisers: H and W by the face box, M by 8 bits, Q to (Q+1)/2,
/// R and ER through x/(1+x), RC by 255, T by the ellipse area.
inline FeatureRow normalize(const FrameFeatures& f, const MouthRoi& mouth) {
  auto unit = [](double v) { return std::clamp(v, 0.0, 1.0); };
  const double face_h = std::max(1, mouth.face.height);
  const double face_w = std::max(1, mouth.face.width);
  const double area = std::max<double>(1.0, static_cast<double>(mouth.ellipse_area()));
  return {unit(f.h / face_h),         unit(f.w / face_w),         unit(f.m / 8.0),
          unit((f.q + 1.0) / 2.0),    unit(f.r / (1.0 + f.r)),    unit(f.er / (1.0 + f.er)),
          unit(f.rc / 255.0),         unit(f.t / area)};
}

inline FeatureMatrix build_signature(std::span<const MouthRoi> frames) {
  if (frames.size() < 2) throw Error("build_signature: a word needs at least two frames");
  FeatureMatrix fm;
  fm.rows.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const MouthRoi& prev = frames[i == 0 ? 0 : i - 1];
    fm.rows.push_back(normalize(frame_features(frames[i], prev), frames[i]));
  }
  return fm;
}

}  // namespace vwords
