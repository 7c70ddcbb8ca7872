#pragma once

#include <vector>

#include "vwords/imaging/image.hpp"

namespace vwords {

/// One level of the averaging Haar transform.
///
/// For each 2x2 block (a b / c d):
///   LL = (a+b+c+d)/4          approximation
///   HL = ((a+c)-(b+d))/4      vertical features (left minus right)
///   LH = ((a+b)-(c+d))/4      horizontal features (top minus bottom)
///   HH = ((a+d)-(b+c))/4      diagonal features
/// Odd dimensions are handled by replicating the last row/column, so every
/// sub-band is ceil(parent/2) on each side.
struct HaarLevel {
  GrayImage ll;
  GrayImage hl;
  GrayImage lh;
  GrayImage hh;
};

inline HaarLevel haar_step(const GrayImage& img) {
  const int w = (img.width() + 1) / 2;
  const int h = (img.height() + 1) / 2;
  HaarLevel out{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double a = img.clamped(2 * x, 2 * y);
      const double b = img.clamped(2 * x + 1, 2 * y);
      const double c = img.clamped(2 * x, 2 * y + 1);
      const double d = img.clamped(2 * x + 1, 2 * y + 1);
      out.ll.at(x, y) = (a + b + c + d) / 4.0;
      out.hl.at(x, y) = ((a + c) - (b + d)) / 4.0;
      out.lh.at(x, y) = ((a + b) - (c + d)) / 4.0;
      out.hh.at(x, y) = ((a + d) - (b + c)) / 4.0;
    }
  }
  return out;
}

/// Pyramid decomposition; levels[0] is level 1, levels.back() is the coarsest.
struct WaveletPyramid {
  std::vector<HaarLevel> levels;

  const GrayImage& approximation() const { return levels.back().ll; }
};

inline WaveletPyramid haar_pyramid(const GrayImage& img, int levels) {
  if (levels < 1) throw Error("haar_pyramid requires at least one level");
  const int min_side = 1 << levels;
  if (img.width() < min_side || img.height() < min_side) {
    throw Error("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                " is too small for " + std::to_string(levels) + " Haar levels");
  }
  WaveletPyramid out;
  out.levels.reserve(static_cast<std::size_t>(levels));
  out.levels.push_back(haar_step(img));
  for (int k = 1; k < levels; ++k) out.levels.push_back(haar_step(out.levels.back().ll));
  return out;
}

}  // namespace vwords
