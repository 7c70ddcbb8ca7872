#pragma once

#include <random>
#include <vector>

#include "vwords/vwords.hpp"

namespace vt {

using Rng = std::mt19937_64;

inline vwords::GrayImage random_gray(int w, int h, Rng& rng, int levels = 256) {
  std::uniform_int_distribution<int> d(0, levels - 1);
  vwords::GrayImage g(w, h);
  for (double& v : g.pixels()) v = d(rng);
  return g;
}

inline vwords::RgbImage solid(int w, int h, vwords::Rgb c) { return vwords::RgbImage(w, h, c); }

inline double iou(const vwords::BinaryImage& a, const vwords::BinaryImage& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a.pixels()[i] && b.pixels()[i];
    uni += a.pixels()[i] || b.pixels()[i];
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
}

/// Signature whose every cell is `v`.
inline vwords::FeatureMatrix constant_signature(double v, std::size_t frames, const std::string& label,
                                                const std::string& speaker = "s1") {
  vwords::FeatureMatrix m;
  vwords::FeatureRow row;
  row.fill(v);
  m.rows.assign(frames, row);
  m.label = label;
  m.speaker = speaker;
  return m;
}

inline vwords::FeatureMatrix random_signature(Rng& rng, std::size_t min_frames = 3, std::size_t max_frames = 8) {
  std::uniform_int_distribution<std::size_t> len(min_frames, max_frames);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  vwords::FeatureMatrix m;
  m.rows.resize(len(rng));
  for (auto& r : m.rows)
    for (double& v : r) v = u(rng);
  return m;
}

}  // namespace vt
