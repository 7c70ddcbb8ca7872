#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "vwords/imaging/image.hpp"

namespace vwords {

struct BinRange {
  double lo = 0.0;
  double hi = 255.0;
};

inline int bin_of(double v, int bins, BinRange range) noexcept {
  const double t = (v - range.lo) / (range.hi - range.lo);
  const int b = static_cast<int>(std::floor(t * bins));
  return std::clamp(b, 0, bins - 1);
}

struct Histograms {
  int bins = 0;
  std::vector<double> pmf_x;
  std::vector<double> pmf_y;
  std::vector<double> joint;  // row-major, joint[bx * bins + by]

  double p_joint(int bx, int by) const {
    return joint[static_cast<std::size_t>(bx * bins + by)];
  }
};

/// Normalised marginal and joint histograms of two equally sized samples.
inline Histograms histograms(std::span<const double> x, std::span<const double> y, int bins,
                             BinRange range = {}) {
  if (x.size() != y.size()) throw Error("histograms: sample sizes differ");
  if (x.empty()) throw Error("histograms: empty sample");
  if (bins < 1) throw Error("histograms: bin count must be positive");
  Histograms h;
  h.bins = bins;
  h.pmf_x.assign(static_cast<std::size_t>(bins), 0.0);
  h.pmf_y.assign(static_cast<std::size_t>(bins), 0.0);
  h.joint.assign(static_cast<std::size_t>(bins * bins), 0.0);
  const double w = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int bx = bin_of(x[i], bins, range);
    const int by = bin_of(y[i], bins, range);
    h.pmf_x[static_cast<std::size_t>(bx)] += w;
    h.pmf_y[static_cast<std::size_t>(by)] += w;
    h.joint[static_cast<std::size_t>(bx * bins + by)] += w;
  }
  return h;
}

inline Histograms histograms(const GrayImage& x, const GrayImage& y, int bins, BinRange range = {}) {
  if (x.width() != y.width() || x.height() != y.height())
    throw Error("histograms: image dimensions differ");
  return histograms(x.pixels(), y.pixels(), bins, range);
}

/// Entropy in bits of a probability mass function.
inline double entropy_bits(std::span<const double> pmf) {
  double h = 0.0;
  for (double p : pmf)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

/// Mutual information in bits from a joint histogram.
inline double mutual_information(const Histograms& h) {
  double m = 0.0;
  for (int a = 0; a < h.bins; ++a) {
    for (int b = 0; b < h.bins; ++b) {
      const double p = h.p_joint(a, b);
      if (p > 0.0)
        m += p * std::log2(p / (h.pmf_x[static_cast<std::size_t>(a)] *
                                h.pmf_y[static_cast<std::size_t>(b)]));
    }
  }
  return std::max(0.0, m);
}

}  // namespace vwords
