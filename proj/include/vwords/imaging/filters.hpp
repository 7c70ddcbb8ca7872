#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "vwords/imaging/image.hpp"

namespace vwords {

enum class SobelDirection {
  horizontal,  // responds to horizontal edges (intensity change along y)
  vertical,    // responds to vertical edges (intensity change along x)
};

/// Correlates `img` with an odd square kernel using replicate padding.
template <std::size_t N>
GrayImage correlate(const GrayImage& img, const std::array<std::array<double, N>, N>& kernel) {
  static_assert(N % 2 == 1, "kernel must have odd size");
  constexpr int r = static_cast<int>(N / 2);
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) acc += kernel[j + r][i + r] * img.clamped(x + i, y + j);
      out.at(x, y) = acc;
    }
  }
  return out;
}

inline GrayImage sobel(const GrayImage& img, SobelDirection direction) {
  if (img.width() < 3 || img.height() < 3) throw Error("sobel requires an image of at least 3x3");
  static constexpr std::array<std::array<double, 3>, 3> kHorizontal{
      {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}}};
  static constexpr std::array<std::array<double, 3>, 3> kVertical{
      {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}};
  return correlate(img, direction == SobelDirection::horizontal ? kHorizontal : kVertical);
}

/// Mean over the (2r+1)x(2r+1) neighbourhood, replicate padding.
inline GrayImage local_mean(const GrayImage& img, int radius = 2) {
  GrayImage out(img.width(), img.height());
  const double n = static_cast<double>((2 * radius + 1) * (2 * radius + 1));
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int j = -radius; j <= radius; ++j)
        for (int i = -radius; i <= radius; ++i) acc += img.clamped(x + i, y + j);
      out.at(x, y) = acc / n;
    }
  }
  return out;
}

/// Shannon entropy (bits) of the integer-rounded intensity histogram of each
/// 5x5 neighbourhood. Pixels with entropy >= theta become 0 (edge), others 1.
inline BinaryImage entropy_edge(const GrayImage& img, double theta) {
  if (img.width() < 5 || img.height() < 5)
    throw Error("entropy_edge requires an image of at least 5x5");
  BinaryImage out(img.width(), img.height());
  std::array<int, 25> values{};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      int k = 0;
      for (int j = -2; j <= 2; ++j)
        for (int i = -2; i <= 2; ++i)
          values[k++] = static_cast<int>(std::lround(std::clamp(img.clamped(x + i, y + j), 0.0, 255.0)));
      std::sort(values.begin(), values.end());
      double h = 0.0;
      for (std::size_t a = 0; a < values.size();) {
        std::size_t b = a;
        while (b < values.size() && values[b] == values[a]) ++b;
        const double p = static_cast<double>(b - a) / 25.0;
        h -= p * std::log2(p);
        a = b;
      }
      out.at(x, y) = h >= theta ? 0 : 1;
    }
  }
  return out;
}

struct DualFilterResult {
  GrayImage response;  // clamped to [0,255]
  BinaryImage binary;  // 1 = tissue (response saturated at 255), 0 = edge candidate
};

inline constexpr std::array<std::array<double, 5>, 5> kCoarseFaceFilter{{
    {-1, -1, 0, -1, -1},
    {-2, -2, 0, -2, -2},
    {0, 0, 0, 0, 0},
    {2, 2, 0, 2, 2},
    {2, 2, 0, 2, 2},
}};

inline constexpr std::array<std::array<double, 5>, 5> kFineFaceFilter{{
    {-1, -1, 0, -1, -1},
    {-2, -2, 0, -2, -2},
    {0, 0, 0, 0, 0},
    {2, 2, 0, 2, 2},
    {1.5, 1.7, 0, 1.7, 1.5},
}};

/// Adaptive two-filter edge detector. The coarse filter is used wherever the
/// local 5x5 mean is <= `global_mean` (the image mean unless overridden).
inline DualFilterResult dual_filter_edge(const GrayImage& img,
                                         std::optional<double> global_mean = std::nullopt) {
  if (img.width() < 5 || img.height() < 5)
    throw Error("dual_filter_edge requires an image of at least 5x5");
  const double global = global_mean.value_or(mean(img));
  const GrayImage local = local_mean(img, 2);
  DualFilterResult out{GrayImage(img.width(), img.height()), BinaryImage(img.width(), img.height())};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const auto& k = local.at(x, y) <= global ? kCoarseFaceFilter : kFineFaceFilter;
      double acc = 0.0;
      for (int j = -2; j <= 2; ++j)
        for (int i = -2; i <= 2; ++i) acc += k[j + 2][i + 2] * img.clamped(x + i, y + j);
      const double clamped = std::clamp(acc, 0.0, 255.0);
      out.response.at(x, y) = clamped;
      out.binary.at(x, y) = clamped >= 255.0 ? 1 : 0;
    }
  }
  return out;
}

/// 0 where the coefficient is <= its 5x5 local mean, 1 otherwise.
inline BinaryImage binarize_local_avg(const GrayImage& band) {
  if (band.width() < 5 || band.height() < 5)
    throw Error("binarize_local_avg requires a grid of at least 5x5");
  const GrayImage local = local_mean(band, 2);
  BinaryImage out(band.width(), band.height());
  for (int y = 0; y < band.height(); ++y)
    for (int x = 0; x < band.width(); ++x) out.at(x, y) = band.at(x, y) <= local.at(x, y) ? 0 : 1;
  return out;
}

/// Field blend: each scanline is averaged with the next one (the last with the
/// previous), so lines from the odd and even fields are mixed.
inline RgbImage deinterlace_blend(const RgbImage& frame) {
  if (frame.height() < 2) throw Error("deinterlace_blend requires at least two scanlines");
  RgbImage out(frame.width(), frame.height());
  auto avg = [](std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>((static_cast<int>(a) + b + 1) / 2);
  };
  for (int y = 0; y < frame.height(); ++y) {
    const int other = y + 1 < frame.height() ? y + 1 : y - 1;
    for (int x = 0; x < frame.width(); ++x) {
      const Rgb& a = frame.at(x, y);
      const Rgb& b = frame.at(x, other);
      out.at(x, y) = {avg(a.r, b.r), avg(a.g, b.g), avg(a.b, b.b)};
    }
  }
  return out;
}

}  // namespace vwords
