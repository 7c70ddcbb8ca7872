#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "vwords/imaging/image.hpp"

namespace vwords {

/// Area-weighted box downsampling of a colour image to an arbitrary size.
inline RgbImage box_resize(const RgbImage& img, int width, int height) {
  RgbImage out(width, height);
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int oy = 0; oy < height; ++oy) {
    const double y0 = oy * sy, y1 = (oy + 1) * sy;
    for (int ox = 0; ox < width; ++ox) {
      const double x0 = ox * sx, x1 = (ox + 1) * sx;
      std::array<double, 3> acc{};
      double area = 0.0;
      for (int y = static_cast<int>(std::floor(y0)); y < std::min(img.height(), static_cast<int>(std::ceil(y1))); ++y) {
        const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
        if (wy <= 0.0) continue;
        for (int x = static_cast<int>(std::floor(x0)); x < std::min(img.width(), static_cast<int>(std::ceil(x1))); ++x) {
          const double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
          if (wx <= 0.0) continue;
          const double w = wx * wy;
          const Rgb& p = img.at(x, y);
          acc[0] += w * p.r;
          acc[1] += w * p.g;
          acc[2] += w * p.b;
          area += w;
        }
      }
      auto channel = [&](double v) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(v / area), 0L, 255L));
      };
      out.at(ox, oy) = {channel(acc[0]), channel(acc[1]), channel(acc[2])};
    }
  }
  return out;
}

/// Bilinear resampling with pixel-centre alignment.
inline GrayImage bilinear_resize(const GrayImage& img, int width, int height) {
  GrayImage out(width, height);
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  for (int oy = 0; oy < height; ++oy) {
    const double fy = std::clamp((oy + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double ty = fy - y0;
    for (int ox = 0; ox < width; ++ox) {
      const double fx = std::clamp((ox + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double tx = fx - x0;
      const double top = img.at(x0, y0) * (1.0 - tx) + img.at(x1, y0) * tx;
      const double bottom = img.at(x0, y1) * (1.0 - tx) + img.at(x1, y1) * tx;
      out.at(ox, oy) = top * (1.0 - ty) + bottom * ty;
    }
  }
  return out;
}

}  // namespace vwords
