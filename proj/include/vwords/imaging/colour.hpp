#pragma once

#include <algorithm>
#include <cmath>

#include "vwords/imaging/image.hpp"

namespace vwords {

struct YCbCr {
  double y = 0.0;
  double cb = 0.0;
  double cr = 0.0;
};

/// Cb and Cr are left unclamped (pure red gives Cr = 255.5).
inline YCbCr ycbcr(const Rgb& p) noexcept {
  const double r = p.r, g = p.g, b = p.b;
  return {0.299 * r + 0.587 * g + 0.114 * b,
          128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b,
          128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b};
}

inline Image<YCbCr> rgb_to_ycbcr(const RgbImage& img) { return map_pixels(img, ycbcr); }

/// Standard HSV hue in degrees [0, 360). Achromatic pixels have hue 0.
inline double hue_degrees(const Rgb& p) noexcept {
  const int r = p.r, g = p.g, b = p.b;
  const int mx = std::max({r, g, b});
  const int mn = std::min({r, g, b});
  const double delta = mx - mn;
  if (delta == 0.0) return 0.0;
  double h;
  if (mx == r) {
    h = 60.0 * std::fmod((g - b) / delta, 6.0);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
  return h;
}

/// Folds hue so that reds on both sides of 0 degrees meet: [0,360) -> [0,180].
inline double warp_hue(double h) noexcept { return h <= 180.0 ? h : 360.0 - h; }

inline double warped_hue(const Rgb& p) noexcept { return warp_hue(hue_degrees(p)); }

inline GrayImage warped_hue(const RgbImage& img) {
  return map_pixels(img, [](const Rgb& p) { return warped_hue(p); });
}

struct Chromaticity {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

/// Black maps to the simplex centre (1/3, 1/3, 1/3).
inline Chromaticity trichromatic(const Rgb& p) noexcept {
  const double sum = static_cast<double>(p.r) + p.g + p.b;
  if (sum == 0.0) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return {p.r / sum, p.g / sum, p.b / sum};
}

inline Image<Chromaticity> trichromatic(const RgbImage& img) {
  return map_pixels(img, [](const Rgb& p) { return trichromatic(p); });
}

inline double pseudo_hue(const Rgb& p) noexcept {
  const double s = static_cast<double>(p.r) + p.g;
  return s == 0.0 ? 0.0 : p.r / s;
}

inline GrayImage pseudo_hue(const RgbImage& img) {
  return map_pixels(img, [](const Rgb& p) { return pseudo_hue(p); });
}

struct LabLuv {
  double l = 0.0;  // shared by both spaces
  double a = 0.0;
  double b = 0.0;
  double u = 0.0;
  double v = 0.0;
};

namespace detail {

inline double srgb_to_linear(double c) noexcept {
  c /= 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double lab_f(double t) noexcept {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

// sRGB primaries, D65. The reference white is the image of (1,1,1) so that
// every grey maps exactly onto the achromatic axis.
inline constexpr double kM[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                                    {0.2126729, 0.7151522, 0.0721750},
                                    {0.0193339, 0.1191920, 0.9503041}};
inline constexpr double kXn = kM[0][0] + kM[0][1] + kM[0][2];
inline constexpr double kYn = kM[1][0] + kM[1][1] + kM[1][2];
inline constexpr double kZn = kM[2][0] + kM[2][1] + kM[2][2];

}  // namespace detail

/// CIE 1976 L*a*b* and L*u*v* of an sRGB pixel under D65.
inline LabLuv lab_luv(const Rgb& p) noexcept {
  using namespace detail;
  const double r = srgb_to_linear(p.r), g = srgb_to_linear(p.g), b = srgb_to_linear(p.b);
  const double x = kM[0][0] * r + kM[0][1] * g + kM[0][2] * b;
  const double y = kM[1][0] * r + kM[1][1] * g + kM[1][2] * b;
  const double z = kM[2][0] * r + kM[2][1] * g + kM[2][2] * b;

  const double fx = lab_f(x / kXn), fy = lab_f(y / kYn), fz = lab_f(z / kZn);
  LabLuv out;
  out.l = 116.0 * fy - 16.0;
  out.a = 500.0 * (fx - fy);
  out.b = 200.0 * (fy - fz);

  const double dn = kXn + 15.0 * kYn + 3.0 * kZn;
  const double un = 4.0 * kXn / dn, vn = 9.0 * kYn / dn;
  const double d = x + 15.0 * y + 3.0 * z;
  if (d > 0.0) {
    out.u = 13.0 * out.l * (4.0 * x / d - un);
    out.v = 13.0 * out.l * (9.0 * y / d - vn);
  }
  return out;
}

inline Image<LabLuv> rgb_to_lab_luv(const RgbImage& img) { return map_pixels(img, lab_luv); }

}  // namespace vwords
