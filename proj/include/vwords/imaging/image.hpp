#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vwords/error.hpp"

namespace vwords {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Dense row-major 2-D grid. Dimensions are always positive.
template <class T>
class Image {
public:
  using value_type = T;

  Image() = default;

  Image(int width, int height, const T& fill = T{})
      : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw Error("image dimensions must be positive, got " + std::to_string(width) + "x" +
                  std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }

  /// Replicate-padded access: coordinates are clamped into the grid.
  const T& clamped(int x, int y) const {
    return data_[index(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1))];
  }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using RgbImage = Image<Rgb>;
/// Real-valued intensities; filter outputs may leave 0..255.
using GrayImage = Image<double>;
/// Values in {0,1}. For edge maps 0 is feature/edge and 1 is tissue.
using BinaryImage = Image<std::uint8_t>;

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int right() const noexcept { return x + width; }
  int bottom() const noexcept { return y + height; }
  bool empty() const noexcept { return width <= 0 || height <= 0; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect intersect(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

template <class T>
Image<T> crop(const Image<T>& img, const Rect& r) {
  const Rect clipped = intersect(r, {0, 0, img.width(), img.height()});
  if (clipped.empty()) throw Error("crop rectangle lies outside the image");
  Image<T> out(clipped.width, clipped.height);
  for (int y = 0; y < clipped.height; ++y)
    for (int x = 0; x < clipped.width; ++x) out.at(x, y) = img.at(clipped.x + x, clipped.y + y);
  return out;
}

template <class T>
Image<T> transpose(const Image<T>& img) {
  Image<T> out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out.at(y, x) = img.at(x, y);
  return out;
}

template <class T, class F>
auto map_pixels(const Image<T>& img, F&& f) {
  using U = std::decay_t<decltype(f(img.at(0, 0)))>;
  Image<U> out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = f(src[i]);
  return out;
}

inline double mean(const GrayImage& img) {
  double sum = 0.0;
  for (double v : img.pixels()) sum += v;
  return sum / static_cast<double>(img.size());
}

/// ITU-601 luma.
inline double luma(const Rgb& p) noexcept { return 0.299 * p.r + 0.587 * p.g + 0.114 * p.b; }

inline GrayImage to_gray(const RgbImage& img) {
  return map_pixels(img, [](const Rgb& p) { return luma(p); });
}

inline GrayImage from_binary(const BinaryImage& img, double one = 255.0) {
  return map_pixels(img, [one](std::uint8_t v) { return v ? one : 0.0; });
}

inline std::size_t count_ones(const BinaryImage& img) {
  return static_cast<std::size_t>(std::count_if(img.pixels().begin(), img.pixels().end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

}  // namespace vwords
