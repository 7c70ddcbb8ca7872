#pragma once

#include "vwords/imaging/image.hpp"

namespace vwords {

enum class MorphOp { erode, dilate, open, close };

namespace detail {

// 3x3 square structuring element, replicate padding at the borders.
inline BinaryImage morph_step(const BinaryImage& img, bool erode, std::uint8_t object) {
  BinaryImage out(img.width(), img.height());
  const std::uint8_t background = object ? 0 : 1;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      bool all = true, any = false;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) {
          const bool is_object = img.clamped(x + i, y + j) == object;
          all = all && is_object;
          any = any || is_object;
        }
      }
      out.at(x, y) = (erode ? all : any) ? object : background;
    }
  }
  return out;
}

}  // namespace detail

/// Binary morphology with a 3x3 square. `object` selects the polarity: 1 for
/// lip masks, 0 for edge maps where features are black.
inline BinaryImage morphology(const BinaryImage& img, MorphOp op, std::uint8_t object = 1) {
  switch (op) {
    case MorphOp::erode:
      return detail::morph_step(img, true, object);
    case MorphOp::dilate:
      return detail::morph_step(img, false, object);
    case MorphOp::open:
      return detail::morph_step(detail::morph_step(img, true, object), false, object);
    case MorphOp::close:
      return detail::morph_step(detail::morph_step(img, false, object), true, object);
  }
  return img;
}

}  // namespace vwords
