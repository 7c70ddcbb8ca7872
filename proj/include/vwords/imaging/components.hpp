#pragma once

#include <algorithm>
#include <vector>

#include "vwords/imaging/image.hpp"

namespace vwords {

struct Component {
  int label = 0;
  std::size_t area = 0;
  Rect bounds;
};

enum class Connectivity { four, eight };

struct Labelling {
  Image<int> labels;  // 0 = background, 1..n = component id
  std::vector<Component> components;  // index i holds label i+1
};

/// Connected components of the 1-pixels, labelled in raster order of first pixel.
inline Labelling label_components(const BinaryImage& mask, Connectivity conn = Connectivity::eight) {
  Labelling out{Image<int>(mask.width(), mask.height(), 0), {}};
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y) || out.labels.at(x, y)) continue;
      const int label = static_cast<int>(out.components.size()) + 1;
      Component comp{label, 0, {x, y, 1, 1}};
      int x0 = x, y0 = y, x1 = x, y1 = y;
      stack.assign(1, {x, y});
      out.labels.at(x, y) = label;
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        ++comp.area;
        x0 = std::min(x0, cx);
        y0 = std::min(y0, cy);
        x1 = std::max(x1, cx);
        y1 = std::max(y1, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (conn == Connectivity::four && dx != 0 && dy != 0) continue;
            const int nx = cx + dx, ny = cy + dy;
            if (!mask.contains(nx, ny) || !mask.at(nx, ny) || out.labels.at(nx, ny)) continue;
            out.labels.at(nx, ny) = label;
            stack.emplace_back(nx, ny);
          }
        }
      }
      comp.bounds = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
      out.components.push_back(comp);
    }
  }
  return out;
}

/// Gap in pixels between two rectangles (0 when they touch or overlap).
inline int rect_gap(const Rect& a, const Rect& b) {
  const int gx = std::max({0, b.x - a.right(), a.x - b.right()});
  const int gy = std::max({0, b.y - a.bottom(), a.y - b.bottom()});
  return std::max(gx, gy);
}

inline BinaryImage select_labels(const Labelling& l, std::initializer_list<int> keep) {
  BinaryImage out(l.labels.width(), l.labels.height(), 0);
  auto src = l.labels.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = std::find(keep.begin(), keep.end(), src[i]) != keep.end() && src[i] != 0 ? 1 : 0;
  return out;
}

}  // namespace vwords
