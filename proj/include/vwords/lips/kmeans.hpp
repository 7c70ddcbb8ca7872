#pragma once

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "vwords/error.hpp"

namespace vwords {

/// Row-major point set: `count` points of `dim` coordinates each.
struct PointSet {
  int dim = 1;
  std::vector<double> coords;

  std::size_t count() const { return coords.size() / static_cast<std::size_t>(dim); }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords).subspan(i * static_cast<std::size_t>(dim),
                                                   static_cast<std::size_t>(dim));
  }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct KMeans2Result {
  std::vector<std::uint8_t> labels;          // 0 or 1 per point
  std::array<std::vector<double>, 2> centers;
  int iterations = 0;
  bool empty_cluster = false;
  std::vector<double> objective;  // sum of squared distances after each assignment
};

/// Two-cluster Lloyd iteration. Centre 0 starts at the point with the smallest
/// first coordinate, centre 1 at the largest; ties go to cluster 0.
inline KMeans2Result kmeans2(const PointSet& points, int max_iters = 50) {
  const std::size_t n = points.count();
  if (n < 2) throw Error("kmeans2 needs at least two points");
  const auto dim = static_cast<std::size_t>(points.dim);

  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (points.point(i)[0] < points.point(lo)[0]) lo = i;
    if (points.point(i)[0] > points.point(hi)[0]) hi = i;
  }
  KMeans2Result r;
  r.centers[0].assign(points.point(lo).begin(), points.point(lo).end());
  r.centers[1].assign(points.point(hi).begin(), points.point(hi).end());
  r.labels.assign(n, 2);  // 2 = unassigned

  for (int it = 0; it < max_iters; ++it) {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = squared_distance(points.point(i), r.centers[0]);
      const double d1 = squared_distance(points.point(i), r.centers[1]);
      const std::uint8_t label = d1 < d0 ? 1 : 0;
      objective += label ? d1 : d0;
      if (label != r.labels[i]) {
        r.labels[i] = label;
        changed = true;
      }
    }
    r.objective.push_back(objective);
    r.iterations = it + 1;
    if (!changed) break;

    std::array<std::vector<double>, 2> sums{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
    std::array<std::size_t, 2> counts{};
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sums[r.labels[i]];
      const auto p = points.point(i);
      for (std::size_t d = 0; d < dim; ++d) s[d] += p[d];
      ++counts[r.labels[i]];
    }
    for (int c = 0; c < 2; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) continue;  // empty cluster keeps its centre
      for (std::size_t d = 0; d < dim; ++d)
        r.centers[static_cast<std::size_t>(c)][d] = sums[static_cast<std::size_t>(c)][d] /
                                                    static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
  }
  std::size_t ones = 0;
  for (auto l : r.labels) ones += l;
  r.empty_cluster = ones == 0 || ones == n;
  return r;
}

}  // namespace vwords
