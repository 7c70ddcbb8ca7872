#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "vwords/error.hpp"
#include "vwords/features/features.hpp"

namespace vwords {

/// Dynamic time warping with absolute-difference cost and unit steps
/// (left, up, diagonal). Works on any pair of random-access ranges of numbers.
template <class A, class B>
double dtw(const A& a, const B& b) {
  const std::size_t n = std::size(a), m = std::size(b);
  if (n == 0 || m == 0) throw Error("dtw: empty sequence");
  std::vector<double> prev(m), curr(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double cost = std::abs(static_cast<double>(a[i]) - static_cast<double>(b[j]));
      double best;
      if (i == 0 && j == 0)
        best = 0.0;
      else if (i == 0)
        best = curr[j - 1];
      else if (j == 0)
        best = prev[j];
      else
        best = std::min({prev[j], curr[j - 1], prev[j - 1]});
      curr[j] = cost + best;
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

/// Piecewise-linear resampling to `target_len` points, endpoints kept.
inline std::vector<double> resample(std::span<const double> s, std::size_t target_len) {
  if (s.empty()) throw Error("resample: empty sequence");
  if (target_len == 0) throw Error("resample: target length must be positive");
  std::vector<double> out(target_len);
  if (s.size() == 1 || target_len == 1) {
    std::fill(out.begin(), out.end(), s.front());
    return out;
  }
  const double scale = static_cast<double>(s.size() - 1) / static_cast<double>(target_len - 1);
  for (std::size_t i = 0; i < target_len; ++i) {
    const double pos = static_cast<double>(i) * scale;
    const auto lo = std::min(static_cast<std::size_t>(pos), s.size() - 2);
    const double t = pos - static_cast<double>(lo);
    out[i] = s[lo] + t * (s[lo + 1] - s[lo]);
  }
  out.back() = s.back();
  return out;
}

/// Euclidean distance after stretching the shorter sequence to the longer.
inline double euclid_interp(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error("euclid_interp: empty sequence");
  std::vector<double> ra(a.begin(), a.end()), rb(b.begin(), b.end());
  if (ra.size() < rb.size()) ra = resample(a, rb.size());
  else if (rb.size() < ra.size()) rb = resample(b, ra.size());
  double s = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) s += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  return std::sqrt(s);
}

enum class DistanceMode { dtw, euclid_interp };

using FeatureDistances = std::array<double, kFeatureCount>;

inline FeatureDistances feature_distances(const FeatureMatrix& a, const FeatureMatrix& b, DistanceMode mode) {
  if (a.rows.empty() || b.rows.empty()) throw Error("feature_distances: empty signature");
  FeatureDistances d{};
  for (int k = 0; k < kFeatureCount; ++k) {
    const std::vector<double> ca = a.column(k), cb = b.column(k);
    d[static_cast<std::size_t>(k)] = mode == DistanceMode::dtw ? dtw(ca, cb) : euclid_interp(ca, cb);
  }
  return d;
}

/// Eight non-negative feature weights summing to one.
class FeatureWeights {
 public:
  FeatureWeights() { w_.fill(1.0 / kFeatureCount); }
  explicit FeatureWeights(const std::array<double, kFeatureCount>& w) : w_(w) {
    double sum = 0.0;
    for (double x : w_) {
      if (!(x >= 0.0)) throw Error("feature weights must be non-negative");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("feature weights must sum to 1");
  }

  /// Rescales any non-negative, not-all-zero vector onto the simplex.
  static FeatureWeights normalized(std::array<double, kFeatureCount> w) {
    double sum = 0.0;
    for (double x : w) {
      if (!(x >= 0.0)) throw Error("feature weights must be non-negative");
      sum += x;
    }
    if (sum <= 0.0) throw Error("feature weights are all zero");
    for (double& x : w) x /= sum;
    return FeatureWeights(w);
  }

  // tabulated percentages (SD: 101 in total, SI: 99) brought onto the simplex
  static FeatureWeights speaker_dependent() { return normalized({15, 12, 9, 10, 6, 15, 16, 18}); }
  static FeatureWeights speaker_independent() { return normalized({15, 14, 9, 10, 7, 9, 12, 23}); }

  double operator[](std::size_t i) const { return w_[i]; }
  const std::array<double, kFeatureCount>& values() const { return w_; }

 private:
  std::array<double, kFeatureCount> w_;
};

/// Weighted average as tabulated: sum of w_i D_i over 8.
inline double fuse(const FeatureDistances& d, const FeatureWeights& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += w[i] * d[i];
  return s / 8.0;
}

/// Relative weight of each feature from its stand-alone recognition rate.
inline FeatureWeights learn_weights(const std::array<double, kFeatureCount>& rates) {
  for (double r : rates)
    if (!(r >= 0.0)) throw Error("learn_weights: recognition rates must be non-negative");
  if (std::all_of(rates.begin(), rates.end(), [](double r) { return r == 0.0; }))
    throw Error("learn_weights: all recognition rates are zero");
  return FeatureWeights::normalized(rates);
}

using TrainingSet = std::vector<FeatureMatrix>;

struct MatchScore {
  FeatureDistances per_feature{};
  double fused = 0.0;
  std::string label;
  std::size_t index = 0;          // position in the training set
  std::size_t neighbour_rank = 0;  // 0 = nearest
};

/// Scores against every training entry, nearest first (training order on ties).
inline std::vector<MatchScore> rank_matches(const FeatureMatrix& test, const TrainingSet& train,
                                            const FeatureWeights& w, DistanceMode mode) {
  std::vector<MatchScore> scores;
  scores.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    MatchScore s;
    s.per_feature = feature_distances(test, train[i], mode);
    s.fused = fuse(s.per_feature, w);
    s.label = train[i].label;
    s.index = i;
    scores.push_back(std::move(s));
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const MatchScore& a, const MatchScore& b) { return a.fused < b.fused; });
  for (std::size_t r = 0; r < scores.size(); ++r) scores[r].neighbour_rank = r;
  return scores;
}

namespace detail {

struct ClassTally {
  std::string label;
  std::size_t count = 0;
  double nearest = 0.0;  // first appearance is the nearest, the list being sorted
};

inline std::vector<ClassTally> tally(std::span<const MatchScore> ranked, std::size_t k) {
  if (ranked.empty()) throw Error("classification needs a non-empty training set");
  if (k == 0) throw Error("k must be at least 1");
  k = std::min(k, ranked.size());
  std::vector<ClassTally> t;  // order of first appearance
  for (std::size_t i = 0; i < k; ++i) {
    auto it = std::find_if(t.begin(), t.end(), [&](const ClassTally& c) { return c.label == ranked[i].label; });
    if (it == t.end()) t.push_back({ranked[i].label, 1, ranked[i].fused});
    else ++it->count;
  }
  return t;
}

}  // namespace detail

/// Majority label among the k nearest of a ranked list. Ties go to the class
/// whose nearest member ranks first.
inline std::string knn_decide(std::span<const MatchScore> ranked, std::size_t k) {
  const auto t = detail::tally(ranked, k);
  const detail::ClassTally* best = &t.front();
  for (const auto& c : t)
    if (c.count > best->count) best = &c;
  return best->label;
}

/// Weighted KNN: per class, nearest distance divided by its count among the k
/// nearest; the smallest wins, ties to the class ranked first.
inline std::string wknn_decide(std::span<const MatchScore> ranked, std::size_t k) {
  const auto t = detail::tally(ranked, k);
  const detail::ClassTally* best = &t.front();
  double best_w = best->nearest / static_cast<double>(best->count);
  for (const auto& c : t) {
    const double w = c.nearest / static_cast<double>(c.count);
    if (w < best_w) {
      best = &c;
      best_w = w;
    }
  }
  return best->label;
}

inline std::string knn(const FeatureMatrix& test, const TrainingSet& train, std::size_t k,
                       const FeatureWeights& w, DistanceMode mode) {
  return knn_decide(rank_matches(test, train, w, mode), k);
}

inline std::string wknn(const FeatureMatrix& test, const TrainingSet& train, std::size_t k,
                        const FeatureWeights& w, DistanceMode mode) {
  return wknn_decide(rank_matches(test, train, w, mode), k);
}

}  // namespace vwords
