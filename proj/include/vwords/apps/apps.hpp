#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vwords/classify/classify.hpp"

namespace vwords {

/// Wknn over a gallery whose labels are replaced by speaker ids.
inline std::string identify_speaker(const FeatureMatrix& test, const TrainingSet& gallery, std::size_t k,
                                    const FeatureWeights& w, DistanceMode mode) {
  if (gallery.empty()) throw Error("identify_speaker: empty gallery");
  TrainingSet relabelled = gallery;
  for (FeatureMatrix& m : relabelled) m.label = m.speaker;
  return wknn(test, relabelled, k, w, mode);
}

struct PasswordProfile {
  std::string client;
  std::vector<FeatureMatrix> enrolled;
  double threshold = 0.0;
  int max_tries = 3;
  FeatureWeights weights = FeatureWeights::speaker_dependent();
  DistanceMode mode = DistanceMode::dtw;
};

enum class Verdict { pass, retry, block };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::retry: return "retry";
    case Verdict::block: return "block";
  }
  return "?";
}

/// Smallest fused distance to any of `signatures`.
inline double nearest_distance(const FeatureMatrix& test, const std::vector<FeatureMatrix>& signatures,
                               const FeatureWeights& w, DistanceMode mode, std::size_t* which = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    const double d = fuse(feature_distances(test, signatures[i], mode), w);
    if (d < best) {
      best = d;
      if (which) *which = i;
    }
  }
  return best;
}

inline void validate(const PasswordProfile& p) {
  if (p.enrolled.empty()) throw Error("password profile '" + p.client + "' has no enrolled signature");
  if (!(p.threshold > 0.0)) throw Error("password profile '" + p.client + "' needs a positive threshold");
  if (p.max_tries < 1) throw Error("password profile '" + p.client + "' needs max_tries >= 1");
}

/// `tries_so_far` counts the failed attempts before this one.
inline Verdict verify_password(const FeatureMatrix& attempt, const PasswordProfile& profile, int tries_so_far,
                               double* distance = nullptr) {
  validate(profile);
  const double d = nearest_distance(attempt, profile.enrolled, profile.weights, profile.mode);
  if (distance) *distance = d;
  if (d < profile.threshold) return Verdict::pass;
  return tries_so_far + 1 < profile.max_tries ? Verdict::retry : Verdict::block;
}

/// Frames of `a` followed by the frames of `b`; metadata comes from `a`, the
/// label joins both.
inline FeatureMatrix concat_signatures(const FeatureMatrix& a, const FeatureMatrix& b) {
  for (const FeatureMatrix* m : {&a, &b})
    if (m->rows.empty()) throw Error("concat_signatures: empty signature");
  FeatureMatrix out = a;
  out.label = a.label + "+" + b.label;
  out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
  return out;
}

inline std::vector<FeatureMatrix> bootstrap_pairs(const std::vector<FeatureMatrix>& word_a,
                                                  const std::vector<FeatureMatrix>& word_b) {
  std::vector<FeatureMatrix> out;
  out.reserve(word_a.size() * word_b.size());
  for (const FeatureMatrix& a : word_a)
    for (const FeatureMatrix& b : word_b) out.push_back(concat_signatures(a, b));
  return out;
}

struct WatchList {
  std::vector<FeatureMatrix> words;
  double threshold = 0.0;
  FeatureWeights weights = FeatureWeights::speaker_dependent();
  DistanceMode mode = DistanceMode::dtw;
};

struct SpotResult {
  bool alarm = false;
  std::string label;  // nearest security word
  double distance = 0.0;
};

inline SpotResult spot_security_word(const FeatureMatrix& test, const WatchList& list) {
  if (list.words.empty()) throw Error("spot_security_word: empty watch list");
  std::size_t nearest = 0;
  const double d = nearest_distance(test, list.words, list.weights, list.mode, &nearest);
  return {d < list.threshold, list.words[nearest].label, d};
}

}  // namespace vwords
