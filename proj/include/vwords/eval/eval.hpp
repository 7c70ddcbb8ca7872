#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vwords/classify/classify.hpp"

namespace vwords {

enum class ProtocolKind { sd_loo, si_loso, sd2_session };
enum class Decision { knn, wknn };

struct Protocol {
  ProtocolKind kind = ProtocolKind::sd_loo;
  std::vector<std::size_t> k_range{1, 2, 3, 4, 5};
  DistanceMode mode = DistanceMode::dtw;
  FeatureWeights weights = FeatureWeights::speaker_dependent();
  Decision decision = Decision::wknn;
  bool group_rule = false;  // assumes the test word's group is known to the decoder
};

using ConfusionMatrix = std::map<std::string, std::map<std::string, std::size_t>>;  // actual -> predicted

struct KResult {
  std::size_t k = 1;
  std::size_t correct = 0;
  std::size_t total = 0;
  double wrr = 0.0;  // percent
  std::map<std::string, double> subject_wrr;
  ConfusionMatrix confusion;
};

struct EvalReport {
  ProtocolKind kind = ProtocolKind::sd_loo;
  std::size_t folds = 0;
  bool oracle_groups = false;
  std::vector<KResult> per_k;

  const KResult& best() const {
    if (per_k.empty()) throw Error("empty evaluation report");
    return *std::max_element(per_k.begin(), per_k.end(),
                             [](const KResult& a, const KResult& b) { return a.wrr < b.wrr; });
  }
};

/// First label of the ranking that lies in `test_group`; rank 1 when none does.
inline std::string group_constrained(std::span<const std::string> ranking, const std::string& test_group,
                                     const std::map<std::string, std::string>& group_of) {
  if (ranking.empty()) throw Error("group_constrained: empty ranking");
  for (const std::string& label : ranking) {
    const auto it = group_of.find(label);
    if (it != group_of.end() && it->second == test_group) return label;
  }
  return ranking.front();
}

/// Candidate labels in order: the prediction, then every other label by its
/// nearest fused distance.
inline std::vector<std::string> label_ranking(std::span<const MatchScore> ranked, const std::string& predicted) {
  std::vector<std::string> out{predicted};
  for (const MatchScore& s : ranked)
    if (std::find(out.begin(), out.end(), s.label) == out.end()) out.push_back(s.label);
  return out;
}

namespace detail {

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

inline std::vector<std::string> subjects_of(const TrainingSet& data) {
  std::vector<std::string> out;
  for (const FeatureMatrix& m : data)
    if (std::find(out.begin(), out.end(), m.speaker) == out.end()) out.push_back(m.speaker);
  return out;
}

inline std::vector<Fold> make_folds(const TrainingSet& data, ProtocolKind kind) {
  const std::vector<std::string> subjects = subjects_of(data);
  std::vector<Fold> folds;
  switch (kind) {
    case ProtocolKind::sd_loo:
      for (const std::string& s : subjects) {
        std::map<std::string, std::size_t> per_word;
        for (const FeatureMatrix& m : data)
          if (m.speaker == s) ++per_word[m.label];
        for (const auto& [word, n] : per_word)
          if (n < 2)
            throw Error("sd protocol: subject '" + s + "' has only one sample of word '" + word + "'");
      }
      for (std::size_t i = 0; i < data.size(); ++i) {
        Fold f;
        f.test.push_back(i);
        for (std::size_t j = 0; j < data.size(); ++j)
          if (j != i && data[j].speaker == data[i].speaker) f.train.push_back(j);
        folds.push_back(std::move(f));
      }
      break;
    case ProtocolKind::si_loso:
      if (subjects.size() < 2)
        throw Error("si protocol: needs at least two subjects, found " + std::to_string(subjects.size()));
      for (const std::string& s : subjects) {
        Fold f;
        for (std::size_t j = 0; j < data.size(); ++j) (data[j].speaker == s ? f.test : f.train).push_back(j);
        folds.push_back(std::move(f));
      }
      break;
    case ProtocolKind::sd2_session:
      for (const std::string& s : subjects) {
        Fold f;
        for (std::size_t j = 0; j < data.size(); ++j) {
          if (data[j].speaker != s) continue;
          if (data[j].session == 2) f.train.push_back(j);
          else if (data[j].session == 1) f.test.push_back(j);
        }
        if (f.train.empty()) throw Error("sd2 protocol: subject '" + s + "' has no session-2 samples");
        if (f.test.empty()) throw Error("sd2 protocol: subject '" + s + "' has no session-1 samples");
        folds.push_back(std::move(f));
      }
      break;
  }
  return folds;
}

}  // namespace detail

/// Runs the fold structure of the protocol and reports word recognition rates
/// for every k in the range.
inline EvalReport run_protocol(const TrainingSet& data, const Protocol& p) {
  if (data.empty()) throw Error("evaluation needs data");
  if (p.k_range.empty()) throw Error("protocol k range is empty");
  const std::vector<detail::Fold> folds = detail::make_folds(data, p.kind);

  EvalReport report;
  report.kind = p.kind;
  report.folds = folds.size();
  report.oracle_groups = p.group_rule;
  for (std::size_t k : p.k_range) {
    KResult r;
    r.k = k;
    report.per_k.push_back(std::move(r));
  }
  std::vector<std::map<std::string, std::pair<std::size_t, std::size_t>>> subject_counts(p.k_range.size());

  for (const detail::Fold& fold : folds) {
    TrainingSet train;
    train.reserve(fold.train.size());
    std::map<std::string, std::string> group_of;
    for (std::size_t j : fold.train) {
      train.push_back(data[j]);
      group_of.emplace(data[j].label, data[j].group);
    }
    for (std::size_t t : fold.test) {
      const FeatureMatrix& test = data[t];
      const std::vector<MatchScore> ranked = rank_matches(test, train, p.weights, p.mode);
      for (std::size_t ki = 0; ki < p.k_range.size(); ++ki) {
        const std::size_t k = p.k_range[ki];
        std::string predicted = p.decision == Decision::knn ? knn_decide(ranked, k) : wknn_decide(ranked, k);
        if (p.group_rule) predicted = group_constrained(label_ranking(ranked, predicted), test.group, group_of);
        KResult& r = report.per_k[ki];
        const bool ok = predicted == test.label;
        ++r.total;
        r.correct += ok;
        ++r.confusion[test.label][predicted];
        auto& sc = subject_counts[ki][test.speaker];
        sc.first += ok;
        ++sc.second;
      }
    }
  }
  for (std::size_t ki = 0; ki < report.per_k.size(); ++ki) {
    KResult& r = report.per_k[ki];
    r.wrr = r.total ? 100.0 * static_cast<double>(r.correct) / static_cast<double>(r.total) : 0.0;
    for (const auto& [s, c] : subject_counts[ki])
      r.subject_wrr[s] = 100.0 * static_cast<double>(c.first) / static_cast<double>(c.second);
  }
  return report;
}

inline double weighted_error(double far, double frr, double omega) {
  if (!(omega > 0.0)) throw Error("weighted_error: omega must be positive");
  return (omega * far + frr) / (omega + 1.0);
}

struct ThresholdCurve {
  std::vector<double> thresholds;
  std::vector<double> frr;  // fractions in [0,1]
  std::vector<double> far;
  std::size_t best_index = 0;
  std::optional<double> omega;

  double best_threshold() const { return thresholds.at(best_index); }
  double error_at(std::size_t i) const { return omega ? weighted_error(far[i], frr[i], *omega) : far[i] + frr[i]; }
};

/// 1.0, 1.1, ... 5.0
inline std::vector<double> default_threshold_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 40; ++i) g.push_back(1.0 + 0.1 * i);
  return g;
}

/// Accept iff distance < t. The best threshold is the smallest grid point
/// minimising FAR+FRR, or the weighted error when `omega` is given.
inline ThresholdCurve far_frr_sweep(std::span<const double> genuine, std::span<const double> impostor,
                                    std::span<const double> grid, std::optional<double> omega = std::nullopt) {
  if (genuine.empty()) throw Error("far_frr_sweep: no genuine distances");
  if (impostor.empty()) throw Error("far_frr_sweep: no impostor distances");
  if (grid.empty()) throw Error("far_frr_sweep: empty threshold grid");
  if (omega && !(*omega > 0.0)) throw Error("far_frr_sweep: omega must be positive");
  const auto ng = static_cast<std::int64_t>(genuine.size());
  const auto ni = static_cast<std::int64_t>(impostor.size());

  ThresholdCurve c;
  c.omega = omega;
  c.thresholds.assign(grid.begin(), grid.end());
  std::int64_t best_total = -1;  // FRR+FAR scaled by ng*ni, compared exactly
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const auto rejected = std::count_if(genuine.begin(), genuine.end(), [t](double d) { return d >= t; });
    const auto accepted = std::count_if(impostor.begin(), impostor.end(), [t](double d) { return d < t; });
    c.frr.push_back(static_cast<double>(rejected) / static_cast<double>(ng));
    c.far.push_back(static_cast<double>(accepted) / static_cast<double>(ni));
    if (!omega) {
      const std::int64_t total = rejected * ni + accepted * ng;
      if (best_total < 0 || total < best_total) {
        best_total = total;
        c.best_index = i;
      }
    } else if (c.error_at(i) < c.error_at(c.best_index)) {
      c.best_index = i;
    }
  }
  return c;
}

inline ThresholdCurve far_frr_sweep(std::span<const double> genuine, std::span<const double> impostor) {
  const std::vector<double> grid = default_threshold_grid();
  return far_frr_sweep(genuine, impostor, grid);
}

}  // namespace vwords
