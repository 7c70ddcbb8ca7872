#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "support.hpp"

using namespace vwords;

namespace {

// Minimum cost over every monotone alignment path, enumerated recursively.
double brute_dtw(const std::vector<double>& a, const std::vector<double>& b) {
  std::function<double(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> double {
    const double c = std::abs(a[i] - b[j]);
    if (i == 0 && j == 0) return c;
    double best = std::numeric_limits<double>::infinity();
    if (i > 0) best = std::min(best, go(i - 1, j));
    if (j > 0) best = std::min(best, go(i, j - 1));
    if (i > 0 && j > 0) best = std::min(best, go(i - 1, j - 1));
    return c + best;
  };
  return go(a.size() - 1, b.size() - 1);
}

std::vector<MatchScore> ranked(std::initializer_list<std::pair<const char*, double>> entries) {
  std::vector<MatchScore> out;
  for (const auto& [label, d] : entries) {
    MatchScore s;
    s.label = label;
    s.fused = d;
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const MatchScore& a, const MatchScore& b) { return a.fused < b.fused; });
  return out;
}

FeatureMatrix single_column(std::vector<double> v) {
  FeatureMatrix m;
  for (double x : v) {
    FeatureRow r{};
    r[0] = x;
    m.rows.push_back(r);
  }
  return m;
}

}  // namespace

TEST(Dtw, Examples) {
  const std::vector<double> a{1, 2, 3}, b{1, 2, 2, 3};
  EXPECT_DOUBLE_EQ(dtw(a, a), 0.0);
  EXPECT_DOUBLE_EQ(dtw(a, b), 0.0);
  EXPECT_DOUBLE_EQ(dtw(std::vector<double>{0}, std::vector<double>{5}), 5.0);
  EXPECT_THROW(dtw(std::vector<double>{}, a), Error);
}

TEST(Dtw, MatchesExhaustivePathOracle) {
  vt::Rng rng(77);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(len(rng)), b(len(rng));
    for (double& x : a) x = u(rng);
    for (double& x : b) x = u(rng);
    EXPECT_NEAR(dtw(a, b), brute_dtw(a, b), 1e-9);
    EXPECT_NEAR(dtw(a, b), dtw(b, a), 1e-9);
    EXPECT_GE(dtw(a, b), 0.0);
  }
}

TEST(Resample, Examples) {
  const std::vector<double> s{0, 1};
  EXPECT_EQ(resample(s, 3), (std::vector<double>{0, 0.5, 1}));
  const std::vector<double> t{4, 1, 7, 2};
  EXPECT_EQ(resample(t, 4), t);
  const std::vector<double> c{3, 3, 3};
  for (double v : resample(c, 7)) EXPECT_DOUBLE_EQ(v, 3.0);
}

TEST(Resample, AffineExactAndEndpoints) {
  const std::vector<double> line{1, 3, 5, 7, 9};
  const auto r = resample(line, 13);
  ASSERT_EQ(r.size(), 13u);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r[i], 1 + 8.0 * static_cast<double>(i) / 12.0, 1e-12);
  const auto shrunk = resample(line, 3);
  EXPECT_DOUBLE_EQ(shrunk.front(), 1.0);
  EXPECT_DOUBLE_EQ(shrunk.back(), 9.0);
}

TEST(FeatureDistances, Toy) {
  const FeatureMatrix a = single_column({0, 1}), b = single_column({0, 0, 1});
  EXPECT_DOUBLE_EQ(feature_distances(a, b, DistanceMode::dtw)[0], 0.0);
  EXPECT_NEAR(feature_distances(a, b, DistanceMode::euclid_interp)[0], 0.5, 1e-12);
  for (auto mode : {DistanceMode::dtw, DistanceMode::euclid_interp})
    for (double d : feature_distances(a, a, mode)) EXPECT_EQ(d, 0.0);
}

// DTW relaxes the diagonal pairing under the same absolute cost.
TEST(FeatureDistances, DtwNoWorseThanPointwisePairing) {
  vt::Rng rng(61);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(7), b(7);
    for (double& x : a) x = u(rng);
    for (double& x : b) x = u(rng);
    std::sort(a.begin(), a.end());
    std::sort(b.rbegin(), b.rend());
    double pointwise = 0;
    for (std::size_t i = 0; i < a.size(); ++i) pointwise += std::abs(a[i] - b[i]);
    EXPECT_LE(dtw(a, b), pointwise + 1e-12);
  }
}

TEST(Fuse, Examples) {
  FeatureDistances d;
  d.fill(0.8);
  EXPECT_NEAR(fuse(d, FeatureWeights::speaker_dependent()), 0.1, 1e-12);
  EXPECT_NEAR(fuse(d, FeatureWeights{}), 0.1, 1e-12);
  d.fill(0.0);
  EXPECT_EQ(fuse(d, FeatureWeights{}), 0.0);
  const FeatureDistances e{1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_DOUBLE_EQ(fuse(e, FeatureWeights({0, 0, 0, 0, 0, 1, 0, 0})), 6.0 / 8.0);
}

TEST(Weights, ValidationAndProfiles) {
  EXPECT_THROW(FeatureWeights({0.5, 0.5, 0.5, 0, 0, 0, 0, 0}), Error);
  EXPECT_THROW(FeatureWeights({-0.1, 0.6, 0.5, 0, 0, 0, 0, 0}), Error);
  double sum = 0;
  for (double w : FeatureWeights::speaker_independent().values()) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(LearnWeights, Examples) {
  const std::array<double, 8> rates{53, 42, 31, 34, 23, 54, 57, 65};
  const FeatureWeights w = learn_weights(rates);
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(w[k], rates[static_cast<std::size_t>(k)] / 359.0, 1e-15);
  const FeatureWeights u = learn_weights({7, 7, 7, 7, 7, 7, 7, 7});
  for (int k = 0; k < 8; ++k) EXPECT_DOUBLE_EQ(u[k], 0.125);
  const FeatureWeights one = learn_weights({0, 0, 40, 0, 0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(one[2], 1.0);
  EXPECT_THROW(learn_weights({0, 0, 0, 0, 0, 0, 0, 0}), Error);
  EXPECT_THROW(learn_weights({1, -1, 0, 0, 0, 0, 0, 0}), Error);
}

TEST(LearnWeights, PerSubjectAveragesGiveTabulatedWeights) {
  const FeatureWeights w = learn_weights({53.3, 42.3, 31.3, 34.5, 23.0, 54.0, 57.0, 65.4});
  const std::array<double, 8> tabulated{15, 12, 9, 10, 6, 15, 16, 18};
  double sum = 0;
  for (int k = 0; k < 8; ++k) {
    EXPECT_NEAR(100 * w[k], tabulated[static_cast<std::size_t>(k)], 0.5) << kFeatureNames[static_cast<std::size_t>(k)];
    sum += w[k];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Knn, Examples) {
  const auto r = ranked({{"A", 0.5}, {"A", 0.6}, {"B", 0.4}});
  EXPECT_EQ(knn_decide(r, 1), "B");
  EXPECT_EQ(knn_decide(r, 3), "A");
  EXPECT_EQ(knn_decide(r, 99), "A");
  EXPECT_THROW(knn_decide(r, 0), Error);
  EXPECT_THROW(knn_decide(std::vector<MatchScore>{}, 1), Error);
  // 1-1 tie: nearer class wins
  EXPECT_EQ(knn_decide(ranked({{"A", 0.5}, {"B", 0.3}}), 2), "B");
}

TEST(Wknn, Examples) {
  const auto r = ranked({{"A", 0.5}, {"A", 0.6}, {"B", 0.4}});
  EXPECT_EQ(wknn_decide(r, 3), "A");
  EXPECT_EQ(wknn_decide(r, 1), "B");
  EXPECT_EQ(wknn_decide(r, 2), "B");
}

TEST(Classify, TestEqualToTrainingEntry) {
  vt::Rng rng(19);
  TrainingSet train;
  for (int i = 0; i < 6; ++i) {
    train.push_back(vt::random_signature(rng));
    train.back().label = "w" + std::to_string(i);
  }
  for (const auto& t : train) {
    EXPECT_EQ(knn(t, train, 1, FeatureWeights{}, DistanceMode::dtw), t.label);
    EXPECT_EQ(wknn(t, train, 1, FeatureWeights{}, DistanceMode::euclid_interp), t.label);
  }
}

TEST(Classify, DecisionIdentitiesOnRandomData) {
  vt::Rng rng(101);
  std::uniform_real_distribution<double> u(0, 10);
  std::uniform_int_distribution<int> cls(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<MatchScore> r;
    for (int i = 0; i < 8; ++i) {
      MatchScore s;
      s.label = std::string(1, static_cast<char>('A' + cls(rng)));
      s.fused = u(rng);
      r.push_back(s);
    }
    std::stable_sort(r.begin(), r.end(), [](const MatchScore& a, const MatchScore& b) { return a.fused < b.fused; });
    EXPECT_EQ(wknn_decide(r, 1), knn_decide(r, 1));
    EXPECT_EQ(wknn_decide(r, 2), wknn_decide(r, 1));
  }
}

TEST(Classify, GlobalScaleInvariance) {
  vt::Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    TrainingSet train;
    for (int i = 0; i < 8; ++i) {
      train.push_back(vt::random_signature(rng));
      train.back().label = std::string(1, static_cast<char>('a' + i % 3));
    }
    const FeatureMatrix test = vt::random_signature(rng);
    auto base = rank_matches(test, train, FeatureWeights::speaker_dependent(), DistanceMode::dtw);
    auto scaled = base;
    for (auto& s : scaled) s.fused *= 3.7;
    for (std::size_t k = 1; k <= 5; ++k) {
      EXPECT_EQ(knn_decide(base, k), knn_decide(scaled, k));
      EXPECT_EQ(wknn_decide(base, k), wknn_decide(scaled, k));
    }
  }
}

TEST(RankMatches, SortedWithStableTies) {
  const TrainingSet train{vt::constant_signature(0.5, 4, "x"), vt::constant_signature(0.2, 4, "y"),
                          vt::constant_signature(0.5, 4, "z")};
  const auto r = rank_matches(vt::constant_signature(0.2, 4, "?"), train, FeatureWeights{}, DistanceMode::dtw);
  EXPECT_EQ(r[0].label, "y");
  EXPECT_EQ(r[1].label, "x");
  EXPECT_EQ(r[2].label, "z");
  EXPECT_EQ(r[2].neighbour_rank, 2u);
}
