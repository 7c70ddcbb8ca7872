#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "support.hpp"

using namespace vwords;

namespace {

// Mouth of a given lip-box size painted on skin inside a 120x40 region.
MouthRoi mouth_of(int w, int h, Rgb lip = {170, 60, 70}) {
  RgbImage img(120, 40, {220, 180, 160});
  BinaryImage mask(120, 40, 0);
  const int x0 = 60 - w / 2, y0 = 20 - h / 2;
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) {
      img.at(x, y) = lip;
      mask.at(x, y) = 1;
    }
  return mouth_from_mask(mask, Roi{0, 80, img, {0, 0, 120, 120}});
}

// Plug-in mutual information counted directly from value pairs.
double oracle_mi(const GrayImage& x, const GrayImage& y) {
  std::map<double, double> px, py;
  std::map<std::pair<double, double>, double> pxy;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    px[x.pixels()[i]] += 1 / n;
    py[y.pixels()[i]] += 1 / n;
    pxy[{x.pixels()[i], y.pixels()[i]}] += 1 / n;
  }
  double mi = 0;
  for (const auto& [k, p] : pxy) mi += p * std::log2(p / (px[k.first] * py[k.second]));
  return mi;
}

double oracle_entropy(const GrayImage& x) {
  std::map<double, double> p;
  for (double v : x.pixels()) p[v] += 1.0 / static_cast<double>(x.size());
  double h = 0;
  for (const auto& [v, q] : p) h -= q * std::log2(q);
  return h;
}

}  // namespace

TEST(Geometry, HeightAndWidth) {
  const MouthRoi m = mouth_of(30, 12);
  EXPECT_EQ(geom_hw(m), (std::pair<double, double>{12, 30}));
  EXPECT_EQ(geom_hw(mouth_of(1, 1)), (std::pair<double, double>{1, 1}));
}

TEST(Mutual, HalfAndHalfBandIsOneBit) {
  GrayImage band(10, 10, 0.0);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 10; ++x) band.at(x, y) = 200;
  EXPECT_NEAR(band_mutual_information(band, band, ll_range()), 1.0, 1e-12);
}

TEST(Mutual, SelfInformationIsEntropy) {
  vt::Rng rng(2);
  const GrayImage a = vt::random_gray(50, 50, rng, 6);
  GrayImage scaled = a;
  for (double& v : scaled.pixels()) v *= 40;  // distinct bins for each level
  EXPECT_NEAR(band_mutual_information(scaled, scaled, ll_range()), oracle_entropy(scaled), 1e-9);
}

TEST(Mutual, IndependentBandsNearZero) {
  vt::Rng rng(17);
  GrayImage a = vt::random_gray(50, 50, rng, 4), b = vt::random_gray(50, 50, rng, 4);
  for (double& v : a.pixels()) v *= 80;
  for (double& v : b.pixels()) v *= 80;
  EXPECT_LT(band_mutual_information(a, b, ll_range()), 0.05);
}

TEST(Mutual, ConstantBandIsZero) {
  vt::Rng rng(4);
  const GrayImage a = vt::random_gray(20, 20, rng);
  EXPECT_NEAR(band_mutual_information(GrayImage(20, 20, 90.0), a, ll_range()), 0.0, 1e-12);
}

TEST(Mutual, MatchesBruteForceOracleAndBound) {
  vt::Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage x = vt::random_gray(8, 8, rng, 8), y = vt::random_gray(8, 8, rng, 8);
    const double mi = band_mutual_information(x, y, {0.0, 8.0}, 8);
    EXPECT_NEAR(mi, oracle_mi(x, y), 1e-9);
    EXPECT_LE(mi, std::min(oracle_entropy(x), oracle_entropy(y)) + 1e-9);
    EXPECT_NEAR(mi, band_mutual_information(y, x, {0.0, 8.0}, 8), 1e-9);
  }
}

TEST(Mutual, FeatureIsSymmetric) {
  vt::Rng rng(31);
  const HaarLevel a = haar_step(vt::random_gray(50, 50, rng)), b = haar_step(vt::random_gray(50, 50, rng));
  EXPECT_NEAR(mutual_feature(a, b), mutual_feature(b, a), 1e-9);
  const MouthRoi m1 = mouth_of(30, 10), m2 = mouth_of(34, 14);
  EXPECT_NEAR(mutual_feature(m1, m2), mutual_feature(m2, m1), 1e-9);
  EXPECT_GE(mutual_feature(m1, m2), 0.0);
}

TEST(Quality, Examples) {
  const std::vector<double> a{0, 2}, b{2, 0};
  EXPECT_DOUBLE_EQ(quality_index(a, b), -1.0);
  const std::vector<double> x{1, 4, 2, 8}, c{5, 5, 5, 5};
  EXPECT_DOUBLE_EQ(quality_index(x, x), 1.0);
  EXPECT_DOUBLE_EQ(quality_index(x, c), 0.0);
  EXPECT_THROW(quality_index(std::vector<double>{1}, std::vector<double>{1}), Error);
  EXPECT_THROW(quality_index(x, a), Error);
}

TEST(Quality, ZeroDenominatorConvention) {
  const std::vector<double> z{0, 0, 0}, o{0, 0, 0};
  EXPECT_EQ(quality_index(z, o), 1.0);
  const std::vector<double> d{1, -1, 0}, e{-1, 1, 0};  // zero means
  EXPECT_EQ(quality_index(d, d), 1.0);
  EXPECT_EQ(quality_index(d, e), 0.0);
}

TEST(Quality, BoundedAndSelfOne) {
  vt::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const HaarLevel a = haar_step(vt::random_gray(20, 20, rng)), b = haar_step(vt::random_gray(20, 20, rng));
    const double q = quality_feature(a, b);
    EXPECT_GE(q, -1.0);
    EXPECT_LE(q, 1.0);
    EXPECT_DOUBLE_EQ(quality_feature(a, a), 1.0);
  }
}

TEST(WaveletRatio, ConstantIsOne) { EXPECT_DOUBLE_EQ(wavelet_ratio(GrayImage(50, 50, 77.0)), 1.0); }

TEST(WaveletRatio, StripesAndTransposition) {
  vt::Rng rng(5);
  std::uniform_int_distribution<int> level(0, 255);
  GrayImage vertical(50, 50);
  for (int x = 0; x < 50; ++x) {
    const double v = level(rng);
    for (int y = 0; y < 50; ++y) vertical.at(x, y) = v;
  }
  const GrayImage horizontal = transpose(vertical);
  EXPECT_GT(wavelet_ratio(vertical), 1.0);
  EXPECT_LT(wavelet_ratio(horizontal), 1.0);
}

TEST(EdgeRatio, Examples) {
  EXPECT_DOUBLE_EQ(edge_ratio(GrayImage(10, 10, 50.0)), 0.0);
  GrayImage step(10, 10, 0.0);
  for (int y = 0; y < 10; ++y)
    for (int x = 5; x < 10; ++x) step.at(x, y) = 255;
  EXPECT_GT(edge_ratio(step), 1000.0);
  EXPECT_LT(edge_ratio(transpose(step)), 1e-9 + 0.0);
}

TEST(EdgeRatio, TransposeProductNearOne) {
  vt::Rng rng(12);
  const GrayImage g = vt::random_gray(30, 20, rng);
  EXPECT_NEAR(edge_ratio(g) * edge_ratio(transpose(g)), 1.0, 0.01);
}

TEST(RedColour, Examples) {
  const BinaryImage all(4, 4, 1);
  EXPECT_DOUBLE_EQ(red_colour(RgbImage(4, 4, {255, 0, 0}), all), 255.0);
  EXPECT_DOUBLE_EQ(red_colour(RgbImage(4, 4, {0, 0, 0}), all), 0.0);
  RgbImage half(4, 4, {0, 0, 0});
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 4; ++x) half.at(x, y) = {255, 0, 0};
  EXPECT_DOUBLE_EQ(red_colour(half, all), 127.5);
}

TEST(RedColour, OnlyEllipseCountsAndGreenBlueIgnored) {
  RgbImage img(6, 6, {10, 0, 0});
  BinaryImage e(6, 6, 0);
  e.at(2, 2) = e.at(3, 3) = 1;
  img.at(2, 2) = {100, 5, 9};
  img.at(3, 3) = {200, 200, 40};
  EXPECT_DOUBLE_EQ(red_colour(img, e), 150.0);
  img.at(3, 3) = {200, 0, 255};
  EXPECT_DOUBLE_EQ(red_colour(img, e), 150.0);
}

TEST(Teeth, Examples) {
  const BinaryImage all(20, 20, 1);
  EXPECT_EQ(teeth(RgbImage(20, 20, {230, 150, 170}), all), 0.0);
  EXPECT_EQ(teeth(RgbImage(20, 20, {255, 255, 255}), all), 0.0);
  RgbImage patch(20, 20, {230, 150, 170});
  for (int y = 8; y < 12; ++y)
    for (int x = 8; x < 12; ++x) patch.at(x, y) = {245, 245, 240};
  EXPECT_EQ(teeth(patch, all), 16.0);
}

TEST(Teeth, LightnessShiftInvariant) {
  vt::Rng rng(9);
  std::uniform_real_distribution<double> u(-20, 20);
  std::vector<LabLuv> s(200), shifted;
  for (auto& p : s) p = {50 + u(rng), u(rng), u(rng), u(rng), u(rng)};
  shifted = s;
  for (auto& p : shifted) p.l += 17;
  EXPECT_EQ(teeth_count(s), teeth_count(shifted));
  EXPECT_GT(teeth_count(s), 0u);
}

TEST(Signature, CellsInUnitRangeAndMetadataShape) {
  vt::Rng rng(3);
  std::vector<MouthRoi> frames;
  std::uniform_int_distribution<int> w(4, 60), h(2, 20);
  for (int i = 0; i < 6; ++i) frames.push_back(mouth_of(w(rng), h(rng)));
  const FeatureMatrix fm = build_signature(frames);
  EXPECT_EQ(fm.frames(), 6u);
  for (const auto& row : fm.rows)
    for (double v : row) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  EXPECT_EQ(kFeatureNames[kER], "ER");
}

TEST(Signature, NeedsTwoFrames) {
  const std::vector<MouthRoi> one{mouth_of(10, 5)};
  EXPECT_THROW(build_signature(one), Error);
}

TEST(Signature, StaticMouthIsConstant) {
  const std::vector<MouthRoi> frames(5, mouth_of(30, 10));
  const FeatureMatrix fm = build_signature(frames);
  for (const auto& row : fm.rows) EXPECT_EQ(row, fm.rows.front());
  EXPECT_DOUBLE_EQ(fm.rows[0][kQ], 1.0);
  EXPECT_DOUBLE_EQ(fm.rows[0][kH], 10.0 / 120.0);
  EXPECT_DOUBLE_EQ(fm.rows[0][kW], 30.0 / 120.0);
}

TEST(Signature, WideningMouthIncreasesW) {
  std::vector<MouthRoi> frames;
  for (int w = 20; w <= 60; w += 8) frames.push_back(mouth_of(w, 10));
  const auto col = build_signature(frames).column(kW);
  for (std::size_t i = 1; i < col.size(); ++i) EXPECT_GT(col[i], col[i - 1]);
}

TEST(Signature, FirstFrameComparedWithItself) {
  const std::vector<MouthRoi> frames{mouth_of(30, 10), mouth_of(40, 14)};
  const FeatureMatrix fm = build_signature(frames);
  EXPECT_DOUBLE_EQ(fm.rows[0][kQ], 1.0);
  EXPECT_NEAR(fm.rows[0][kM], mutual_feature(frames[0], frames[0]) / 8.0, 1e-12);
  EXPECT_NEAR(fm.rows[1][kM], mutual_feature(frames[1], frames[0]) / 8.0, 1e-12);
}
