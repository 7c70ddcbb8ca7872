#include <gtest/gtest.h>

#include "support.hpp"

using namespace vwords;

namespace {

// `per_word` samples of each of `words` words for each speaker; word w is a
// constant signature at level (w+1)/(words+1), slightly jittered.
TrainingSet separable(int speakers, int words, int per_word, int session = 1) {
  TrainingSet data;
  vt::Rng rng(static_cast<std::uint64_t>(speakers * 100 + words));
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  for (int s = 0; s < speakers; ++s)
    for (int w = 0; w < words; ++w)
      for (int r = 0; r < per_word; ++r) {
        FeatureMatrix m = vt::constant_signature((w + 1.0) / (words + 1.0) + jitter(rng), 6,
                                                 "w" + std::to_string(w), "s" + std::to_string(s));
        m.session = session;
        m.repetition = r + 1;
        m.group = w % 2 ? "LG" : "Nu";
        data.push_back(m);
      }
  return data;
}

}  // namespace

TEST(Protocol, SeparableDataIsPerfect) {
  const TrainingSet data = separable(3, 4, 3);
  for (auto kind : {ProtocolKind::sd_loo, ProtocolKind::si_loso}) {
    Protocol p;
    p.kind = kind;
    const EvalReport r = run_protocol(data, p);
    ASSERT_EQ(r.per_k.size(), 5u);
    for (const auto& kr : r.per_k) {
      EXPECT_DOUBLE_EQ(kr.wrr, 100.0);
      for (const auto& [s, rate] : kr.subject_wrr) EXPECT_DOUBLE_EQ(rate, 100.0) << s;
    }
  }
}

TEST(Protocol, FoldCounts) {
  const TrainingSet data = separable(3, 4, 2);
  Protocol p;
  p.k_range = {1};
  EXPECT_EQ(run_protocol(data, p).folds, data.size());
  EXPECT_EQ(run_protocol(data, p).per_k[0].total, data.size());
  p.kind = ProtocolKind::si_loso;
  EXPECT_EQ(run_protocol(data, p).folds, 3u);
  EXPECT_EQ(run_protocol(data, p).per_k[0].total, data.size());
}

TEST(Protocol, IdenticalSignaturesGiveChanceRate) {
  TrainingSet data;
  const int vocab = 4;
  for (int w = 0; w < vocab; ++w)
    for (int r = 0; r < 2; ++r) data.push_back(vt::constant_signature(0.5, 5, "w" + std::to_string(w)));
  Protocol p;
  p.k_range = {1};
  for (auto d : {Decision::knn, Decision::wknn}) {
    p.decision = d;
    EXPECT_DOUBLE_EQ(run_protocol(data, p).per_k[0].wrr, 100.0 / vocab);
  }
}

TEST(Protocol, PreconditionErrors) {
  Protocol si;
  si.kind = ProtocolKind::si_loso;
  EXPECT_THROW(run_protocol(separable(1, 3, 2), si), Error);
  Protocol sd;
  EXPECT_THROW(run_protocol(separable(2, 3, 1), sd), Error);
  Protocol sd2;
  sd2.kind = ProtocolKind::sd2_session;
  EXPECT_THROW(run_protocol(separable(2, 3, 2, 1), sd2), Error);
  EXPECT_THROW(run_protocol(TrainingSet{}, sd), Error);
}

TEST(Protocol, SessionSwap) {
  TrainingSet data = separable(2, 3, 2, 1);
  const TrainingSet s2 = separable(2, 3, 2, 2);
  data.insert(data.end(), s2.begin(), s2.end());
  Protocol p;
  p.kind = ProtocolKind::sd2_session;
  const EvalReport r = run_protocol(data, p);
  EXPECT_EQ(r.folds, 2u);
  EXPECT_EQ(r.per_k[0].total, 12u);
  EXPECT_DOUBLE_EQ(r.per_k[0].wrr, 100.0);
}

TEST(Protocol, ConfusionCountsEveryTest) {
  const TrainingSet data = separable(2, 3, 2);
  Protocol p;
  p.k_range = {1};
  const EvalReport report = run_protocol(data, p);
  const auto& conf = report.per_k[0].confusion;
  std::size_t n = 0;
  for (const auto& [actual, row] : conf)
    for (const auto& [pred, c] : row) n += c;
  EXPECT_EQ(n, data.size());
  EXPECT_EQ(conf.at("w1").at("w1"), 4u);
}

TEST(GroupRule, Examples) {
  const std::map<std::string, std::string> groups{{"X", "B"}, {"Y", "A"}, {"Z", "A"}};
  const std::vector<std::string> r1{"X", "Y", "Z"};
  EXPECT_EQ(group_constrained(r1, "A", groups), "Y");
  const std::vector<std::string> r2{"Z", "X"};
  EXPECT_EQ(group_constrained(r2, "A", groups), "Z");
  const std::vector<std::string> r3{"X"};
  EXPECT_EQ(group_constrained(r3, "A", groups), "X");
  EXPECT_THROW(group_constrained(std::vector<std::string>{}, "A", groups), Error);
}

TEST(GroupRule, NeverOutOfGroupWhenInGroupExists) {
  vt::Rng rng(6);
  const std::vector<std::string> labels{"a", "b", "c", "d", "e", "f"};
  std::map<std::string, std::string> groups;
  std::uniform_int_distribution<int> g(0, 2);
  for (const auto& l : labels) groups[l] = "g" + std::to_string(g(rng));
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> ranking = labels;
    std::shuffle(ranking.begin(), ranking.end(), rng);
    const std::string group = "g" + std::to_string(g(rng));
    const bool any = std::any_of(ranking.begin(), ranking.end(), [&](const auto& l) { return groups[l] == group; });
    const std::string got = group_constrained(ranking, group, groups);
    if (any) {
      EXPECT_EQ(groups[got], group);
    } else {
      EXPECT_EQ(got, ranking.front());
    }
  }
}

TEST(GroupRule, ApplyingTheRuleInProtocol) {
  // Words of two groups; every test word is nearest to the other group's word.
  TrainingSet data;
  const std::vector<std::pair<std::string, std::string>> words{{"a", "Nu"}, {"b", "LG"}};
  for (int r = 0; r < 2; ++r) {
    FeatureMatrix a = vt::constant_signature(0.5, 4, "a");
    a.group = "Nu";
    FeatureMatrix b = vt::constant_signature(0.5, 4, "b");
    b.group = "LG";
    data.push_back(a);
    data.push_back(b);
  }
  Protocol p;
  p.k_range = {1};
  EXPECT_LT(run_protocol(data, p).per_k[0].wrr, 100.0);
  p.group_rule = true;
  const EvalReport r = run_protocol(data, p);
  EXPECT_TRUE(r.oracle_groups);
  EXPECT_DOUBLE_EQ(r.per_k[0].wrr, 100.0);
}

TEST(Sweep, Examples) {
  const std::vector<double> genuine{1, 2}, impostor{3, 4};
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.1 * i);
  const ThresholdCurve c = far_frr_sweep(genuine, impostor, grid);
  EXPECT_NEAR(c.best_threshold(), 2.1, 1e-12);
  EXPECT_EQ(c.frr[c.best_index] + c.far[c.best_index], 0.0);
  EXPECT_EQ(c.frr.front(), 1.0);
  EXPECT_EQ(c.far.front(), 0.0);
  EXPECT_EQ(c.frr.back(), 0.0);
  EXPECT_EQ(c.far.back(), 1.0);
  EXPECT_THROW(far_frr_sweep(std::vector<double>{}, impostor), Error);
  EXPECT_THROW(far_frr_sweep(genuine, std::vector<double>{}), Error);
}

TEST(Sweep, DefaultGrid) {
  const auto g = default_threshold_grid();
  ASSERT_EQ(g.size(), 41u);
  EXPECT_DOUBLE_EQ(g.front(), 1.0);
  EXPECT_NEAR(g.back(), 5.0, 1e-12);
}

TEST(Sweep, MonotoneAndOptimalAgainstFullScan) {
  vt::Rng rng(29);
  std::normal_distribution<double> gd(2.0, 0.6), id(3.2, 0.7);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> genuine(15), impostor(40);
    for (double& d : genuine) d = gd(rng);
    for (double& d : impostor) d = id(rng);
    const auto grid = default_threshold_grid();
    const ThresholdCurve c = far_frr_sweep(genuine, impostor, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      EXPECT_LE(c.frr[i], c.frr[i - 1]);
      EXPECT_GE(c.far[i], c.far[i - 1]);
    }
    std::size_t best = 0;
    double best_err = 1e9;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double fr = 0, fa = 0;
      for (double d : genuine) fr += d >= grid[i];
      for (double d : impostor) fa += d < grid[i];
      const double err = fr / 15.0 + fa / 40.0;
      if (err < best_err - 1e-12) {
        best_err = err;
        best = i;
      }
    }
    EXPECT_EQ(c.best_index, best);
  }
}

TEST(Sweep, FarImpostorLeavesFrrUnchanged) {
  const std::vector<double> genuine{1.5, 2.5, 3.1}, impostor{2.9, 3.5};
  std::vector<double> more = impostor;
  more.push_back(99.0);
  const auto a = far_frr_sweep(genuine, impostor), b = far_frr_sweep(genuine, more);
  EXPECT_EQ(a.frr, b.frr);
}

TEST(Sweep, WeightedOmega) {
  const std::vector<double> genuine{1.2, 1.9, 2.6}, impostor{2.2, 3.0, 3.6};
  const auto c = far_frr_sweep(genuine, impostor, default_threshold_grid(), 4.0);
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) EXPECT_LE(c.error_at(c.best_index), c.error_at(i));
  EXPECT_THROW(far_frr_sweep(genuine, impostor, default_threshold_grid(), 0.0), Error);
}

TEST(WeightedError, Examples) {
  EXPECT_DOUBLE_EQ(weighted_error(0.2, 0.6, 1.0), 0.4);
  EXPECT_NEAR(weighted_error(0.3, 0.4, 2.0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(weighted_error(0.25, 0.25, 7.0), 0.25, 1e-12);
  EXPECT_THROW(weighted_error(0.1, 0.1, 0.0), Error);
}
