#include <gtest/gtest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

#include "analysis/csv.hpp"
#include "analysis/landscape.hpp"
#include "analysis/transfer.hpp"
#include "analysis/wilcoxon.hpp"
#include "bench/benchmark.hpp"
#include "catalog/catalog.hpp"
#include "common/error.hpp"
#include "graph/neighborhood.hpp"

using namespace archbench;

namespace {

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::io;
}

// Every cell of `space` stored with value fn(cell) and train time 1.
std::unique_ptr<TabularBenchmark> table_of(const SearchSpaceDef &space,
                                           const std::function<double(const CellGraph &)> &fn) {
  std::vector<MetricRecord> records;
  for_each_cell(space, [&](const CellGraph &c) {
    MetricRecord r;
    r.arch = canonical_encode(c, space);
    r.values = {{{fn(c)}}};
    r.train_time = {1.0};
    records.push_back(std::move(r));
    return true;
  });
  return std::make_unique<TabularBenchmark>("t", space, std::vector<MetricInfo>{{"acc", Orientation::higher_better, {1}}},
                                            1, std::move(records));
}

// Order statistic interpolation written out independently.
double brute_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double brute_rho(const std::vector<double> &a, int k) {
  double m = 0;
  for (double x : a) m += x;
  m /= static_cast<double>(a.size());
  double num = 0, den = 0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    den += (a[t] - m) * (a[t] - m);
    if (t + k < a.size()) num += (a[t] - m) * (a[t + k] - m);
  }
  return num / den;
}

SweepResult result(const std::string &bench, int cfg, double score) {
  return {"m", bench, cfg, {score}, {0}};
}

// Three single-task spaces with four configs: A and B higher-better, C
// lower-better. Scaled: A (0, .5, 1, .25), B (0, .5, .25, 1), C (0, 1, .25, .5).
SweepTable three_space_table() {
  std::vector<SweepResult> rs;
  const double a[] = {1, 3, 5, 2}, b[] = {10, 30, 20, 50}, c[] = {5, 1, 4, 3};
  for (int k = 0; k < 4; ++k) {
    rs.push_back(result("A", k, a[k]));
    rs.push_back(result("B", k, b[k]));
    rs.push_back(result("C", k, c[k]));
  }
  return make_sweep_table(rs, {{"C", {"", Orientation::lower_better}}});
}

}  // namespace

TEST(Describe, HandOrderStatistics) {
  const std::vector<double> v = {5, 3, 1, 4, 2};
  const auto s = describe(v);
  EXPECT_EQ(s.median, 3);
  EXPECT_EQ(s.q1, 2);
  EXPECT_EQ(s.q3, 4);
  EXPECT_EQ(s.iqr, 2);
  EXPECT_EQ(s.min, 1);
  EXPECT_EQ(s.max, 5);
  EXPECT_EQ(s.sample_size, 5u);
  EXPECT_EQ(code_of([] { describe(std::vector<double>{}); }), ErrorCode::degenerate);
}

TEST(Describe, MatchesBruteForceQuantiles) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(2 + rng.uniform_index(40));
    for (double &x : v) x = rng.normal();
    const auto s = describe(v);
    EXPECT_NEAR(s.q1, brute_quantile(v, 0.25), 1e-12 * (1 + std::abs(s.q1)));
    EXPECT_NEAR(s.median, brute_quantile(v, 0.5), 1e-12 * (1 + std::abs(s.median)));
    EXPECT_NEAR(s.q3, brute_quantile(v, 0.75), 1e-12 * (1 + std::abs(s.q3)));
    EXPECT_LE(s.min, s.q1);
    EXPECT_LE(s.q1, s.median);
    EXPECT_LE(s.median, s.q3);
    EXPECT_LE(s.q3, s.max);
  }
}

TEST(DistributionStats, ConstantLandscapeHasNoSpread) {
  auto bench = table_of(make_synthetic(2, 3), [](const CellGraph &) { return 0.42; });
  Rng rng(1);
  const auto s = distribution_stats(*bench, 100, rng);
  EXPECT_EQ(s.iqr, 0);
  EXPECT_EQ(s.stddev, 0);
  EXPECT_TRUE(s.exhaustive);
  EXPECT_EQ(s.sample_size, 9u);
}

TEST(DistributionStats, ExhaustiveOverWholeCellSpace) {
  SyntheticSpec spec;
  spec.seed = 4;
  auto bench = gen_synthetic(make_nb201_like(), spec);
  Rng rng(1);
  const auto s = distribution_stats(*bench, 100000, rng);
  EXPECT_TRUE(s.exhaustive);
  EXPECT_EQ(s.sample_size, 15625u);
  std::vector<double> all;
  for_each_cell(bench->space(), [&](const CellGraph &c) {
    all.push_back(bench->fitness(c));
    return true;
  });
  EXPECT_NEAR(s.median, brute_quantile(all, 0.5), 1e-12);
  EXPECT_NEAR(s.iqr, brute_quantile(all, 0.75) - brute_quantile(all, 0.25), 1e-12);
}

TEST(DistributionStats, SamplesBeyondCap) {
  SyntheticSpec spec;
  auto bench = gen_synthetic(make_nb201_like(), spec);
  Rng rng(1);
  const auto s = distribution_stats(*bench, 500, rng);
  EXPECT_FALSE(s.exhaustive);
  EXPECT_EQ(s.sample_size, 500u);
  EXPECT_EQ(code_of([&] { distribution_stats(*bench, 1, rng); }), ErrorCode::parameter);
}

TEST(Autocorrelation, MatchesDirectSums) {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + static_cast<int>(rng.uniform_index(5));
    std::vector<double> a(k + 1 + rng.uniform_index(50));
    for (double &x : a) x = rng.uniform(-3, 3);
    const auto rho = autocorrelation(a, k);
    ASSERT_EQ(rho.size(), static_cast<std::size_t>(k));
    for (int lag = 1; lag <= k; ++lag) {
      const double want = brute_rho(a, lag);
      EXPECT_NEAR(rho[lag - 1], want, 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(Autocorrelation, WhiteNoiseLagOneIsSmall) {
  Rng rng(12);
  std::vector<double> a(10000);
  for (double &x : a) x = rng.normal();
  EXPECT_LE(std::abs(autocorrelation(a, 1)[0]), 4 / std::sqrt(10000.0));
}

TEST(Autocorrelation, RejectsBadLagsAndConstantSeries) {
  const std::vector<double> a = {1, 2, 3};
  EXPECT_EQ(code_of([&] { autocorrelation(a, 3); }), ErrorCode::parameter);
  EXPECT_EQ(code_of([&] { autocorrelation(a, 0); }), ErrorCode::parameter);
  const std::vector<double> c = {2, 2, 2, 2};
  EXPECT_EQ(code_of([&] { autocorrelation(c, 1); }), ErrorCode::degenerate);
}

TEST(Rwa, ReplaysWalkWithDirectSums) {
  SyntheticSpec spec;
  spec.seed = 6;
  spec.ruggedness = 0.5;
  auto bench = gen_synthetic(make_nb201_like(), spec);
  Rng a(77), b(77);
  const auto rho = rwa(*bench, 300, 5, 3, a);

  const auto &space = bench->space();
  std::vector<double> want(5, 0.0);
  for (int w = 0; w < 3; ++w) {
    auto cell = sample_uniform(space, b);
    std::vector<double> series;
    for (int t = 0; t < 300; ++t) {
      series.push_back(bench->fitness(cell));
      if (t + 1 < 300) cell = mutate(cell, space, b);
    }
    for (int k = 1; k <= 5; ++k) want[k - 1] += brute_rho(series, k) / 3;
  }
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(rho[k], want[k], 1e-12);
}

TEST(Rwa, SeparableLandscapeIsCorrelated) {
  SyntheticSpec spec;
  spec.seed = 2;
  auto bench = gen_synthetic(make_nb201_like(), spec);
  Rng rng(5);
  const auto rho = rwa(*bench, 10000, 10, 1, rng);
  EXPECT_GE(rho[0], 0.5);
  for (std::size_t k = 1; k < rho.size(); ++k) EXPECT_LE(rho[k], rho[k - 1] + 0.05) << k;
}

TEST(Rwa, IidLandscapeIsUncorrelated) {
  SyntheticSpec spec;
  spec.seed = 2;
  spec.iid = true;
  auto bench = gen_synthetic(make_nb201_like(), spec);
  Rng rng(5);
  EXPECT_LE(std::abs(rwa(*bench, 10000, 1, 1, rng)[0]), 0.05);
}

TEST(Rwa, ConstantLandscapeIsDegenerate) {
  auto bench = table_of(make_synthetic(3, 3), [](const CellGraph &) { return 1.0; });
  Rng rng(1);
  EXPECT_EQ(code_of([&] { rwa(*bench, 50, 2, 1, rng); }), ErrorCode::degenerate);
  EXPECT_EQ(code_of([&] { rwa(*bench, 2, 2, 1, rng); }), ErrorCode::parameter);
}

TEST(Rwa, TabularWalkStaysOnStoredCells) {
  auto bench = table_of(make_synthetic(3, 3), [](const CellGraph &c) { return c.ops[0] + 0.1 * c.ops[1]; });
  Rng rng(1);
  const auto rho = rwa(*bench, 200, 3, 2, rng);
  EXPECT_EQ(rho.size(), 3u);
  EXPECT_GT(rho[0], 0.0);
}

TEST(Neighborhood, AverageSizes) {
  Rng rng(1);
  EXPECT_EQ(avg_neighborhood_size(make_nb201_like(), 100000, rng), 24.0);
  EXPECT_EQ(avg_neighborhood_size(make_synthetic(1, 2), 10, rng), 1.0);
  EXPECT_EQ(avg_neighborhood_size(make_asr_like(), 50, rng), 21.0);
}

TEST(TrainTime, SyntheticMeanMatchesFormula) {
  SyntheticSpec spec;
  spec.seed = 9;
  auto bench = gen_synthetic(make_synthetic(3, 4), spec);
  double sum = 0;
  int n = 0;
  for_each_cell(bench->space(), [&](const CellGraph &c) {
    sum += bench->train_time(c);
    ++n;
    return true;
  });
  Rng rng(1);
  EXPECT_NEAR(avg_train_time(*bench, 1000, rng), sum / n, 1e-9);
}

TEST(IqrVsOps, MatchesSubspaceEnumeration) {
  SyntheticSpec spec;
  spec.seed = 13;
  spec.ruggedness = 0.3;
  auto bench = gen_synthetic(make_nb201_like(), spec);
  Rng rng(1);
  const auto points = iqr_vs_num_ops(*bench, {1, 2, 3, 4, 5}, 100000, rng);
  ASSERT_EQ(points.size(), 5u);
  for (const auto &p : points) {
    std::vector<double> values;
    for_each_cell(bench->space(), [&](const CellGraph &c) {
      if (std::all_of(c.ops.begin(), c.ops.end(), [&](int op) { return op < p.ops; })) {
        values.push_back(bench->fitness(c));
      }
      return true;
    });
    EXPECT_EQ(p.stats.sample_size, values.size());
    EXPECT_NEAR(p.stats.iqr, brute_quantile(values, 0.75) - brute_quantile(values, 0.25), 1e-12) << p.ops;
  }
  EXPECT_EQ(points[0].stats.sample_size, 1u);
  EXPECT_EQ(points[0].stats.iqr, 0.0);
  EXPECT_NEAR(points[4].stats.iqr, distribution_stats(*bench, 100000, rng).iqr, 1e-15);
  EXPECT_EQ(code_of([&] { iqr_vs_num_ops(*bench, {6}, 100, rng); }), ErrorCode::parameter);
}

TEST(IqrVsOps, TabularFiltersStoredCells) {
  auto bench = table_of(make_synthetic(2, 3), [](const CellGraph &c) { return c.ops[0] * 3.0 + c.ops[1]; });
  Rng rng(1);
  const auto points = iqr_vs_num_ops(*bench, {2, 3}, 100, rng);
  // ops < 2: values {0, 1, 3, 4}.
  EXPECT_EQ(points[0].stats.sample_size, 4u);
  EXPECT_DOUBLE_EQ(points[0].stats.iqr, 3.25 - 0.75);
  EXPECT_EQ(points[1].stats.sample_size, 9u);
}

TEST(Scale01, EndpointsAndOrientation) {
  const std::vector<double> v = {0.2, 0.7};
  EXPECT_EQ(scale01(v), (std::vector<double>{0, 1}));
  EXPECT_EQ(scale01(v, Orientation::lower_better), (std::vector<double>{1, 0}));
  const std::vector<double> same = {3, 3};
  EXPECT_EQ(code_of([&] { scale01(same); }), ErrorCode::degenerate);
}

TEST(Scale01, AffineInvariant) {
  Rng rng(2);
  std::vector<double> v(20), w(20);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = rng.normal();
    w[i] = 3.5 * v[i] - 11;
  }
  const auto a = scale01(v), b = scale01(w);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  EXPECT_EQ(*std::max_element(a.begin(), a.end()), 1.0);
}

TEST(SweepTable, MissingAndDuplicateCells) {
  std::vector<SweepResult> rs = {result("A", 0, 1), result("A", 1, 2), result("B", 0, 3)};
  EXPECT_EQ(code_of([&] { make_sweep_table(rs); }), ErrorCode::missing_cell);
  rs.push_back(result("B", 0, 4));
  EXPECT_EQ(code_of([&] { make_sweep_table(rs); }), ErrorCode::duplicate_key);
}

TEST(SweepResult, MeanOverDeclaredSeeds) {
  SweepResult r{"m", "b", 0, {0.5, 0.7, 0.9}, {1, 2, 3}};
  EXPECT_DOUBLE_EQ(r.mean(), 0.7);
}

TEST(RegretMatrix, TwoSpaceHandInstance) {
  const auto table = make_sweep_table(
      {result("A", 1, 0.9), result("A", 2, 0.5), result("B", 1, 0.4), result("B", 2, 0.8)});
  const auto m = regret_matrix(table);
  EXPECT_EQ(m.values, (std::vector<std::vector<double>>{{0, 1}, {1, 0}}));
}

TEST(RegretMatrix, ThreeSpaceHandInstance) {
  const auto m = regret_matrix(three_space_table());
  EXPECT_EQ(m.labels, (std::vector<std::string>{"A", "B", "C"}));
  const std::vector<std::vector<double>> want = {{0, 0.75, 0.75}, {0.75, 0, 0.5}, {0.5, 0.5, 0}};
  EXPECT_EQ(m.values, want);
}

TEST(RegretMatrix, SingleConfigIsAllZero) {
  const auto m = regret_matrix(make_sweep_table({result("A", 0, 0.3), result("B", 0, 0.9)}));
  EXPECT_EQ(m.values, (std::vector<std::vector<double>>{{0, 0}, {0, 0}}));
}

TEST(RegretMatrix, TiesGoToLowestConfig) {
  // A ties configs 0 and 2; config 0 is worst on B.
  const auto m = regret_matrix(make_sweep_table({result("A", 0, 1), result("A", 1, 0), result("A", 2, 1),
                                                 result("B", 0, 0), result("B", 1, 1), result("B", 2, 2)}));
  EXPECT_EQ(m.values[0][1], 1.0);
}

TEST(RegretMatrix, MultiTaskSpaceAveragesTaskPairs) {
  // Space S holds tasks s1, s2 with opposite preferences; T is single-task.
  std::vector<SweepResult> rs = {result("s1", 0, 1), result("s1", 1, 0), result("s2", 0, 0),
                                 result("s2", 1, 1), result("T", 0, 1),  result("T", 1, 0)};
  const auto table = make_sweep_table(rs, {{"s1", {"S", Orientation::higher_better}},
                                           {"s2", {"S", Orientation::higher_better}}});
  const auto m = regret_matrix(table);
  EXPECT_EQ(m.labels, (std::vector<std::string>{"S", "T"}));
  // Per-task regrets: s1 best 0, s2 best 1, T best 0.
  EXPECT_EQ(m.values[0][0], 0.5);   // (0 + 1 + 1 + 0) / 4
  EXPECT_EQ(m.values[0][1], 0.5);   // (0 + 1) / 2
  EXPECT_EQ(m.values[1][0], 0.5);   // (0 + 1) / 2
  EXPECT_EQ(m.values[1][1], 0.0);
}

TEST(RegretMatrix, PropertiesOnRandomSweeps) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SweepResult> rs, shifted;
    for (int s = 0; s < 4; ++s) {
      const double a = rng.uniform(0.5, 5), b = rng.uniform(-10, 10);
      for (int c = 0; c < 6; ++c) {
        const double v = rng.uniform01();
        rs.push_back(result("S" + std::to_string(s), c, v));
        shifted.push_back(result("S" + std::to_string(s), c, a * v + b));
      }
    }
    const auto m = regret_matrix(make_sweep_table(rs));
    const auto m2 = regret_matrix(make_sweep_table(shifted));
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_EQ(m.values[i][i], 0.0);
      for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_GE(m.values[i][j], 0.0);
        EXPECT_LE(m.values[i][j], 1.0);
        EXPECT_NEAR(m.values[i][j], m2.values[i][j], 1e-12);
      }
    }
  }
}

TEST(KendallMatrix, HandValues) {
  const auto reversed = kendall_matrix(
      make_sweep_table({result("A", 0, 1), result("A", 1, 2), result("B", 0, 2), result("B", 1, 1)}));
  EXPECT_EQ(reversed.values, (std::vector<std::vector<double>>{{1, -1}, {-1, 1}}));
  const auto third = kendall_matrix(make_sweep_table({result("A", 0, 1), result("A", 1, 2), result("A", 2, 3),
                                                      result("B", 0, 1), result("B", 1, 3), result("B", 2, 2)}));
  EXPECT_NEAR(third.values[0][1], 1.0 / 3, 1e-15);
  EXPECT_EQ(third.values[0][0], 1.0);
}

TEST(KendallMatrix, UnitDiagonalAndOrientation) {
  const auto m = kendall_matrix(three_space_table());
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(m.values[i][i], 1.0);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_GE(m.values[i][j], -1.0);
      EXPECT_LE(m.values[i][j], 1.0);
    }
  }
  // Scaled A (0, .5, 1, .25) vs C (0, 1, .25, .5): 4 concordant, 2 discordant.
  EXPECT_NEAR(m.values[0][2], 1.0 / 3, 1e-15);
  EXPECT_EQ(code_of([] {
              kendall_matrix(make_sweep_table(
                  {result("A", 0, 1), result("A", 1, 1), result("B", 0, 1), result("B", 1, 2)}));
            }),
            ErrorCode::undefined_correlation);
}

TEST(LeaveOneOut, IdenticalRankingsAreZero) {
  std::vector<SweepResult> rs;
  for (int s = 0; s < 3; ++s) {
    for (int c = 0; c < 5; ++c) rs.push_back(result("S" + std::to_string(s), c, c * (s + 1.0)));
  }
  for (const auto &row : leave_one_out(make_sweep_table(rs))) {
    EXPECT_EQ(row.transfer_to, 0.0);
    EXPECT_EQ(row.transfer_from, 0.0);
  }
}

TEST(LeaveOneOut, TwoSpacesCollapseToOffDiagonal) {
  const auto table = make_sweep_table({result("A", 0, 0.1), result("A", 1, 0.9), result("A", 2, 0.5),
                                       result("B", 0, 0.7), result("B", 1, 0.2), result("B", 2, 0.8)});
  const auto m = regret_matrix(table);
  const auto rows = leave_one_out(table);
  EXPECT_NEAR(rows[0].transfer_to, m.values[1][0], 1e-15);
  EXPECT_NEAR(rows[0].transfer_from, m.values[0][1], 1e-15);
  EXPECT_NEAR(rows[1].transfer_to, m.values[0][1], 1e-15);
  EXPECT_NEAR(rows[1].transfer_from, m.values[1][0], 1e-15);
}

TEST(LeaveOneOut, ThreeSpaceInstanceMatchesDefinition) {
  const auto table = three_space_table();
  const auto rows = leave_one_out(table);
  const std::vector<std::vector<double>> scaled = {{0, .5, 1, .25}, {0, .5, .25, 1}, {0, 1, .25, .5}};
  for (std::size_t a = 0; a < 3; ++a) {
    std::size_t h = 0, own = 0;
    double best = -1;
    for (std::size_t c = 0; c < 4; ++c) {
      double avg = 0;
      for (std::size_t s = 0; s < 3; ++s) {
        if (s != a) avg += scaled[s][c] / 2;
      }
      if (avg > best) best = avg, h = c;
      if (scaled[a][c] > scaled[a][own]) own = c;
    }
    double from = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      if (s != a) from += (1 - scaled[s][own]) / 2;
    }
    EXPECT_EQ(rows[a].transferred, h);
    EXPECT_EQ(rows[a].own_best, own);
    EXPECT_DOUBLE_EQ(rows[a].transfer_to, 1 - scaled[a][h]);
    EXPECT_DOUBLE_EQ(rows[a].transfer_from, from);
  }
  EXPECT_EQ(rows[0].transfer_to, 0.5);
  EXPECT_EQ(rows[0].transfer_from, 0.75);
  EXPECT_EQ(code_of([] { leave_one_out(make_sweep_table({result("A", 0, 1), result("A", 1, 2)})); }),
            ErrorCode::parameter);
}

TEST(AvgRank, BestOnEveryTaskOfOneSpace) {
  const std::map<std::string, TaskInfo> tasks = {{"t1", {"S", Orientation::higher_better}},
                                                 {"t2", {"S", Orientation::higher_better}}};
  const auto r = avg_rank_table({{"X", {{"t1", 0.9}, {"t2", 0.8}}}, {"Y", {{"t1", 0.1}, {"t2", 0.2}}}}, tasks);
  EXPECT_EQ(r.methods, (std::vector<std::string>{"X", "Y"}));
  EXPECT_EQ(r.avg_rank, (std::vector<double>{1.0, 2.0}));
}

TEST(AvgRank, TiesShareAverageRank) {
  const auto r = avg_rank_table({{"X", {{"t", 0.5}}}, {"Y", {{"t", 0.5}}}});
  EXPECT_EQ(r.avg_rank, (std::vector<double>{1.5, 1.5}));
}

TEST(AvgRank, WeightedThreeMethodInstance) {
  const std::map<std::string, TaskInfo> tasks = {{"t1", {"S", Orientation::higher_better}},
                                                 {"t2", {"S", Orientation::higher_better}},
                                                 {"t3", {"T", Orientation::higher_better}}};
  const std::map<std::string, std::map<std::string, double>> scores = {
      {"X", {{"t1", 3}, {"t2", 1}, {"t3", 2}}},
      {"Y", {{"t1", 2}, {"t2", 2}, {"t3", 2}}},
      {"Z", {{"t1", 1}, {"t2", 3}, {"t3", 1}}}};
  EXPECT_EQ(avg_rank_table(scores, tasks).avg_rank, (std::vector<double>{1.75, 1.75, 2.5}));
  EXPECT_EQ(avg_rank_table(scores, tasks, {"S"}).avg_rank, (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(avg_rank_table(scores, tasks, {"T"}).avg_rank, (std::vector<double>{1.5, 1.5, 3}));

  // Relabeling the methods permutes the output the same way.
  const auto renamed = avg_rank_table({{"a", scores.at("Z")}, {"b", scores.at("X")}, {"c", scores.at("Y")}}, tasks);
  EXPECT_EQ(renamed.avg_rank, (std::vector<double>{2.5, 1.75, 1.75}));
}

TEST(AvgRank, LowerBetterAndMissingScores) {
  const std::map<std::string, TaskInfo> tasks = {{"t", {"", Orientation::lower_better}}};
  EXPECT_EQ(avg_rank_table({{"X", {{"t", 0.1}}}, {"Y", {{"t", 0.3}}}}, tasks).avg_rank,
            (std::vector<double>{1, 2}));
  EXPECT_EQ(code_of([] { avg_rank_table({{"X", {{"t", 1}}}, {"Y", {{"u", 1}}}}); }), ErrorCode::missing_cell);
}

TEST(RankInsights, SignConventionAndHandInstance) {
  const auto cells = rank_correlation_insights({{"X", {4, 3, 2, 1}}, {"Y", {1, 2, 3, 4}}},
                                               {{"size", {10, 40, 20, 30}}, {"grow", {1, 2, 3, 4}}});
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[0].method, "X");
  EXPECT_EQ(cells[0].property, "grow");
  EXPECT_DOUBLE_EQ(cells[0].tau, -1.0);
  EXPECT_DOUBLE_EQ(cells[1].tau, -1.0 / 3);
  EXPECT_DOUBLE_EQ(cells[3].tau, 1.0 / 3);
  EXPECT_EQ(code_of([] { rank_correlation_insights({{"X", {2, 2, 2}}}, {{"p", {1, 2, 3}}}); }),
            ErrorCode::undefined_correlation);
  EXPECT_EQ(code_of([] { rank_correlation_insights({{"X", {1, 2}}}, {{"p", {1, 2, 3}}}); }),
            ErrorCode::parameter);
}

TEST(Wilcoxon, AllPositiveDifferences) {
  const std::vector<double> x = {2, 4, 6, 8, 10}, y = {1, 2, 3, 4, 5};
  const auto r = wilcoxon_signed_rank(x, y, Alternative::greater);
  EXPECT_EQ(r.w_plus, 15);
  EXPECT_EQ(r.n, 5);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0 / 32);
  EXPECT_DOUBLE_EQ(wilcoxon_signed_rank(x, y).p_value, 1.0 / 16);
  EXPECT_DOUBLE_EQ(wilcoxon_signed_rank(x, y, Alternative::less).p_value, 1.0);
}

TEST(Wilcoxon, MatchesSignFlipEnumeration) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(12);
    std::vector<double> x(n), y(n, 0.0);
    // Coarse values give tied magnitudes and some zero differences.
    for (double &v : x) v = static_cast<double>(static_cast<int>(rng.uniform_index(9)) - 4);
    std::vector<double> d;
    for (double v : x) {
      if (v != 0) d.push_back(v);
    }
    if (d.empty()) {
      EXPECT_EQ(code_of([&] { wilcoxon_signed_rank(x, y); }), ErrorCode::degenerate);
      continue;
    }
    // Average ranks of |d| by pair counting.
    std::vector<double> rank(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      double below = 0, equal = 0;
      for (double e : d) {
        below += std::abs(e) < std::abs(d[i]);
        equal += std::abs(e) == std::abs(d[i]);
      }
      rank[i] = below + (equal + 1) / 2;
    }
    double observed = 0;
    for (std::size_t i = 0; i < d.size(); ++i) observed += d[i] > 0 ? rank[i] : 0;
    double le = 0, ge = 0;
    const std::size_t total = std::size_t{1} << d.size();
    for (std::size_t mask = 0; mask < total; ++mask) {
      double w = 0;
      for (std::size_t i = 0; i < d.size(); ++i) w += (mask >> i & 1) ? rank[i] : 0;
      le += w <= observed + 1e-9;
      ge += w >= observed - 1e-9;
    }
    const auto less = wilcoxon_signed_rank(x, y, Alternative::less);
    EXPECT_EQ(less.w_plus, observed);
    EXPECT_DOUBLE_EQ(less.p_value, le / total);
    EXPECT_DOUBLE_EQ(wilcoxon_signed_rank(x, y, Alternative::greater).p_value, ge / total);
    EXPECT_DOUBLE_EQ(wilcoxon_signed_rank(x, y).p_value, std::min(1.0, 2 * std::min(le, ge) / total));
  }
}

TEST(Wilcoxon, RejectsMismatchedLengths) {
  const std::vector<double> x = {1, 2}, y = {1};
  EXPECT_EQ(code_of([&] { wilcoxon_signed_rank(x, y); }), ErrorCode::parameter);
}

TEST(Csv, HeaderEscapingAndRoundTrip) {
  CsvTable t{{"a", "b"}, {{"x,y", "say \"hi\""}, {"1", "2"}}};
  EXPECT_EQ(t.str(), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n1,2\n");
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-20, 20));
    const auto s = format_number(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
}

TEST(Csv, TablesHaveNamedColumns) {
  const auto table = three_space_table();
  const auto regret = regret_csv({{"rs", regret_matrix(table)}});
  EXPECT_EQ(regret.header, (std::vector<std::string>{"method", "tuned_on", "evaluated_on", "regret"}));
  EXPECT_EQ(regret.rows.size(), 9u);
  EXPECT_EQ(regret.rows[1], (std::vector<std::string>{"rs", "A", "B", "0.75"}));
  const auto loo = loo_csv({{"rs", leave_one_out(table)}}, {{"rs", table}});
  EXPECT_EQ(loo.rows.size(), 3u);
  EXPECT_EQ(loo.rows[0][4], "2");
  const auto box = boxstats_csv({{"b", describe(std::vector<double>{1, 2, 3, 4, 5})}});
  EXPECT_EQ(box.str(), "bench,min,q1,median,q3,max,mean,stddev,iqr,sample_size,exhaustive\n"
                       "b,1,2,3,4,5,3,1.4142135623730951,2,5,false\n");
  EXPECT_EQ(rwa_csv({{"b", {0.5, 0.25}}}).rows.back(), (std::vector<std::string>{"b", "2", "0.25"}));
}
