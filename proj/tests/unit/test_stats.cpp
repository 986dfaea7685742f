#include <gtest/gtest.h>

#include <cmath>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "stats/descriptive.hpp"
#include "stats/rank.hpp"

using namespace archbench;

namespace {

// O(n^2) tau-b straight from the pair definition.
double brute_tau_b(const std::vector<double> &a, const std::vector<double> &b) {
  double concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0 && db == 0) continue;
      if (da == 0) {
        ties_a += 1;
      } else if (db == 0) {
        ties_b += 1;
      } else if ((da > 0) == (db > 0)) {
        concordant += 1;
      } else {
        discordant += 1;
      }
    }
  }
  return (concordant - discordant) /
         std::sqrt((concordant + discordant + ties_a) * (concordant + discordant + ties_b));
}

// Spearman from ranks via the textbook covariance formula.
double brute_spearman(const std::vector<double> &a, const std::vector<double> &b) {
  auto rank = [](const std::vector<double> &v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double w : v) {
        less += w < v[i];
        equal += w == v[i];
      }
      r[i] = less + (equal + 1) / 2;
    }
    return r;
  };
  const auto ra = rank(a), rb = rank(b);
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= a.size();
  mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> random_ints(Rng &rng, std::size_t n, int levels) {
  std::vector<double> v(n);
  for (auto &x : v) x = static_cast<double>(rng.uniform_index(static_cast<std::uint64_t>(levels)));
  return v;
}

}  // namespace

TEST(Ranks, AverageTies) {
  const std::vector<double> v{10, 20, 20, 30};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{1, 2.5, 2.5, 4}));
}

TEST(Spearman, HandExamples) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(spearman(a, a), 1.0);
  EXPECT_DOUBLE_EQ(spearman(a, std::vector<double>{4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(spearman(a, std::vector<double>{1, 3, 2, 4}), 0.8, 1e-15);
}

TEST(Spearman, ZeroVarianceIsUndefined) {
  const std::vector<double> a{1, 2, 3}, c{5, 5, 5};
  try {
    spearman(a, c);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::undefined_correlation);
  }
}

TEST(Spearman, MatchesBruteForceOracle) {
  Rng rng(7);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.uniform_index(40);
    auto a = random_ints(rng, n, 6);
    auto b = random_ints(rng, n, 6);
    if (std::all_of(a.begin(), a.end(), [&](double x) { return x == a[0]; }) ||
        std::all_of(b.begin(), b.end(), [&](double x) { return x == b[0]; })) {
      continue;
    }
    EXPECT_NEAR(spearman(a, b), brute_spearman(a, b), 1e-12);
  }
}

TEST(Spearman, InvariantUnderIncreasingTransform) {
  Rng rng(11);
  std::vector<double> a(50), b(50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.normal();
    b[i] = a[i] + rng.normal();
  }
  std::vector<double> ta(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) ta[i] = std::exp(3 * a[i]) + 7;
  EXPECT_DOUBLE_EQ(spearman(a, b), spearman(ta, b));
}

TEST(Kendall, HandExamples) {
  EXPECT_DOUBLE_EQ(kendall_tau_b(std::vector<double>{1, 2}, std::vector<double>{2, 1}), -1.0);
  EXPECT_NEAR(kendall_tau_b(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}), 1.0 / 3,
              1e-15);
}

TEST(Kendall, MatchesBruteForceOracleWithTies) {
  Rng rng(3);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.uniform_index(60);
    auto a = random_ints(rng, n, 1 + static_cast<int>(rng.uniform_index(8)));
    auto b = random_ints(rng, n, 1 + static_cast<int>(rng.uniform_index(8)));
    const double oracle = brute_tau_b(a, b);
    if (!std::isfinite(oracle)) {
      EXPECT_THROW(kendall_tau_b(a, b), Error);
      continue;
    }
    EXPECT_NEAR(kendall_tau_b(a, b), oracle, 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 600);
}

TEST(Descriptive, InclusiveQuantilesAndPopulationStddev) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(mean(v), 2.5);
  EXPECT_DOUBLE_EQ(stddev(v), std::sqrt(1.25));
}
