#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "orf/error.hpp"
#include "orf/score.hpp"

namespace orf {
namespace {

TEST(WcpmFromErrors, PublishedPassageInputs) {
  const WcpmScore kojo = wcpm_from_errors(117, 8, 60.0);
  EXPECT_EQ(kojo.words_correct, 109.0);
  EXPECT_EQ(kojo.wcpm, 109.0);
  EXPECT_EQ(kojo.method, ScoreMethod::HumanErrorCount);
  EXPECT_EQ(wcpm_from_errors(99, 4, 30.0).wcpm, 190.0);
  EXPECT_EQ(wcpm_from_errors(100, 0, 60.0).wcpm, 100.0);
}

TEST(WcpmFromErrors, ClampsWhenErrorsExceedStory) {
  const WcpmScore s = wcpm_from_errors(10, 25, 60.0);
  EXPECT_EQ(s.words_correct, 0.0);
  EXPECT_EQ(s.wcpm, 0.0);
}

TEST(WcpmFromErrors, RejectsBadDurations) {
  EXPECT_THROW(wcpm_from_errors(10, 1, 0.0), InvalidDurationError);
  EXPECT_THROW(wcpm_from_errors(10, 1, -3.0), InvalidDurationError);
  EXPECT_THROW(wcpm_from_errors(10, 1, std::nan("")), InvalidDurationError);
  EXPECT_THROW(wcpm_from_wer(10, 0.1, 0.0), InvalidDurationError);
}

TEST(WcpmFromWer, Examples) {
  EXPECT_EQ(wcpm_from_wer(100, 0.0, 60.0).wcpm, 100.0);
  EXPECT_EQ(wcpm_from_wer(100, 0.10, 120.0).wcpm, 45.0);
  const WcpmScore clamped = wcpm_from_wer(100, 1.2, 60.0);
  EXPECT_EQ(clamped.wcpm, 0.0);
  EXPECT_EQ(clamped.method, ScoreMethod::AutomatedWer);
  EXPECT_THROW(wcpm_from_wer(100, -0.1, 60.0), StatisticsError);
}

TEST(WcpmProperties, MethodsCoincideWhenErrorRateEqualsWer) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t w = 1 + rng() % 500;
    const std::size_t e = rng() % (w + 1);
    const double d = std::uniform_real_distribution<double>(1.0, 600.0)(rng);
    const double human = wcpm_from_errors(w, e, d).wcpm;
    const double automated = wcpm_from_wer(w, static_cast<double>(e) / static_cast<double>(w), d).wcpm;
    ASSERT_LE(std::abs(human - automated), 1e-9 * std::max(1.0, std::abs(human))) << w << " " << e << " " << d;
  }
}

TEST(WcpmProperties, MonotoneInErrorsAndDuration) {
  for (std::size_t e = 0; e < 100; ++e)
    ASSERT_GT(wcpm_from_errors(100, e, 45.0).wcpm, wcpm_from_errors(100, e + 1, 45.0).wcpm);
  for (double d = 10.0; d < 200.0; d += 7.5) ASSERT_GT(wcpm_from_errors(100, 3, d).wcpm, wcpm_from_errors(100, 3, d + 0.5).wcpm);
}

TEST(WcpmProperties, DoublingDurationHalvesExactly) {
  std::mt19937 rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t w = 1 + rng() % 300;
    const double d = std::uniform_real_distribution<double>(0.5, 300.0)(rng);
    const double wer_fraction = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    ASSERT_EQ(wcpm_from_errors(w, w / 3, 2 * d).wcpm, wcpm_from_errors(w, w / 3, d).wcpm / 2);
    ASSERT_EQ(wcpm_from_wer(w, wer_fraction, 2 * d).wcpm, wcpm_from_wer(w, wer_fraction, d).wcpm / 2);
  }
}

TEST(Summarize, Examples) {
  const std::vector<double> single = {7.0};
  const CohortSummary s1 = summarize(single);
  EXPECT_EQ(s1.count, 1u);
  EXPECT_EQ(s1.mean, 7.0);
  EXPECT_EQ(s1.min, 7.0);
  EXPECT_EQ(s1.max, 7.0);
  EXPECT_FALSE(s1.variance.has_value());

  const std::vector<double> three = {1, 2, 3};
  const CohortSummary s3 = summarize(three);
  EXPECT_EQ(s3.mean, 2.0);
  EXPECT_EQ(s3.min, 1.0);
  EXPECT_EQ(s3.max, 3.0);
  EXPECT_EQ(s3.variance, 1.0);

  const std::vector<double> constant = {0.1, 0.1, 0.1};
  const CohortSummary sc = summarize(constant);
  EXPECT_EQ(sc.variance, 0.0);
  EXPECT_EQ(sc.mean, 0.1);

  EXPECT_THROW(summarize(std::vector<double>{}), StatisticsError);
}

TEST(SummarizeProperties, MeanWithinRangeAndPermutationInvariant) {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng() % 30);
    for (auto& x : v) x = std::uniform_real_distribution<double>(-50.0, 150.0)(rng);
    const CohortSummary a = summarize(v);
    ASSERT_LE(a.min, a.mean);
    ASSERT_LE(a.mean, a.max);
    std::shuffle(v.begin(), v.end(), rng);
    const CohortSummary b = summarize(v);
    ASSERT_EQ(a.mean, b.mean);
    ASSERT_EQ(a.variance, b.variance);
    if (a.variance) ASSERT_GE(*a.variance, 0.0);
  }
}

TEST(Pearson, Examples) {
  const std::vector<double> a = {1, 2, 3, 5};
  const std::vector<double> neg = {-1, -2, -3, -5};
  EXPECT_DOUBLE_EQ(pearson(a, a), 1.0);
  EXPECT_DOUBLE_EQ(pearson(a, neg), -1.0);
  // Hand oracle: dx = (-1,0,1), dy = (-4/3,-1/3,5/3); Sxy = 3, Sxx = 2, Syy = 14/3.
  const double oracle = 3.0 / std::sqrt(2.0 * 14.0 / 3.0);
  EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 4}), oracle, 1e-12);
  EXPECT_NEAR(oracle, 0.9820, 5e-4);
}

TEST(Pearson, Errors) {
  const std::vector<double> a = {1, 2, 3};
  EXPECT_THROW(pearson(a, std::vector<double>{1, 2}), StatisticsError);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{2}), StatisticsError);
  EXPECT_THROW(pearson(a, std::vector<double>{4, 4, 4}), StatisticsError);
}

TEST(PearsonProperties, AffineInvariantAndBounded) {
  std::mt19937 rng(34);
  std::uniform_real_distribution<double> u(0.0, 200.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(2 + rng() % 40), b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = u(rng);
      b[i] = 0.7 * a[i] + std::normal_distribution<double>(0.0, 20.0)(rng);
    }
    const double r = pearson(a, b);
    ASSERT_LE(std::abs(r), 1.0);
    const double alpha = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    const double beta = std::uniform_real_distribution<double>(-100.0, 100.0)(rng);
    std::vector<double> scaled(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) scaled[i] = alpha * a[i] + beta;
    ASSERT_NEAR(pearson(scaled, b), r, 1e-12);
  }
}

TEST(MeanAbsDiff, Examples) {
  const std::vector<double> a = {100, 110};
  EXPECT_EQ(mean_abs_diff(a, a), 0.0);
  EXPECT_EQ(mean_abs_diff(a, std::vector<double>{105, 115}), 5.0);
  EXPECT_EQ(mean_abs_diff(std::vector<double>{113}, std::vector<double>{110}), 3.0);
  EXPECT_THROW(mean_abs_diff(std::vector<double>{}, std::vector<double>{}), StatisticsError);
  EXPECT_THROW(mean_abs_diff(a, std::vector<double>{1}), StatisticsError);
}

TEST(Agreement, CombinesStatistics) {
  const std::vector<double> human = {100, 110, 120}, automated = {105, 115, 125};
  const AgreementStats s = agreement(human, automated);
  EXPECT_NEAR(s.pearson_r, 1.0, 1e-12);
  EXPECT_EQ(s.mean_abs_diff, 5.0);
  EXPECT_EQ(s.mean_a, 110.0);
  EXPECT_EQ(s.mean_b, 115.0);
  EXPECT_EQ(s.count, 3u);
}

}  // namespace
}  // namespace orf
