#include "orf/score.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "orf/error.hpp"

namespace orf {
namespace {

void check_duration(double duration_seconds) {
  if (!(duration_seconds > 0.0) || !std::isfinite(duration_seconds))
    throw InvalidDurationError("duration must be a positive number of seconds, got " +
                               std::to_string(duration_seconds));
}

WcpmScore make_score(double words_correct, double duration_seconds, ScoreMethod method) {
  return {words_correct, duration_seconds, words_correct * (60.0 / duration_seconds), method};
}

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

void check_pair(std::span<const double> a, std::span<const double> b, std::size_t min_count) {
  if (a.size() != b.size())
    throw StatisticsError("score lists differ in length (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  if (a.size() < min_count)
    throw StatisticsError("need at least " + std::to_string(min_count) + " paired scores, got " +
                          std::to_string(a.size()));
}

}  // namespace

std::string_view to_string(ScoreMethod method) {
  switch (method) {
    case ScoreMethod::HumanErrorCount: return "human_error_count";
    case ScoreMethod::AutomatedWer: return "automated_wer";
  }
  return "unknown";
}

WcpmScore wcpm_from_errors(std::size_t story_words, std::size_t error_count, double duration_seconds) {
  check_duration(duration_seconds);
  const double correct = error_count >= story_words ? 0.0 : static_cast<double>(story_words - error_count);
  return make_score(correct, duration_seconds, ScoreMethod::HumanErrorCount);
}

WcpmScore wcpm_from_wer(std::size_t story_words, double wer_fraction, double duration_seconds) {
  check_duration(duration_seconds);
  if (!(wer_fraction >= 0.0) || !std::isfinite(wer_fraction))
    throw StatisticsError("WER must be a nonnegative number, got " + std::to_string(wer_fraction));
  const double correct = static_cast<double>(story_words) * std::max(0.0, 1.0 - wer_fraction);
  return make_score(correct, duration_seconds, ScoreMethod::AutomatedWer);
}

CohortSummary summarize(std::span<const double> values) {
  if (values.empty()) throw StatisticsError("cannot summarize an empty cohort");
  // Sorting fixes the summation order, so permutations give identical results.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  CohortSummary s;
  s.count = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  s.mean = std::clamp(mean_of(sorted), s.min, s.max);
  if (s.count >= 2) {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.count - 1);
  }
  return s;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, 2);
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw StatisticsError("correlation is undefined for a constant score list");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double mean_abs_diff(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, 1);
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total / static_cast<double>(a.size());
}

AgreementStats agreement(std::span<const double> a, std::span<const double> b) {
  AgreementStats s;
  s.pearson_r = pearson(a, b);
  s.mean_abs_diff = mean_abs_diff(a, b);
  s.mean_a = mean_of(a);
  s.mean_b = mean_of(b);
  s.count = a.size();
  return s;
}

}  // namespace orf
