#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace orf {

enum class ScoreMethod { HumanErrorCount, AutomatedWer };

std::string_view to_string(ScoreMethod method);

/// Words-correct estimate and the rate-adjusted words correct per minute.
struct WcpmScore {
  double words_correct = 0.0;
  double duration_seconds = 0.0;
  double wcpm = 0.0;
  ScoreMethod method = ScoreMethod::HumanErrorCount;
};

/// (story_words - errors) * (60 / duration), with words_correct clamped at 0.
/// Throws InvalidDurationError when duration_seconds is not a positive finite number.
WcpmScore wcpm_from_errors(std::size_t story_words, std::size_t error_count, double duration_seconds);

/// story_words * (1 - WER) * (60 / duration), with 1 - WER clamped at 0.
WcpmScore wcpm_from_wer(std::size_t story_words, double wer_fraction, double duration_seconds);

struct CohortSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> variance;  // sample (n - 1) variance; absent for n < 2
};

/// Throws StatisticsError on an empty list. The result does not depend on the
/// order of the values.
CohortSummary summarize(std::span<const double> values);

struct AgreementStats {
  double pearson_r = 0.0;
  double mean_abs_diff = 0.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::size_t count = 0;
};

/// Pearson product-moment correlation. Throws StatisticsError on a length
/// mismatch, fewer than two points, or a constant input.
double pearson(std::span<const double> a, std::span<const double> b);

/// Mean of |a_i - b_i|. Throws StatisticsError on a length mismatch or empty input.
double mean_abs_diff(std::span<const double> a, std::span<const double> b);

AgreementStats agreement(std::span<const double> a, std::span<const double> b);

}  // namespace orf
