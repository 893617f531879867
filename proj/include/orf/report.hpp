#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orf/align.hpp"
#include "orf/textnorm.hpp"

namespace orf {

enum class Mark { Correct, Substituted, Inserted, Deleted };

/// One aligned token. `ref` is empty for insertions and `hyp` for deletions;
/// correct segments carry the same word in both.
struct Segment {
  Mark mark;
  std::string ref;
  std::string hyp;

  bool operator==(const Segment&) const = default;
};

struct MarkCounts {
  std::size_t correct = 0;
  std::size_t substituted = 0;
  std::size_t inserted = 0;
  std::size_t deleted = 0;

  bool operator==(const MarkCounts&) const = default;
};

struct AlignmentRendering {
  std::vector<Segment> segments;
  MarkCounts legend;
};

enum class RenderFormat { PlainMarkup, Html, Json };

/// Pairs each op with its tokens. Throws ConsistencyError if the alignment
/// was not produced from these two sequences.
AlignmentRendering build_rendering(const Alignment& alignment, const TokenSequence& reference,
                                   const TokenSequence& hypothesis);

/// PlainMarkup: `{+ins+}`, `{-del-}`, `{~ref→hyp~}`, correct words bare,
/// space-separated. Html: spans with classes ins/del/sub. Json: the segment
/// list and legend.
std::string serialize(const AlignmentRendering& rendering, RenderFormat format);

std::string render_alignment(const Alignment& alignment, const TokenSequence& reference,
                             const TokenSequence& hypothesis, RenderFormat format);

// ---------------------------------------------------------------------------
// Score tables

/// Per-recording results. A row with `error` set was not scored.
struct ScoreRow {
  std::string id;
  std::optional<double> wer_percent;
  std::optional<double> wcpm_human;
  std::optional<double> wcpm_auto;
  std::optional<std::string> error;

  std::optional<double> abs_diff() const;
  bool operator==(const ScoreRow&) const = default;
};

struct SummaryTable {
  std::string title;
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<std::string>> cells;  // rows x columns; "" for blank
};

/// Record rows followed by mean/min/max/variance/n footers and, when paired
/// scores exist, mean_abs_diff and (for two or more pairs) pearson_r.
/// Columns: wer_percent, wcpm_human, wcpm_auto, abs_diff, plus errors when any
/// row failed. Throws StatisticsError on empty input.
SummaryTable build_summary_table(std::span<const ScoreRow> rows);

enum class TableFormat { Csv, Json, Markdown };

struct RecordAlignment {
  std::string id;
  AlignmentRendering rendering;
};

/// Csv and Markdown print the summary table with fixed decimals. Json carries
/// values at full precision alongside the same statistics. Alignments, when
/// given, are appended (Markdown, Json); CSV ignores them.
std::string emit_summary(std::span<const ScoreRow> rows, TableFormat format,
                         std::span<const RecordAlignment> alignments = {});

/// Reads rows back from emit_summary output (Csv or Json). Footer rows are
/// skipped. Throws std::invalid_argument on malformed input.
std::vector<ScoreRow> parse_summary(std::string_view text);

std::string csv_escape(std::string_view field);

}  // namespace orf
