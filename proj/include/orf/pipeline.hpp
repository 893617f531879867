#pragma once

#include <optional>
#include <vector>

#include "orf/align.hpp"
#include "orf/ingest.hpp"
#include "orf/report.hpp"
#include "orf/score.hpp"

namespace orf {

struct PipelineOptions {
  /// When unset, ASR transcripts come from the manifest's asr_transcript.
  std::optional<AsrBackendConfig> backend;
  unsigned parallelism = 4;
  unsigned retries = 0;
  bool collect_alignments = false;
  Sleeper sleep;  // retry backoff; defaults to a real sleep
};

struct RecordResult {
  ScoreRow row;
  std::optional<AlignmentRendering> alignment;  // story vs ASR transcript
};

/// Scores one recording against its story: automated WCPM from
/// WER(story, ASR transcript), human WCPM from human_error_count or, failing
/// that, from the errors found aligning the story with the human transcript.
/// Never throws; failures land in row.error.
RecordResult score_record(const RecordingRecord& record, const PipelineOptions& options);

struct BatchResult {
  std::vector<ScoreRow> rows;  // sorted by id
  std::vector<RecordAlignment> alignments;
  std::size_t scored() const;
};

/// Runs score_record over every record on up to options.parallelism threads.
/// Output is independent of thread count and completion order.
BatchResult run_batch(const std::vector<RecordingRecord>& records, const PipelineOptions& options);

struct TranscriptionRow {
  std::string id;
  WerBreakdown breakdown;
};

struct TranscriptionEval {
  std::vector<TranscriptionRow> rows;  // sorted by id
  std::size_t skipped = 0;
  std::optional<CohortSummary> summary;  // over wer_percent; unset when no rows
};

/// WER of the ASR transcript against the human transcript as ground truth.
/// Records lacking either transcript (or whose human transcript is empty)
/// are counted in `skipped`.
TranscriptionEval evaluate_transcription(const std::vector<RecordingRecord>& records, const PipelineOptions& options);

std::string emit_transcription_eval(const TranscriptionEval& eval, TableFormat format);

}  // namespace orf
