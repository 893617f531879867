#include "orf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "orf/error.hpp"

namespace orf {
namespace {

struct Transcript {
  std::optional<RawText> text;
  std::optional<std::string> failure;
};

Transcript obtain_asr(const RecordingRecord& record, const PipelineOptions& options) {
  Transcript t;
  if (options.backend) {
    try {
      t.text = fetch_transcript_with_retries(record, *options.backend, options.retries, options.sleep);
    } catch (const BackendError& e) {
      t.failure = e.what();
    }
  } else if (record.asr_transcript) {
    t.text = record.asr_transcript;
  } else {
    t.failure = "no asr_transcript in manifest and no backend configured";
  }
  return t;
}

// Runs fn(i) for i in [0, n) on up to `parallelism` threads.
template <typename Fn>
void parallel_for(std::size_t n, unsigned parallelism, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, parallelism), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

}  // namespace

RecordResult score_record(const RecordingRecord& record, const PipelineOptions& options) {
  RecordResult result;
  result.row.id = record.id;
  try {
    const TokenSequence story = normalize(record.reference_text);
    if (story.empty()) throw EmptyReferenceError("reference_text has no words");

    Transcript asr = obtain_asr(record, options);
    if (!asr.text) {
      result.row.error = *asr.failure;
      return result;
    }
    const TokenSequence spoken = normalize(*asr.text);
    const Alignment alignment = align(story, spoken);
    const WerBreakdown b = breakdown(alignment);
    const WcpmScore automated = wcpm_from_wer(story.size(), b.wer_fraction, record.duration_seconds);

    std::optional<double> human;
    if (record.human_error_count) {
      human = wcpm_from_errors(story.size(), *record.human_error_count, record.duration_seconds).wcpm;
    } else if (record.human_transcript) {
      const std::size_t errors = count_reading_errors(story, normalize(*record.human_transcript));
      human = wcpm_from_errors(story.size(), errors, record.duration_seconds).wcpm;
    }

    result.row.wer_percent = b.wer_percent;
    result.row.wcpm_auto = automated.wcpm;
    result.row.wcpm_human = human;
    if (options.collect_alignments) result.alignment = build_rendering(alignment, story, spoken);
  } catch (const Error& e) {
    result.row = ScoreRow{};
    result.row.id = record.id;
    result.row.error = e.what();
    result.alignment.reset();
  }
  return result;
}

std::size_t BatchResult::scored() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ScoreRow& r) { return !r.error; }));
}

BatchResult run_batch(const std::vector<RecordingRecord>& records, const PipelineOptions& options) {
  std::vector<RecordResult> results(records.size());
  parallel_for(records.size(), options.parallelism,
               [&](std::size_t i) { results[i] = score_record(records[i], options); });

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return records[a].id < records[b].id; });

  BatchResult batch;
  batch.rows.reserve(records.size());
  for (std::size_t i : order) {
    auto& r = results[i];
    if (r.alignment) batch.alignments.push_back({r.row.id, std::move(*r.alignment)});
    batch.rows.push_back(std::move(r.row));
  }
  return batch;
}

TranscriptionEval evaluate_transcription(const std::vector<RecordingRecord>& records, const PipelineOptions& options) {
  std::vector<std::optional<TranscriptionRow>> slots(records.size());
  parallel_for(records.size(), options.parallelism, [&](std::size_t i) {
    const RecordingRecord& rec = records[i];
    if (!rec.human_transcript) return;
    try {
      const TokenSequence truth = normalize(*rec.human_transcript);
      if (truth.empty()) return;
      Transcript asr = obtain_asr(rec, options);
      if (!asr.text) return;
      slots[i] = TranscriptionRow{rec.id, wer(truth, normalize(*asr.text))};
    } catch (const Error&) {
    }
  });

  TranscriptionEval eval;
  for (auto& s : slots) {
    if (s)
      eval.rows.push_back(std::move(*s));
    else
      ++eval.skipped;
  }
  std::sort(eval.rows.begin(), eval.rows.end(),
            [](const TranscriptionRow& a, const TranscriptionRow& b) { return a.id < b.id; });
  if (!eval.rows.empty()) {
    std::vector<double> percents;
    for (const auto& r : eval.rows) percents.push_back(r.breakdown.wer_percent);
    eval.summary = summarize(percents);
  }
  return eval;
}

std::string emit_transcription_eval(const TranscriptionEval& eval, TableFormat format) {
  if (!eval.summary) throw StatisticsError("no comparable records");
  const CohortSummary& s = *eval.summary;
  auto f1 = [](double v) { return fmt::format("{:.1f}", v); };
  const std::string variance = s.variance ? fmt::format("{:.2f}", *s.variance) : "";

  switch (format) {
    case TableFormat::Json: {
      nlohmann::json doc = nlohmann::json::object();
      nlohmann::json recs = nlohmann::json::array();
      for (const auto& r : eval.rows)
        recs.push_back({{"id", r.id},
                        {"wer_percent", r.breakdown.wer_percent},
                        {"insertions", r.breakdown.insertions},
                        {"deletions", r.breakdown.deletions},
                        {"substitutions", r.breakdown.substitutions},
                        {"ref_len", r.breakdown.ref_len}});
      doc["records"] = std::move(recs);
      doc["summary"] = {{"n", s.count},
                        {"mean", s.mean},
                        {"min", s.min},
                        {"max", s.max},
                        {"variance", s.variance ? nlohmann::json(*s.variance) : nlohmann::json(nullptr)}};
      doc["skipped"] = eval.skipped;
      return doc.dump(2) + "\n";
    }
    case TableFormat::Csv: {
      std::string out = "id,wer_percent,insertions,deletions,substitutions,ref_len\n";
      for (const auto& r : eval.rows)
        out += fmt::format("{},{},{},{},{},{}\n", csv_escape(r.id), f1(r.breakdown.wer_percent), r.breakdown.insertions,
                           r.breakdown.deletions, r.breakdown.substitutions, r.breakdown.ref_len);
      out += fmt::format("mean,{},,,,\nmin,{},,,,\nmax,{},,,,\nvariance,{},,,,\nn,{},,,,\n", f1(s.mean), f1(s.min),
                         f1(s.max), variance, s.count);
      return out;
    }
    case TableFormat::Markdown: {
      std::string out = "# Transcription accuracy (WER %, human transcript as reference)\n\n";
      out += "| id | wer_percent | I | D | S | N |\n|---|---:|---:|---:|---:|---:|\n";
      for (const auto& r : eval.rows)
        out += fmt::format("| {} | {} | {} | {} | {} | {} |\n", r.id, f1(r.breakdown.wer_percent), r.breakdown.insertions,
                           r.breakdown.deletions, r.breakdown.substitutions, r.breakdown.ref_len);
      out += fmt::format("\n| | wer_percent |\n|---|---:|\n| **mean** | {} |\n| **min** | {} |\n| **max** | {} |\n"
                         "| **variance** | {} |\n| **n** | {} |\n",
                         f1(s.mean), f1(s.min), f1(s.max), variance, s.count);
      if (eval.skipped) out += fmt::format("\n{} record(s) skipped.\n", eval.skipped);
      return out;
    }
  }
  return {};
}

}  // namespace orf
