#include "orf/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "orf/error.hpp"
#include "orf/pipeline.hpp"

namespace orf::cli {
namespace {

/// A usage or validation problem detected before or during file I/O.
struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string manifest;
  std::string out_path;
  std::string format = "csv";
  std::string backend_spec;
  std::string auth_header;
  double timeout_seconds = 30.0;
  unsigned parallelism = 4;
  unsigned retries = 0;
  bool alignments = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot write " + path);
  file << data;
  if (!file) throw UsageError("failed writing " + path);
}

TableFormat parse_format(const std::string& name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "json") return TableFormat::Json;
  if (name == "md") return TableFormat::Markdown;
  throw UsageError("unknown format \"" + name + "\" (expected csv, json or md)");
}

PipelineOptions pipeline_options(const RunConfig& cfg, const EnvLookup& env) {
  PipelineOptions opts;
  opts.parallelism = cfg.parallelism;
  opts.retries = cfg.retries;
  opts.collect_alignments = cfg.alignments;
  std::string spec = cfg.backend_spec;
  if (spec.empty()) spec = env("ORF_BACKEND").value_or("");
  if (!spec.empty()) {
    AsrBackendConfig backend;
    try {
      backend = parse_backend_spec(spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (auto* http = std::get_if<HttpEndpointBackend>(&backend)) {
      http->timeout_seconds = cfg.timeout_seconds;
      if (!cfg.auth_header.empty()) http->auth_header = cfg.auth_header;
    } else if (auto* cmd = std::get_if<ExternalCommandBackend>(&backend)) {
      cmd->timeout_seconds = cfg.timeout_seconds;
    }
    opts.backend = std::move(backend);
  }
  return opts;
}

void add_pipeline_flags(CLI::App& app, RunConfig& cfg, bool with_format = true) {
  app.add_option("--manifest", cfg.manifest, "JSON-Lines recording manifest")->required();
  app.add_option("--backend", cfg.backend_spec, "files:<dir> | command:<template with {audio}> | http:<url>");
  app.add_option("--timeout", cfg.timeout_seconds, "backend timeout in seconds")->check(CLI::PositiveNumber);
  app.add_option("--auth-header", cfg.auth_header, "extra HTTP header for the http backend, \"Name: value\"");
  app.add_option("--parallelism", cfg.parallelism, "concurrent records")->check(CLI::Range(1u, 1024u));
  app.add_option("--retries", cfg.retries, "retries per backend call, exponential backoff from 1 s");
  app.add_option("--out", cfg.out_path, "output file (default: standard output)");
  if (with_format) app.add_option("--format", cfg.format, "csv | json | md")->check(CLI::IsMember({"csv", "json", "md"}));
}

int cmd_normalize(const std::vector<std::string>& paths, std::ostream& out) {
  for (const auto& path : paths) {
    std::istringstream lines(read_file(path));
    std::string line;
    while (std::getline(lines, line)) out << normalize(line).render() << '\n';
  }
  return kOk;
}

int cmd_wer(const std::string& ref_path, const std::string& hyp_path, bool percent, bool as_json, std::ostream& out) {
  const TokenSequence ref = normalize(read_file(ref_path));
  const TokenSequence hyp = normalize(read_file(hyp_path));
  const WerBreakdown b = wer(ref, hyp);
  if (as_json) {
    nlohmann::json doc = {{"insertions", b.insertions},       {"deletions", b.deletions},
                          {"substitutions", b.substitutions}, {"matches", b.matches},
                          {"ref_len", b.ref_len},             {"wer_fraction", b.wer_fraction},
                          {"wer_percent", b.wer_percent}};
    out << doc.dump() << '\n';
    return kOk;
  }
  const std::string rate = percent ? fmt::format("{:.1f}%", b.wer_percent) : fmt::format("{:.4f}", b.wer_fraction);
  out << fmt::format("WER {} ({}/{}) I={} D={} S={} matches={}\n", rate, b.errors(), b.ref_len, b.insertions,
                     b.deletions, b.substitutions, b.matches);
  return kOk;
}

struct ScoreArgs {
  std::optional<std::size_t> words;
  std::string story;
  std::optional<std::size_t> errors;
  std::optional<double> wer_fraction;
  std::string spoken;
  std::string transcript;
  std::optional<double> duration;
  std::string audio;
};

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  const int sources = int(a.errors.has_value()) + int(a.wer_fraction.has_value()) + int(!a.spoken.empty()) +
                      int(!a.transcript.empty());
  if (sources != 1) throw UsageError("give exactly one of --errors, --wer, --spoken, --transcript");
  if (a.words.has_value() == !a.story.empty()) throw UsageError("give exactly one of --words, --story");
  if ((!a.spoken.empty() || !a.transcript.empty()) && a.story.empty())
    throw UsageError("--spoken and --transcript need --story");
  if (a.duration.has_value() == !a.audio.empty()) throw UsageError("give exactly one of --duration, --audio");
  if (a.words && *a.words == 0) throw UsageError("--words must be positive");

  std::optional<TokenSequence> story;
  if (!a.story.empty()) {
    story = normalize(read_file(a.story));
    if (story->empty()) throw EmptyReferenceError("story has no words");
  }
  const std::size_t words = story ? story->size() : *a.words;
  const double duration = a.duration ? *a.duration : probe_wav_duration(a.audio);

  WcpmScore s;
  if (a.errors) {
    s = wcpm_from_errors(words, *a.errors, duration);
  } else if (a.wer_fraction) {
    s = wcpm_from_wer(words, *a.wer_fraction, duration);
  } else if (!a.spoken.empty()) {
    s = wcpm_from_errors(words, count_reading_errors(*story, normalize(read_file(a.spoken))), duration);
  } else {
    s = wcpm_from_wer(words, wer(*story, normalize(read_file(a.transcript))).wer_fraction, duration);
  }
  nlohmann::json doc = {{"method", std::string(to_string(s.method))},
                        {"words_correct", s.words_correct},
                        {"duration_seconds", s.duration_seconds},
                        {"wcpm", s.wcpm}};
  out << doc.dump() << '\n';
  return kOk;
}

std::vector<RecordingRecord> load_records(const RunConfig& cfg) {
  auto records = load_manifest(cfg.manifest);
  if (records.empty()) throw UsageError("manifest " + cfg.manifest + " has no records");
  return records;
}

int cmd_batch(const RunConfig& cfg, const EnvLookup& env, std::ostream& out, std::ostream& err) {
  const TableFormat format = parse_format(cfg.format);
  if (cfg.alignments && format == TableFormat::Csv)
    throw UsageError("--alignments needs --format json or md");
  const PipelineOptions opts = pipeline_options(cfg, env);
  const auto records = load_records(cfg);

  const BatchResult batch = run_batch(records, opts);
  for (const auto& row : batch.rows)
    if (row.error) err << "orf: " << row.id << ": " << *row.error << '\n';
  err << fmt::format("orf: scored {}/{} records\n", batch.scored(), batch.rows.size());
  write_output(cfg.out_path, emit_summary(batch.rows, format, batch.alignments), out);
  return batch.scored() > 0 ? kOk : kBackend;
}

int cmd_eval(const RunConfig& cfg, const EnvLookup& env, std::ostream& out, std::ostream& err) {
  const TableFormat format = parse_format(cfg.format);
  const PipelineOptions opts = pipeline_options(cfg, env);
  const auto records = load_records(cfg);
  const TranscriptionEval eval = evaluate_transcription(records, opts);
  if (eval.skipped) err << fmt::format("orf: warning: skipped {} record(s) without both transcripts\n", eval.skipped);
  if (eval.rows.empty()) {
    err << "orf: no comparable records\n";
    return kValidation;
  }
  write_output(cfg.out_path, emit_transcription_eval(eval, format), out);
  return kOk;
}

int cmd_compare(const std::string& results_path, bool as_json, std::ostream& out, std::ostream& err) {
  std::vector<ScoreRow> rows;
  try {
    rows = parse_summary(read_file(results_path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(results_path + ": " + e.what());
  }
  std::vector<double> human;
  std::vector<double> automated;
  for (const auto& r : rows) {
    if (r.wcpm_human && r.wcpm_auto) {
      human.push_back(*r.wcpm_human);
      automated.push_back(*r.wcpm_auto);
    }
  }
  if (human.size() < 2) {
    err << fmt::format("orf: need at least 2 records with both wcpm_human and wcpm_auto, found {}\n", human.size());
    return kValidation;
  }
  const AgreementStats s = agreement(human, automated);
  if (as_json) {
    nlohmann::json doc = {{"count", s.count},         {"mean_human", s.mean_a},
                          {"mean_auto", s.mean_b},    {"pearson_r", s.pearson_r},
                          {"mean_abs_diff", s.mean_abs_diff}};
    out << doc.dump() << '\n';
  } else {
    out << fmt::format("records        {}\nmean_human     {:.1f}\nmean_auto      {:.1f}\npearson_r      {:.3f}\n"
                       "mean_abs_diff  {:.1f}\n",
                       s.count, s.mean_a, s.mean_b, s.pearson_r, s.mean_abs_diff);
  }
  return kOk;
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"Oral reading fluency scoring: normalization, WER, WCPM and agreement statistics", "orf"};
  app.require_subcommand(1);

  std::vector<std::string> normalize_paths;
  auto* normalize_cmd = app.add_subcommand("normalize", "print normalized tokens, one input line per output line");
  normalize_cmd->add_option("paths", normalize_paths, "UTF-8 text files")->required();

  std::string ref_path, hyp_path;
  bool percent = false, wer_json = false;
  auto* wer_cmd = app.add_subcommand("wer", "word error rate of a hypothesis against a reference");
  wer_cmd->add_option("--ref", ref_path, "reference text file")->required();
  wer_cmd->add_option("--hyp", hyp_path, "hypothesis text file")->required();
  wer_cmd->add_flag("--percent", percent, "print WER as a percentage");
  wer_cmd->add_flag("--json", wer_json, "print the full breakdown as JSON");

  ScoreArgs score_args;
  auto* score_cmd = app.add_subcommand("score", "WCPM for a single reading");
  score_cmd->add_option("--words", score_args.words, "number of words in the story");
  score_cmd->add_option("--story", score_args.story, "story text file (its token count gives the words)");
  score_cmd->add_option("--errors", score_args.errors, "human error count");
  score_cmd->add_option("--wer", score_args.wer_fraction, "WER as a fraction")->check(CLI::NonNegativeNumber);
  score_cmd->add_option("--spoken", score_args.spoken, "human transcript; errors counted against --story");
  score_cmd->add_option("--transcript", score_args.transcript, "ASR transcript; WER taken against --story");
  score_cmd->add_option("--duration", score_args.duration, "reading duration in seconds");
  score_cmd->add_option("--audio", score_args.audio, "WAV file to take the duration from");

  RunConfig batch_cfg;
  auto* batch_cmd = app.add_subcommand("batch", "score every recording in a manifest");
  add_pipeline_flags(*batch_cmd, batch_cfg);

  RunConfig report_cfg;
  auto* report_cmd = app.add_subcommand("report", "score a manifest and emit a report, optionally with alignments");
  add_pipeline_flags(*report_cmd, report_cfg);
  report_cmd->add_flag("--alignments", report_cfg.alignments, "include story-vs-transcript alignments");

  RunConfig eval_cfg;
  auto* eval_cmd =
      app.add_subcommand("eval-transcription", "WER of ASR transcripts against human transcripts as ground truth");
  add_pipeline_flags(*eval_cmd, eval_cfg);

  std::string results_path;
  bool compare_json = false;
  auto* compare_cmd = app.add_subcommand("compare", "agreement between human and automated WCPM in batch results");
  compare_cmd->add_option("--results", results_path, "batch output (csv or json)")->required();
  compare_cmd->add_flag("--json", compare_json, "print full-precision JSON");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "orf: " << e.what() << "\n" << sub->help();
    return kValidation;
  }

  try {
    if (*normalize_cmd) return cmd_normalize(normalize_paths, out);
    if (*wer_cmd) return cmd_wer(ref_path, hyp_path, percent, wer_json, out);
    if (*score_cmd) return cmd_score(score_args, out);
    if (*batch_cmd) return cmd_batch(batch_cfg, env, out, err);
    if (*report_cmd) return cmd_batch(report_cfg, env, out, err);
    if (*eval_cmd) return cmd_eval(eval_cfg, env, out, err);
    if (*compare_cmd) return cmd_compare(results_path, compare_json, out, err);
  } catch (const BackendError& e) {
    err << "orf: backend error: " << e.what() << '\n';
    return kBackend;
  } catch (const Error& e) {
    err << "orf: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

}  // namespace orf::cli
