#pragma once

#include <chrono>
#include <cstdint>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "orf/error.hpp"
#include "orf/textnorm.hpp"

namespace orf {

/// One student reading of one story.
struct RecordingRecord {
  std::string id;
  RawText reference_text;
  std::optional<RawText> human_transcript;
  std::optional<RawText> asr_transcript;
  double duration_seconds = 0.0;
  std::optional<std::size_t> human_error_count;
  std::optional<std::filesystem::path> audio_path;

  /// True when at least one human or automatic source is present.
  bool scoreable() const {
    return human_transcript.has_value() || asr_transcript.has_value() || human_error_count.has_value();
  }

  bool operator==(const RecordingRecord&) const = default;
};

// ---------------------------------------------------------------------------
// Manifest (JSON Lines)

/// Parses a JSON-Lines manifest. Blank lines are skipped, unknown keys are
/// ignored. When duration_seconds is absent it is probed from audio_path;
/// relative audio paths resolve against base_dir.
std::vector<RecordingRecord> parse_manifest(std::string_view text,
                                            const std::filesystem::path& base_dir = {});

/// Reads and parses a manifest file; relative audio paths resolve against the
/// file's directory.
std::vector<RecordingRecord> load_manifest(const std::filesystem::path& path);

/// One JSON object per line, keys in a fixed order, newline-terminated.
std::string serialize_manifest(const std::vector<RecordingRecord>& records);

// ---------------------------------------------------------------------------
// WAV header probe

struct WavFormat {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint32_t data_bytes = 0;

  /// sample_rate * channels * bits_per_sample / 8.
  double byte_rate() const;
  double duration_seconds() const;
};

class WavError : public Error {
 public:
  enum class Kind { Unreadable, NotRiffWave, MissingFmtChunk, MissingDataChunk, ZeroByteRate };
  WavError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Reads RIFF/WAVE little-endian headers only; the sample data is never decoded.
WavFormat parse_wav_header(std::string_view bytes);
WavFormat probe_wav(const std::filesystem::path& path);
double probe_wav_duration(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Transcription backends

struct TranscriptFilesBackend {
  std::filesystem::path directory;
  std::string filename_pattern = "{id}.txt";  // "{id}" is replaced by the record id

  bool operator==(const TranscriptFilesBackend&) const = default;
};

struct ExternalCommandBackend {
  /// Shell command line; "{audio}" is replaced by the shell-quoted audio path.
  std::string command_template;
  std::optional<double> timeout_seconds;

  bool operator==(const ExternalCommandBackend&) const = default;
};

struct HttpEndpointBackend {
  std::string url;
  double timeout_seconds = 30.0;
  std::optional<std::string> auth_header;  // "Name: value"

  bool operator==(const HttpEndpointBackend&) const = default;
};

using AsrBackendConfig = std::variant<TranscriptFilesBackend, ExternalCommandBackend, HttpEndpointBackend>;

/// Parses "files:<dir>", "command:<template>" or "http:<url>". Throws
/// std::invalid_argument on anything else.
AsrBackendConfig parse_backend_spec(std::string_view spec);
std::string describe(const AsrBackendConfig& backend);

/// Obtains an ASR transcript for the record. Throws BackendError on failure.
RawText fetch_transcript(const RecordingRecord& record, const AsrBackendConfig& backend);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// fetch_transcript with up to `retries` extra attempts after a BackendError,
/// waiting 1 s, 2 s, 4 s, ... between attempts.
RawText fetch_transcript_with_retries(const RecordingRecord& record, const AsrBackendConfig& backend,
                                      unsigned retries, const Sleeper& sleep = {});

/// Replaces every "{audio}" in the template with a shell-quoted path.
std::string expand_command(std::string_view command_template, const std::filesystem::path& audio);

}  // namespace orf
