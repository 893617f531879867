#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "orf/error.hpp"
#include "orf/ingest.hpp"
#include "subprocess.hpp"

namespace orf {

// Defined in backend_http.cpp; keeps cpp-httplib out of this translation unit.
RawText fetch_over_http(const RecordingRecord& record, const HttpEndpointBackend& backend);

namespace {

std::string replace_all(std::string_view text, std::string_view needle, std::string_view value) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = text.find(needle, pos);
    if (hit == std::string_view::npos) break;
    out.append(text.substr(pos, hit - pos));
    out.append(value);
    pos = hit + needle.size();
  }
  out.append(text.substr(pos));
  return out;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

const std::filesystem::path& require_audio(const RecordingRecord& record) {
  if (!record.audio_path) throw BackendError("record \"" + record.id + "\" has no audio_path");
  return *record.audio_path;
}

RawText fetch_file(const RecordingRecord& record, const TranscriptFilesBackend& backend) {
  const auto path = backend.directory / replace_all(backend.filename_pattern, "{id}", record.id);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BackendError("transcript file not found: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return {buf.str(), SourceKind::AsrTranscript};
}

RawText fetch_command(const RecordingRecord& record, const ExternalCommandBackend& backend) {
  const std::string command = expand_command(backend.command_template, require_audio(record));
  detail::ProcessResult result;
  try {
    result = detail::run_shell(command, backend.timeout_seconds);
  } catch (const std::system_error& e) {
    throw BackendError(std::string("cannot start transcription command: ") + e.what());
  }
  if (result.timed_out) throw BackendError("transcription command timed out: " + command, -1, result.stderr_text);
  if (result.exit_status != 0) {
    std::string detail = result.stderr_text;
    while (!detail.empty() && (detail.back() == '\n' || detail.back() == '\r')) detail.pop_back();
    throw BackendError("transcription command exited with status " + std::to_string(result.exit_status) +
                           (detail.empty() ? "" : ": " + detail),
                       result.exit_status, result.stderr_text);
  }
  return {std::move(result.stdout_text), SourceKind::AsrTranscript};
}

}  // namespace

std::string expand_command(std::string_view command_template, const std::filesystem::path& audio) {
  return replace_all(command_template, "{audio}", shell_quote(audio.string()));
}

AsrBackendConfig parse_backend_spec(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("backend spec must look like files:<dir>, command:<template> or http:<url>");
  const std::string_view kind = spec.substr(0, colon);
  const std::string rest(spec.substr(colon + 1));
  if (rest.empty()) throw std::invalid_argument("backend spec \"" + std::string(spec) + "\" has no argument");
  if (kind == "files") return TranscriptFilesBackend{rest};
  if (kind == "command") {
    if (rest.find("{audio}") == std::string::npos)
      throw std::invalid_argument("command backend template must contain the {audio} placeholder");
    return ExternalCommandBackend{rest, std::nullopt};
  }
  if (kind == "http") {
    if (rest.rfind("http://", 0) != 0 && rest.rfind("https://", 0) != 0)
      throw std::invalid_argument("http backend needs an http:// or https:// URL");
    return HttpEndpointBackend{rest, 30.0, std::nullopt};
  }
  throw std::invalid_argument("unknown backend kind \"" + std::string(kind) + "\"");
}

std::string describe(const AsrBackendConfig& backend) {
  struct {
    std::string operator()(const TranscriptFilesBackend& b) const { return "files:" + b.directory.string(); }
    std::string operator()(const ExternalCommandBackend& b) const { return "command:" + b.command_template; }
    std::string operator()(const HttpEndpointBackend& b) const { return "http:" + b.url; }
  } visitor;
  return std::visit(visitor, backend);
}

RawText fetch_transcript(const RecordingRecord& record, const AsrBackendConfig& backend) {
  struct {
    const RecordingRecord& record;
    RawText operator()(const TranscriptFilesBackend& b) const { return fetch_file(record, b); }
    RawText operator()(const ExternalCommandBackend& b) const { return fetch_command(record, b); }
    RawText operator()(const HttpEndpointBackend& b) const {
      require_audio(record);
      return fetch_over_http(record, b);
    }
  } visitor{record};
  return std::visit(visitor, backend);
}

RawText fetch_transcript_with_retries(const RecordingRecord& record, const AsrBackendConfig& backend,
                                      unsigned retries, const Sleeper& sleep) {
  std::chrono::milliseconds delay{1000};
  for (unsigned attempt = 0;; ++attempt) {
    try {
      return fetch_transcript(record, backend);
    } catch (const BackendError&) {
      if (attempt >= retries) throw;
    }
    if (sleep)
      sleep(delay);
    else
      std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

}  // namespace orf
