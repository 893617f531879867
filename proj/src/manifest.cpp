#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "orf/error.hpp"
#include "orf/ingest.hpp"

namespace orf {
namespace {

using nlohmann::json;

std::string at_line(std::size_t line, const std::string& message) {
  return "manifest line " + std::to_string(line) + ": " + message;
}

// Absent and null are both "not given".
const json* field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  const json* v = field(obj, key);
  if (!v) throw ManifestError(at_line(line, std::string("missing required field \"") + key + "\""), line);
  if (!v->is_string()) throw ManifestError(at_line(line, std::string("field \"") + key + "\" must be a string"), line);
  return v->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::size_t line) {
  const json* v = field(obj, key);
  if (!v) return std::nullopt;
  if (!v->is_string()) throw ManifestError(at_line(line, std::string("field \"") + key + "\" must be a string"), line);
  return v->get<std::string>();
}

RecordingRecord parse_record(const json& obj, std::size_t line, const std::filesystem::path& base_dir) {
  if (!obj.is_object()) throw ManifestError(at_line(line, "expected a JSON object"), line);

  RecordingRecord rec;
  rec.id = require_string(obj, "id", line);
  if (rec.id.empty()) throw ManifestError(at_line(line, "field \"id\" must not be empty"), line);
  rec.reference_text = {require_string(obj, "reference_text", line), SourceKind::ReferenceStory};
  if (auto s = optional_string(obj, "human_transcript", line)) rec.human_transcript = RawText{*s, SourceKind::HumanTranscript};
  if (auto s = optional_string(obj, "asr_transcript", line)) rec.asr_transcript = RawText{*s, SourceKind::AsrTranscript};
  if (auto s = optional_string(obj, "audio_path", line)) {
    std::filesystem::path p(*s);
    rec.audio_path = (p.is_relative() && !base_dir.empty()) ? base_dir / p : p;
  }

  if (const json* v = field(obj, "human_error_count")) {
    if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0))
      throw ManifestError(at_line(line, "field \"human_error_count\" must be a nonnegative integer"), line);
    rec.human_error_count = v->get<std::size_t>();
  }

  if (const json* v = field(obj, "duration_seconds")) {
    if (!v->is_number()) throw ManifestError(at_line(line, "field \"duration_seconds\" must be a number"), line);
    rec.duration_seconds = v->get<double>();
    if (!(rec.duration_seconds > 0.0) || !std::isfinite(rec.duration_seconds))
      throw ManifestError(at_line(line, "field \"duration_seconds\" must be positive"), line);
  } else if (rec.audio_path) {
    try {
      rec.duration_seconds = probe_wav_duration(*rec.audio_path);
    } catch (const WavError& e) {
      throw ManifestError(at_line(line, std::string("no duration_seconds and audio probe failed: ") + e.what()), line);
    }
  } else {
    throw ManifestError(at_line(line, "record needs \"duration_seconds\" or a WAV \"audio_path\""), line);
  }
  return rec;
}

}  // namespace

std::vector<RecordingRecord> parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<RecordingRecord> records;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ManifestError(at_line(line_no, std::string("malformed JSON: ") + e.what()), line_no);
    }
    RecordingRecord rec = parse_record(obj, line_no, base_dir);
    if (auto [it, inserted] = seen.emplace(rec.id, line_no); !inserted)
      throw ManifestError(at_line(line_no, "duplicate id \"" + rec.id + "\" (first seen on line " +
                                               std::to_string(it->second) + ")"),
                          line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<RecordingRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open manifest " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), std::filesystem::absolute(path).parent_path());
}

std::string serialize_manifest(const std::vector<RecordingRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    json obj = json::object();
    obj["id"] = rec.id;
    obj["reference_text"] = rec.reference_text.content;
    if (rec.human_transcript) obj["human_transcript"] = rec.human_transcript->content;
    if (rec.asr_transcript) obj["asr_transcript"] = rec.asr_transcript->content;
    obj["duration_seconds"] = rec.duration_seconds;
    if (rec.human_error_count) obj["human_error_count"] = *rec.human_error_count;
    if (rec.audio_path) obj["audio_path"] = rec.audio_path->string();
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace orf
