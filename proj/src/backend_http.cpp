#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "orf/error.hpp"
#include "orf/ingest.hpp"

namespace orf {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw BackendError("malformed backend URL: " + url);
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

RawText fetch_over_http(const RecordingRecord& record, const HttpEndpointBackend& backend) {
  std::ifstream in(*record.audio_path, std::ios::binary);
  if (!in) throw BackendError("cannot read audio file " + record.audio_path->string());
  std::ostringstream body;
  body << in.rdbuf();

  const SplitUrl target = split_url(backend.url);
  httplib::Client client(target.origin);
  if (!client.is_valid()) throw BackendError("unsupported backend URL: " + backend.url);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(backend.timeout_seconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (backend.auth_header) {
    const std::size_t colon = backend.auth_header->find(':');
    if (colon == std::string::npos) throw BackendError("auth header must look like \"Name: value\"");
    std::string value = backend.auth_header->substr(colon + 1);
    value.erase(0, value.find_first_not_of(' '));
    headers.emplace(backend.auth_header->substr(0, colon), value);
  }

  auto res = client.Post(target.path, headers, body.str(), "audio/wav");
  if (!res) {
    const bool timed_out = res.error() == httplib::Error::ConnectionTimeout || res.error() == httplib::Error::Read;
    throw BackendError("HTTP request to " + backend.url + (timed_out ? " timed out or was cut off: " : " failed: ") +
                       httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300)
    throw BackendError("HTTP backend returned status " + std::to_string(res->status), res->status, res->body);

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error&) {
    throw BackendError("HTTP backend response is not JSON", res->status, res->body);
  }
  if (!doc.is_object() || !doc.contains("text") || !doc["text"].is_string())
    throw BackendError("HTTP backend response has no string \"text\" field", res->status, res->body);
  return {doc["text"].get<std::string>(), SourceKind::AsrTranscript};
}

}  // namespace orf
