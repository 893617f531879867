#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include "orf/ingest.hpp"

namespace orf {
namespace {

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }

bool read_exact(std::istream& in, unsigned char* dst, std::size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

// Walks the chunk list; the data chunk is skipped over, never read.
WavFormat parse(std::istream& in) {
  std::array<unsigned char, 12> riff{};
  if (!read_exact(in, riff.data(), riff.size()) || std::memcmp(riff.data(), "RIFF", 4) != 0 ||
      std::memcmp(riff.data() + 8, "WAVE", 4) != 0)
    throw WavError(WavError::Kind::NotRiffWave, "not a RIFF/WAVE file");

  WavFormat fmt;
  bool have_fmt = false;
  bool have_data = false;
  std::array<unsigned char, 8> header{};
  while (!(have_fmt && have_data) && read_exact(in, header.data(), header.size())) {
    const std::uint32_t size = le32(header.data() + 4);
    if (std::memcmp(header.data(), "fmt ", 4) == 0) {
      if (size < 16) throw WavError(WavError::Kind::MissingFmtChunk, "fmt chunk is shorter than 16 bytes");
      std::array<unsigned char, 16> body{};
      if (!read_exact(in, body.data(), body.size()))
        throw WavError(WavError::Kind::MissingFmtChunk, "fmt chunk is truncated");
      fmt.format_tag = le16(&body[0]);
      fmt.channels = le16(&body[2]);
      fmt.sample_rate = le32(&body[4]);
      fmt.bits_per_sample = le16(&body[14]);
      have_fmt = true;
      in.seekg(static_cast<std::streamoff>(size - 16 + (size & 1)), std::ios::cur);
    } else {
      if (std::memcmp(header.data(), "data", 4) == 0) {
        fmt.data_bytes = size;
        have_data = true;
      }
      in.seekg(static_cast<std::streamoff>(size) + (size & 1), std::ios::cur);
    }
    if (!in) break;
  }
  if (!have_fmt) throw WavError(WavError::Kind::MissingFmtChunk, "no fmt chunk");
  if (!have_data) throw WavError(WavError::Kind::MissingDataChunk, "no data chunk");
  if (fmt.byte_rate() <= 0.0)
    throw WavError(WavError::Kind::ZeroByteRate, "byte rate is zero (sample rate, channels or bit depth is 0)");
  return fmt;
}

}  // namespace

double WavFormat::byte_rate() const {
  return static_cast<double>(sample_rate) * channels * bits_per_sample / 8.0;
}

double WavFormat::duration_seconds() const { return static_cast<double>(data_bytes) / byte_rate(); }

WavFormat parse_wav_header(std::string_view bytes) {
  std::istringstream in{std::string(bytes)};
  return parse(in);
}

WavFormat probe_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(WavError::Kind::Unreadable, "cannot open " + path.string());
  try {
    return parse(in);
  } catch (const WavError& e) {
    throw WavError(e.kind(), path.string() + ": " + e.what());
  }
}

double probe_wav_duration(const std::filesystem::path& path) { return probe_wav(path).duration_seconds(); }

}  // namespace orf
