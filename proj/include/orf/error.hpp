#pragma once

#include <stdexcept>
#include <string>

namespace orf {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text is not valid UTF-8.
class EncodingError : public Error {
 public:
  EncodingError(const std::string& what, std::size_t byte_offset)
      : Error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// A rate was requested against an empty reference (N == 0).
class EmptyReferenceError : public Error {
 public:
  using Error::Error;
};

class InvalidDurationError : public Error {
 public:
  using Error::Error;
};

/// Statistics were requested over inputs that do not support them
/// (empty cohort, length mismatch, zero variance).
class StatisticsError : public Error {
 public:
  using Error::Error;
};

/// An alignment does not belong to the sequences it was rendered against.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid manifest content. line() is 1-based, 0 when the
/// problem is not tied to a single line.
class ManifestError : public Error {
 public:
  ManifestError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A transcription backend failed to produce a transcript.
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what, int exit_status = 0,
                        std::string stderr_text = {})
      : Error(what), exit_status_(exit_status), stderr_(std::move(stderr_text)) {}
  int exit_status() const { return exit_status_; }
  const std::string& stderr_text() const { return stderr_; }

 private:
  int exit_status_;
  std::string stderr_;
};

}  // namespace orf
