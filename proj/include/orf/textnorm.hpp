#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace orf {

enum class SourceKind { ReferenceStory, HumanTranscript, AsrTranscript };

/// Unnormalized UTF-8 text as read from a story file, a manifest, or a
/// transcription backend.
struct RawText {
  std::string content;
  SourceKind source_kind = SourceKind::ReferenceStory;

  bool operator==(const RawText&) const = default;
};

/// Canonical word tokens. Every token is nonempty, lowercase, contains no
/// whitespace and no punctuation other than apostrophes or hyphens that sit
/// between two letters.
class TokenSequence {
 public:
  TokenSequence() = default;

  /// Wraps already-normalized tokens. Throws std::invalid_argument if any
  /// token is not a fixed point of normalization.
  static TokenSequence from_tokens(std::vector<std::string> tokens);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }

  /// Tokens joined by single spaces.
  std::string render() const;

  bool operator==(const TokenSequence&) const = default;

 private:
  friend TokenSequence normalize(std::string_view content);
  explicit TokenSequence(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  std::vector<std::string> tokens_;
};

/// Lowercases, strips punctuation (keeping interior apostrophes/hyphens) and
/// splits on Unicode whitespace. Throws EncodingError on invalid UTF-8.
TokenSequence normalize(std::string_view content);
inline TokenSequence normalize(const RawText& raw) { return normalize(raw.content); }

inline std::size_t token_count(const TokenSequence& seq) { return seq.size(); }

namespace unicode {

bool is_punctuation(char32_t cp);
bool is_letter(char32_t cp);  // general category L* or M*
bool is_whitespace(char32_t cp);
char32_t to_lower(char32_t cp);

/// Strict decoder: rejects overlong forms, surrogates and values above U+10FFFF.
std::u32string decode_utf8(std::string_view bytes);
void append_utf8(std::string& out, char32_t cp);

}  // namespace unicode

}  // namespace orf
