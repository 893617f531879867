#include "orf/textnorm.hpp"

#include <algorithm>
#include <stdexcept>

#include "orf/error.hpp"

namespace orf {
namespace unicode {
namespace {

struct CodeRange {
  char32_t lo;
  char32_t hi;
};

struct CaseMapping {
  char32_t from;
  char32_t to;
};

#include "unicode_tables.inc"

template <std::size_t N>
bool in_ranges(const CodeRange (&table)[N], char32_t cp) {
  auto it = std::upper_bound(std::begin(table), std::end(table), cp,
                             [](char32_t v, const CodeRange& r) { return v < r.lo; });
  if (it == std::begin(table)) return false;
  --it;
  return cp <= it->hi;
}

}  // namespace

bool is_punctuation(char32_t cp) { return in_ranges(kPunctuation, cp); }

bool is_letter(char32_t cp) {
  if (cp < 0x80) return (cp | 0x20) >= 'a' && (cp | 0x20) <= 'z';
  return in_ranges(kLetterOrMark, cp);
}

bool is_whitespace(char32_t cp) { return in_ranges(kWhitespace, cp); }

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 0x20 : cp;
  auto it = std::lower_bound(std::begin(kLowercase), std::end(kLowercase), cp,
                             [](const CaseMapping& m, char32_t v) { return m.from < v; });
  if (it != std::end(kLowercase) && it->from == cp) return it->to;
  return cp;
}

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto lead = static_cast<unsigned char>(bytes[i]);
    if (lead < 0x80) {
      out.push_back(lead);
      ++i;
      continue;
    }
    std::size_t len;
    char32_t cp;
    char32_t min;
    if ((lead & 0xE0) == 0xC0) {
      len = 2, cp = lead & 0x1F, min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
      len = 3, cp = lead & 0x0F, min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
      len = 4, cp = lead & 0x07, min = 0x10000;
    } else {
      throw EncodingError("invalid UTF-8 lead byte at offset " + std::to_string(i), i);
    }
    if (i + len > n) throw EncodingError("truncated UTF-8 sequence at offset " + std::to_string(i), i);
    for (std::size_t k = 1; k < len; ++k) {
      const auto cont = static_cast<unsigned char>(bytes[i + k]);
      if ((cont & 0xC0) != 0x80)
        throw EncodingError("invalid UTF-8 continuation byte at offset " + std::to_string(i + k), i + k);
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (cp < min) throw EncodingError("overlong UTF-8 sequence at offset " + std::to_string(i), i);
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      throw EncodingError("invalid code point at offset " + std::to_string(i), i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace unicode

namespace {

constexpr char32_t kApostrophe = U'\'';
constexpr char32_t kHyphen = U'-';

char32_t fold(char32_t cp) {
  switch (cp) {
    case 0x2018:  // left single quotation mark
    case 0x2019:  // right single quotation mark
      return kApostrophe;
    case 0x2010:  // hyphen
    case 0x2011:  // non-breaking hyphen
      return kHyphen;
    default:
      return unicode::to_lower(cp);
  }
}

}  // namespace

TokenSequence normalize(std::string_view content) {
  std::u32string text = unicode::decode_utf8(content);
  for (auto& cp : text) cp = fold(cp);

  std::vector<std::string> tokens;
  std::string current;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char32_t cp = text[i];
    if (unicode::is_whitespace(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (cp == kApostrophe || cp == kHyphen) {
      const bool interior = i > 0 && i + 1 < n && unicode::is_letter(text[i - 1]) &&
                            unicode::is_letter(text[i + 1]);
      if (!interior) continue;
    } else if (unicode::is_punctuation(cp)) {
      continue;
    }
    unicode::append_utf8(current, cp);
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return TokenSequence(std::move(tokens));
}

TokenSequence TokenSequence::from_tokens(std::vector<std::string> tokens) {
  for (const auto& token : tokens) {
    const TokenSequence canonical = normalize(token);
    if (canonical.size() != 1 || canonical[0] != token)
      throw std::invalid_argument("token is not in normalized form: \"" + token + "\"");
  }
  return TokenSequence(std::move(tokens));
}

std::string TokenSequence::render() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens_[i];
  }
  return out;
}

}  // namespace orf
