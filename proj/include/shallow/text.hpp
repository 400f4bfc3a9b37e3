#pragma once

// Canonical text forms and the transcript record shared by every metric.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>

namespace shallow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One reference/hypothesis utterance pair. Either side may be empty.
struct TranscriptPair {
  std::string id;
  std::string reference;
  std::string hypothesis;
  std::optional<std::string> dataset;
  std::optional<std::string> model;
  // Hallucination category label, only read by the synthetic validation check.
  std::optional<std::string> category;
};

struct TokenSequence {
  std::vector<std::string> tokens;
  std::string source_text;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens[i]; }
  auto begin() const { return tokens.begin(); }
  auto end() const { return tokens.end(); }

  friend bool operator==(const TokenSequence& a, const TokenSequence& b) {
    return a.tokens == b.tokens;
  }
};

namespace detail {

inline const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr)
    throw Error("ICU NFC normalizer unavailable");
  return *n;
}

inline icu::UnicodeString to_nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  return U_FAILURE(status) ? s : out;
}

inline bool is_word_char(UChar32 c) {
  if (u_isalnum(c)) return true;
  auto mask = U_GET_GC_MASK(c);
  return (mask & U_GC_M_MASK) != 0;
}

inline bool is_apostrophe(UChar32 c) { return c == 0x27 || c == 0x2019; }

inline std::vector<UChar32> code_points(const icu::UnicodeString& s) {
  std::vector<UChar32> cps;
  cps.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    cps.push_back(c);
    i += U16_LENGTH(c);
  }
  return cps;
}

inline std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace detail

// Lowercase, NFC, punctuation stripped (internal apostrophes kept as '),
// whitespace collapsed and trimmed. Total and idempotent; invalid UTF-8 is
// decoded with replacement characters.
inline std::string normalize(std::string_view text) {
  if (text.empty()) return {};
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s = detail::to_nfc(s);
  s.toLower(icu::Locale::getRoot());
  s = detail::to_nfc(s);

  const std::vector<UChar32> cps = detail::code_points(s);
  icu::UnicodeString out;
  bool pending_space = false;
  for (std::size_t k = 0; k < cps.size(); ++k) {
    const UChar32 c = cps[k];
    if (u_isUWhiteSpace(c)) {
      pending_space = true;
      continue;
    }
    if (detail::is_apostrophe(c)) {
      const bool internal = k > 0 && k + 1 < cps.size() &&
                            detail::is_word_char(cps[k - 1]) &&
                            detail::is_word_char(cps[k + 1]);
      if (!internal) continue;
      out.append(static_cast<UChar32>(0x27));
      continue;
    }
    if (u_ispunct(c)) continue;
    if (pending_space && !out.isEmpty()) out.append(static_cast<UChar32>(0x20));
    pending_space = false;
    out.append(c);
  }
  return detail::to_utf8(detail::to_nfc(out));
}

// Grammar-check form: NFC and whitespace collapse only. Case and punctuation
// are preserved because punctuation findings are scored.
inline std::string normalize_preserving_punctuation(std::string_view text) {
  if (text.empty()) return {};
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s = detail::to_nfc(s);
  icu::UnicodeString out;
  bool pending_space = false;
  for (UChar32 c : detail::code_points(s)) {
    if (u_isUWhiteSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.isEmpty()) out.append(static_cast<UChar32>(0x20));
    pending_space = false;
    out.append(c);
  }
  return detail::to_utf8(out);
}

// Splits an already-normalized string on single spaces.
inline TokenSequence tokenize(std::string_view normalized) {
  TokenSequence seq;
  seq.source_text = std::string(normalized);
  std::size_t start = 0;
  while (start < normalized.size()) {
    std::size_t end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) seq.tokens.emplace_back(normalized.substr(start, end - start));
    start = end + 1;
  }
  return seq;
}

inline TokenSequence normalize_and_tokenize(std::string_view raw) {
  return tokenize(normalize(raw));
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace shallow
