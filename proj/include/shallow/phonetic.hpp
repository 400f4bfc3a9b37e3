#pragma once

// Phonetic fabrication: three normalized distances between the Metaphone
// encodings of the reference and the hypothesis.

#include <string>
#include <vector>

#include "shallow/double_metaphone.hpp"
#include "shallow/metaphone.hpp"
#include "shallow/string_distance.hpp"
#include "shallow/text.hpp"

namespace shallow {

enum class PhoneticCodec { kMetaphone, kDoubleMetaphonePrimary };

struct PhoneticOptions {
  PhoneticCodec codec = PhoneticCodec::kMetaphone;
  // Tokens that encode to nothing (digits, symbols) are emitted verbatim
  // instead of being dropped.
  bool keep_unencodable = false;
};

struct PhoneticBreakdown {
  std::string encoded_ref;
  std::string encoded_hyp;
  double h_n = 0.0;
  double l_n = 0.0;
  double jw = 1.0;
  double pf = 0.0;
  bool operator==(const PhoneticBreakdown&) const = default;
};

inline std::string encode_token(const std::string& token, PhoneticCodec codec) {
  switch (codec) {
    case PhoneticCodec::kDoubleMetaphonePrimary:
      return double_metaphone(token).primary;
    case PhoneticCodec::kMetaphone:
    default:
      return metaphone(token);
  }
}

// Each token is encoded on its own; the codes are joined with single spaces.
inline std::string metaphone_encode(const TokenSequence& tokens, const PhoneticOptions& opt = {}) {
  std::vector<std::string> codes;
  codes.reserve(tokens.size());
  for (const std::string& t : tokens) {
    std::string code = encode_token(t, opt.codec);
    if (code.empty() && opt.keep_unencodable) {
      code = t;
      for (char& c : code)
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    if (!code.empty()) codes.push_back(std::move(code));
  }
  return join(codes);
}

inline std::u32string to_code_points(const std::string& utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::u32string out;
  for (UChar32 c : detail::code_points(s)) out.push_back(static_cast<char32_t>(c));
  return out;
}

inline PhoneticBreakdown phonetic_from_codes(std::string encoded_ref, std::string encoded_hyp) {
  PhoneticBreakdown out;
  out.encoded_ref = std::move(encoded_ref);
  out.encoded_hyp = std::move(encoded_hyp);
  const std::u32string a = to_code_points(out.encoded_ref);
  const std::u32string b = to_code_points(out.encoded_hyp);
  if (a == b) return out;
  out.h_n = hamming_normalized(a, b);
  out.l_n = levenshtein_normalized(a, b);
  out.jw = jaro_winkler(a, b);
  out.pf = (out.h_n + out.l_n + (1.0 - out.jw)) / 3.0;
  return out;
}

inline PhoneticBreakdown phonetic_fabrication(const TokenSequence& ref, const TokenSequence& hyp,
                                              const PhoneticOptions& opt = {}) {
  return phonetic_from_codes(metaphone_encode(ref, opt), metaphone_encode(hyp, opt));
}

}  // namespace shallow
