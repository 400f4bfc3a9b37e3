#pragma once

// Classic Metaphone. The rule table follows the widely used jellyfish
// implementation so encoded strings agree with published metric values.

#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "shallow/text.hpp"

namespace shallow {

namespace detail {

// NFKD then keep ASCII only: "café" -> "cafe". Case is folded to lower.
inline std::string ascii_fold(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkd = icu::Normalizer2::getNFKDInstance(status);
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (U_SUCCESS(status) && nfkd != nullptr) {
    icu::UnicodeString d = nfkd->normalize(s, status);
    if (U_SUCCESS(status)) s = d;
  }
  std::string out;
  for (int32_t i = 0; i < s.length(); ++i) {
    const char16_t c = s.charAt(i);
    if (c < 0x80) {
      char a = static_cast<char>(c);
      if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
      out.push_back(a);
    }
  }
  return out;
}

constexpr bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

constexpr bool one_of(char c, std::string_view set) {
  return c != '\0' && set.find(c) != std::string_view::npos;
}

}  // namespace detail

// Encodes `text` (already lowercase ASCII-foldable). Spaces separate words:
// vowels are kept only at the start of the string or after a space, and runs
// of spaces collapse. Characters without a rule (digits, symbols) produce no
// output.
inline std::string metaphone(std::string_view text) {
  std::string s = detail::ascii_fold(text);
  if (s.starts_with("kn") || s.starts_with("gn") || s.starts_with("pn") ||
      s.starts_with("wr") || s.starts_with("ae"))
    s.erase(0, 1);

  using detail::is_vowel;
  using detail::one_of;
  std::string out;
  const std::size_t n = s.size();
  // '\0' marks "past the end".
  auto at = [&](std::size_t k) -> char { return k < n ? s[k] : '\0'; };

  for (std::size_t i = 0; i < n; ++i) {
    const char c = s[i];
    const char next = at(i + 1);
    const char nextnext = at(i + 2);
    const char prev = i > 0 ? s[i - 1] : '\0';

    if (c == next && c != 'c') continue;

    switch (c) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        if (i == 0 || prev == ' ') out.push_back(c);
        break;
      case 'b':
        if (!(i != 0 && prev == 'm') || next != '\0') out.push_back('b');
        break;
      case 'c':
        if ((next == 'i' && nextnext == 'a') || next == 'h') {
          out.push_back('x');
          ++i;
        } else if (one_of(next, "iey")) {
          out.push_back('s');
          ++i;
        } else {
          out.push_back('k');
        }
        break;
      case 'd':
        if (next == 'g' && one_of(nextnext, "iey")) {
          out.push_back('j');
          i += 2;
        } else {
          out.push_back('t');
        }
        break;
      case 'f': case 'j': case 'l': case 'm': case 'n': case 'r':
        out.push_back(c);
        break;
      case 'g':
        if (one_of(next, "iey")) {
          out.push_back('j');
        } else if (next == 'h' && nextnext != '\0' && !is_vowel(nextnext)) {
          ++i;
        } else if (next == 'n' && nextnext == '\0') {
          ++i;
        } else {
          out.push_back('k');
        }
        break;
      case 'h':
        if (i == 0 || is_vowel(next) || !is_vowel(prev)) out.push_back('h');
        break;
      case 'k':
        if (i == 0 || prev != 'c') out.push_back('k');
        break;
      case 'p':
        if (next == 'h') {
          out.push_back('f');
          ++i;
        } else {
          out.push_back('p');
        }
        break;
      case 'q':
        out.push_back('k');
        break;
      case 's':
        if (next == 'h') {
          out.push_back('x');
          ++i;
        } else if (next == 'i' && one_of(nextnext, "oa")) {
          out.push_back('x');
          i += 2;
        } else {
          out.push_back('s');
        }
        break;
      case 't':
        if (next == 'i' && one_of(nextnext, "oa")) {
          out.push_back('x');
        } else if (next == 'h') {
          out.push_back('0');
          ++i;
        } else if (next != 'c' || nextnext != 'h') {
          out.push_back('t');
        }
        break;
      case 'v':
        out.push_back('f');
        break;
      case 'w':
        if (i == 0 && next == 'h') {
          ++i;
          out.push_back('w');
        } else if (is_vowel(next)) {
          out.push_back('w');
        }
        break;
      case 'x':
        if (i == 0) {
          if (next == 'h' || (next == 'i' && one_of(nextnext, "oa")))
            out.push_back('x');
          else
            out.push_back('s');
        } else {
          out.push_back('k');
          out.push_back('s');
        }
        break;
      case 'y':
        if (is_vowel(next)) out.push_back('y');
        break;
      case 'z':
        out.push_back('s');
        break;
      case ' ':
        if (!out.empty() && out.back() != ' ') out.push_back(' ');
        break;
      default:
        break;
    }
  }
  for (char& ch : out)
    if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
  return out;
}

}  // namespace shallow
