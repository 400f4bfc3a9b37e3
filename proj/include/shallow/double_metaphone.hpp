#pragma once

// Double Metaphone (Philips, 2000). Only the primary code feeds the phonetic
// score; the alternate is exposed for completeness. Codes are not truncated.

#include <initializer_list>
#include <string>
#include <string_view>

#include "shallow/metaphone.hpp"

namespace shallow {

struct DoubleMetaphoneCodes {
  std::string primary;
  std::string alternate;
};

namespace detail {

class DoubleMetaphoneEncoder {
 public:
  explicit DoubleMetaphoneEncoder(std::string_view word) {
    for (char c : ascii_fold(word))
      if (c >= 'a' && c <= 'z') word_.push_back(static_cast<char>(c - 'a' + 'A'));
    length_ = static_cast<int>(word_.size());
    last_ = length_ - 1;
    padded_ = word_ + "     ";
    slavo_germanic_ = word_.find('W') != std::string::npos ||
                      word_.find('K') != std::string::npos ||
                      word_.find("CZ") != std::string::npos ||
                      word_.find("WITZ") != std::string::npos;
  }

  DoubleMetaphoneCodes encode() {
    if (length_ == 0) return {};
    int current = 0;
    if (at(0, {"GN", "KN", "PN", "WR", "PS"})) current += 1;
    if (get(0) == 'X') {
      add("S");
      current += 1;
    }
    while (current < length_) current = step(current);
    return {primary_, alternate_};
  }

 private:
  char get(int i) const {
    if (i < 0 || i >= static_cast<int>(padded_.size())) return '\0';
    return padded_[static_cast<std::size_t>(i)];
  }

  bool at(int start, std::initializer_list<std::string_view> options) const {
    if (start < 0) return false;
    for (std::string_view opt : options) {
      const auto s = static_cast<std::size_t>(start);
      if (s + opt.size() <= padded_.size() && std::string_view(padded_).substr(s, opt.size()) == opt)
        return true;
    }
    return false;
  }

  bool is_vowel(int i) const {
    if (i < 0 || i >= length_) return false;
    const char c = word_[static_cast<std::size_t>(i)];
    return c == 'A' || c == 'E' || c == 'I' || c == 'O' || c == 'U' || c == 'Y';
  }

  void add(std::string_view main) { add(main, main); }
  void add(std::string_view main, std::string_view alt) {
    primary_ += main;
    alternate_ += alt;
  }

  int step(int current);
  int step_c(int current);
  int step_g(int current);
  int step_s(int current);

  std::string word_;
  std::string padded_;
  int length_ = 0;
  int last_ = -1;
  bool slavo_germanic_ = false;
  std::string primary_;
  std::string alternate_;
};

inline int DoubleMetaphoneEncoder::step(int current) {
  const char c = get(current);
  switch (c) {
    case 'A': case 'E': case 'I': case 'O': case 'U': case 'Y':
      if (current == 0) add("A");
      return current + 1;
    case 'B':
      add("P");
      return current + (get(current + 1) == 'B' ? 2 : 1);
    case 'C':
      return step_c(current);
    case 'D':
      if (at(current, {"DG"})) {
        if (at(current + 2, {"I", "E", "Y"})) {
          add("J");
          return current + 3;
        }
        add("TK");
        return current + 2;
      }
      add("T");
      return current + (at(current, {"DT", "DD"}) ? 2 : 1);
    case 'F':
      add("F");
      return current + (get(current + 1) == 'F' ? 2 : 1);
    case 'G':
      return step_g(current);
    case 'H':
      if ((current == 0 || is_vowel(current - 1)) && is_vowel(current + 1)) {
        add("H");
        return current + 2;
      }
      return current + 1;
    case 'J': {
      if (at(current, {"JOSE"}) || at(0, {"SAN "})) {
        if ((current == 0 && get(current + 4) == ' ') || at(0, {"SAN "}))
          add("H");
        else
          add("J", "H");
        return current + 1;
      }
      if (current == 0 && !at(current, {"JOSE"})) {
        add("J", "A");
      } else if (is_vowel(current - 1) && !slavo_germanic_ &&
                 (get(current + 1) == 'A' || get(current + 1) == 'O')) {
        add("J", "H");
      } else if (current == last_) {
        add("J", "");
      } else if (!at(current + 1, {"L", "T", "K", "S", "N", "M", "B", "Z"}) &&
                 !at(current - 1, {"S", "K", "L"})) {
        add("J");
      }
      return current + (get(current + 1) == 'J' ? 2 : 1);
    }
    case 'K':
      add("K");
      return current + (get(current + 1) == 'K' ? 2 : 1);
    case 'L':
      if (get(current + 1) == 'L') {
        if ((current == length_ - 3 && at(current - 1, {"ILLO", "ILLA", "ALLE"})) ||
            ((at(last_ - 1, {"AS", "OS"}) || at(last_, {"A", "O"})) &&
             at(current - 1, {"ALLE"}))) {
          add("L", "");
          return current + 2;
        }
        add("L");
        return current + 2;
      }
      add("L");
      return current + 1;
    case 'M':
      add("M");
      if ((at(current - 1, {"UMB"}) && (current + 1 == last_ || at(current + 2, {"ER"}))) ||
          get(current + 1) == 'M')
        return current + 2;
      return current + 1;
    case 'N':
      add("N");
      return current + (get(current + 1) == 'N' ? 2 : 1);
    case 'P':
      if (get(current + 1) == 'H') {
        add("F");
        return current + 2;
      }
      add("P");
      return current + (at(current + 1, {"P", "B"}) ? 2 : 1);
    case 'Q':
      add("K");
      return current + (get(current + 1) == 'Q' ? 2 : 1);
    case 'R':
      if (current == last_ && !slavo_germanic_ && at(current - 2, {"IE"}) &&
          !at(current - 4, {"ME", "MA"}))
        add("", "R");
      else
        add("R");
      return current + (get(current + 1) == 'R' ? 2 : 1);
    case 'S':
      return step_s(current);
    case 'T':
      if (at(current, {"TION"})) {
        add("X");
        return current + 3;
      }
      if (at(current, {"TIA", "TCH"})) {
        add("X");
        return current + 3;
      }
      if (at(current, {"TH"}) || at(current, {"TTH"})) {
        if (at(current + 2, {"OM", "AM"}) || at(0, {"VAN ", "VON "}) || at(0, {"SCH"}))
          add("T");
        else
          add("0", "T");
        return current + 2;
      }
      add("T");
      return current + (at(current + 1, {"T", "D"}) ? 2 : 1);
    case 'V':
      add("F");
      return current + (get(current + 1) == 'V' ? 2 : 1);
    case 'W':
      if (at(current, {"WR"})) {
        add("R");
        return current + 2;
      }
      if (current == 0 && (is_vowel(current + 1) || at(current, {"WH"}))) {
        if (is_vowel(current + 1))
          add("A", "F");
        else
          add("A");
      }
      if ((current == last_ && is_vowel(current - 1)) ||
          at(current - 1, {"EWSKI", "EWSKY", "OWSKI", "OWSKY"}) || at(0, {"SCH"})) {
        add("", "F");
        return current + 1;
      }
      if (at(current, {"WICZ", "WITZ"})) {
        add("TS", "FX");
        return current + 4;
      }
      return current + 1;
    case 'X':
      if (!(current == last_ &&
            (at(current - 3, {"IAU", "EAU"}) || at(current - 2, {"AU", "OU"}))))
        add("KS");
      return current + (at(current + 1, {"C", "X"}) ? 2 : 1);
    case 'Z':
      if (get(current + 1) == 'H') {
        add("J");
        return current + 2;
      }
      if (at(current + 1, {"ZO", "ZI", "ZA"}) ||
          (slavo_germanic_ && current > 0 && get(current - 1) != 'T'))
        add("S", "TS");
      else
        add("S");
      return current + (get(current + 1) == 'Z' ? 2 : 1);
    default:
      return current + 1;
  }
}

inline int DoubleMetaphoneEncoder::step_c(int current) {
  // Germanic "ach" but not "bacher"/"macher" variants.
  if (current > 1 && !is_vowel(current - 2) && at(current - 1, {"ACH"}) &&
      get(current + 2) != 'I' &&
      (get(current + 2) != 'E' || at(current - 2, {"BACHER", "MACHER"}))) {
    add("K");
    return current + 2;
  }
  if (current == 0 && at(current, {"CAESAR"})) {
    add("S");
    return current + 2;
  }
  if (at(current, {"CHIA"})) {
    add("K");
    return current + 2;
  }
  if (at(current, {"CH"})) {
    if (current > 0 && at(current, {"CHAE"})) {
      add("K", "X");
      return current + 2;
    }
    if (current == 0 &&
        (at(current + 1, {"HARAC", "HARIS"}) || at(current + 1, {"HOR", "HYM", "HIA", "HEM"})) &&
        !at(0, {"CHORE"})) {
      add("K");
      return current + 2;
    }
    if (at(0, {"VAN ", "VON "}) || at(0, {"SCH"}) ||
        at(current - 2, {"ORCHES", "ARCHIT", "ORCHID"}) || at(current + 2, {"T", "S"}) ||
        ((at(current - 1, {"A", "O", "U", "E"}) || current == 0) &&
         at(current + 2, {"L", "R", "N", "M", "B", "H", "F", "V", "W", " "}))) {
      add("K");
    } else if (current > 0) {
      if (at(0, {"MC"}))
        add("K");
      else
        add("X", "K");
    } else {
      add("X");
    }
    return current + 2;
  }
  if (at(current, {"CZ"}) && !at(current - 2, {"WICZ"})) {
    add("S", "X");
    return current + 2;
  }
  if (at(current + 1, {"CIA"})) {
    add("X");
    return current + 3;
  }
  if (at(current, {"CC"}) && !(current == 1 && get(0) == 'M')) {
    if (at(current + 2, {"I", "E", "H"}) && !at(current + 2, {"HU"})) {
      if ((current == 1 && get(current - 1) == 'A') || at(current - 1, {"UCCEE", "UCCES"}))
        add("KS");
      else
        add("X");
      return current + 3;
    }
    add("K");
    return current + 2;
  }
  if (at(current, {"CK", "CG", "CQ"})) {
    add("K");
    return current + 2;
  }
  if (at(current, {"CI", "CE", "CY"})) {
    if (at(current, {"CIO", "CIE", "CIA"}))
      add("S", "X");
    else
      add("S");
    return current + 2;
  }
  add("K");
  if (at(current + 1, {" C", " Q", " G"})) return current + 3;
  if (at(current + 1, {"C", "K", "Q"}) && !at(current + 1, {"CE", "CI"})) return current + 2;
  return current + 1;
}

inline int DoubleMetaphoneEncoder::step_g(int current) {
  if (get(current + 1) == 'H') {
    if (current > 0 && !is_vowel(current - 1)) {
      add("K");
      return current + 2;
    }
    if (current == 0) {
      add(get(current + 2) == 'I' ? "J" : "K");
      return current + 2;
    }
    if ((current > 1 && at(current - 2, {"B", "H", "D"})) ||
        (current > 2 && at(current - 3, {"B", "H", "D"})) ||
        (current > 3 && at(current - 4, {"B", "H"}))) {
      return current + 2;
    }
    if (current > 2 && get(current - 1) == 'U' && at(current - 3, {"C", "G", "L", "R", "T"}))
      add("F");
    else if (current > 0 && get(current - 1) != 'I')
      add("K");
    return current + 2;
  }
  if (get(current + 1) == 'N') {
    if (current == 1 && is_vowel(0) && !slavo_germanic_) {
      add("KN", "N");
    } else if (!at(current + 2, {"EY"}) && get(current + 1) != 'Y' && !slavo_germanic_) {
      add("N", "KN");
    } else {
      add("KN");
    }
    return current + 2;
  }
  if (at(current + 1, {"LI"}) && !slavo_germanic_) {
    add("KL", "L");
    return current + 2;
  }
  if (current == 0 &&
      (get(current + 1) == 'Y' ||
       at(current + 1, {"ES", "EP", "EB", "EL", "EY", "IB", "IL", "IN", "IE", "EI", "ER"}))) {
    add("K", "J");
    return current + 2;
  }
  if ((at(current + 1, {"ER"}) || get(current + 1) == 'Y') &&
      !at(0, {"DANGER", "RANGER", "MANGER"}) && !at(current - 1, {"E", "I"}) &&
      !at(current - 1, {"RGY", "OGY"})) {
    add("K", "J");
    return current + 2;
  }
  if (at(current + 1, {"E", "I", "Y"}) || at(current - 1, {"AGGI", "OGGI"})) {
    if (at(0, {"VAN ", "VON "}) || at(0, {"SCH"}) || at(current + 1, {"ET"}))
      add("K");
    else if (at(current + 1, {"IER "}))
      add("J");
    else
      add("J", "K");
    return current + 2;
  }
  add("K");
  return current + (get(current + 1) == 'G' ? 2 : 1);
}

inline int DoubleMetaphoneEncoder::step_s(int current) {
  if (at(current - 1, {"ISL", "YSL"})) return current + 1;
  if (current == 0 && at(current, {"SUGAR"})) {
    add("X", "S");
    return current + 1;
  }
  if (at(current, {"SH"})) {
    if (at(current + 1, {"HEIM", "HOEK", "HOLM", "HOLZ"}))
      add("S");
    else
      add("X");
    return current + 2;
  }
  if (at(current, {"SIO", "SIA"}) || at(current, {"SIAN"})) {
    if (!slavo_germanic_)
      add("S", "X");
    else
      add("S");
    return current + 3;
  }
  if ((current == 0 && at(current + 1, {"M", "N", "L", "W"})) || at(current + 1, {"Z"})) {
    add("S", "X");
    return current + (at(current + 1, {"Z"}) ? 2 : 1);
  }
  if (at(current, {"SC"})) {
    if (get(current + 2) == 'H') {
      if (at(current + 3, {"OO", "ER", "EN", "UY", "ED", "EM"})) {
        if (at(current + 3, {"ER", "EN"}))
          add("X", "SK");
        else
          add("SK");
        return current + 3;
      }
      if (current == 0 && !is_vowel(3) && get(3) != 'W')
        add("X", "S");
      else
        add("X");
      return current + 3;
    }
    if (at(current + 2, {"I", "E", "Y"})) {
      add("S");
      return current + 3;
    }
    add("SK");
    return current + 3;
  }
  if (current == last_ && at(current - 2, {"AI", "OI"}))
    add("", "S");
  else
    add("S");
  return current + (at(current + 1, {"S", "Z"}) ? 2 : 1);
}

}  // namespace detail

inline DoubleMetaphoneCodes double_metaphone(std::string_view word) {
  return detail::DoubleMetaphoneEncoder(word).encode();
}

}  // namespace shallow
