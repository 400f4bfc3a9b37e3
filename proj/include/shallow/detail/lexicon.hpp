#pragma once

// Frozen word lists used by the reference backend. Bump kLexiconVersion on
// any edit: the lists feed NLI labels, relation sets and grammar counts.

#include <string>
#include <string_view>
#include <unordered_set>

namespace shallow::detail {

inline constexpr std::string_view kLexiconVersion = "lexicon-1";

inline const std::unordered_set<std::string>& function_words() {
  static const std::unordered_set<std::string> words{
      "a",     "an",    "the",   "and",   "or",    "but",   "nor",    "of",    "to",
      "in",    "on",    "at",    "for",   "with",  "by",    "from",   "up",    "about",
      "into",  "over",  "as",    "so",    "than",  "too",   "very",   "just",  "then",
      "there", "here",  "this",  "that",  "these", "those", "i",      "me",    "my",
      "mine",  "we",    "us",    "our",   "you",   "your",  "he",     "him",   "his",
      "she",   "her",   "it",    "its",   "they",  "them",  "their",  "is",    "am",
      "are",   "was",   "were",  "be",    "been",  "being", "have",   "has",   "had",
      "do",    "does",  "did",   "will",  "would", "shall", "should", "can",   "could",
      "may",   "might", "must",  "if",    "when",  "while", "which",  "who",   "whom",
      "what",  "where", "how",   "all",   "some",  "any",   "each",   "every", "also",
      "out",   "off",   "again", "such",  "own",   "same",  "other",  "only",  "both",
      "um",    "uh",    "uhm",   "er",    "ah",    "hmm",   "mm"};
  return words;
}

inline const std::unordered_set<std::string>& negation_words() {
  static const std::unordered_set<std::string> words{"not", "no", "never", "n't", "cannot"};
  return words;
}

inline bool is_negation(std::string_view token) {
  if (negation_words().contains(std::string(token))) return true;
  return token.size() > 3 && token.ends_with("n't");
}

inline bool is_function_word(std::string_view token) {
  return function_words().contains(std::string(token));
}

// Base forms whose third-person singular form differs. Subject-verb agreement
// rules are checked against these and their derived -s forms.
inline const std::unordered_set<std::string>& agreement_verbs() {
  static const std::unordered_set<std::string> words{
      "go",     "do",      "have",   "say",    "make",   "take",   "come",   "see",
      "know",   "get",     "give",   "find",   "think",  "tell",   "become", "leave",
      "feel",   "bring",   "begin",  "keep",   "hold",   "write",  "stand",  "hear",
      "let",    "mean",    "set",    "meet",   "run",    "pay",    "sit",    "speak",
      "lie",    "lead",    "read",   "grow",   "lose",   "fall",   "send",   "build",
      "understand", "draw", "break", "spend",  "cut",    "rise",   "drive",  "buy",
      "wear",   "choose",  "sing",   "ride",   "eat",    "drink",  "sleep",  "swim",
      "walk",   "talk",    "play",   "work",   "live",   "love",   "like",   "want",
      "need",   "look",    "watch",  "help",   "call",   "try",    "ask",    "move",
      "open",   "close",   "start",  "stop",   "turn",   "show",   "believe","happen",
      "carry",  "cook",    "clean",  "paint",  "jump",   "laugh",  "cry",    "study",
      "teach",  "learn",   "fix",    "wash",   "push",   "pull",   "fly",    "dance",
      "enjoy",  "visit",   "travel", "finish", "wait",   "plan",   "agree",  "smile",
      "bake",   "climb",   "rotate", "fight",  "throw",  "catch",  "forget", "remember",
      "wake",   "hope",    "win",    "join",   "kick",   "pick",   "fill"};
  return words;
}

inline std::string third_person_singular(const std::string& base) {
  if (base == "have") return "has";
  if (base == "be") return "is";
  auto ends = [&](std::string_view s) { return base.ends_with(s); };
  if (ends("s") || ends("x") || ends("z") || ends("ch") || ends("sh") || ends("o"))
    return base + "es";
  if (base.size() > 1 && base.back() == 'y') {
    const char before = base[base.size() - 2];
    const bool vowel = before == 'a' || before == 'e' || before == 'i' || before == 'o' || before == 'u';
    if (!vowel) return base.substr(0, base.size() - 1) + "ies";
  }
  return base + "s";
}

inline const std::unordered_set<std::string>& third_person_forms() {
  static const std::unordered_set<std::string> forms = [] {
    std::unordered_set<std::string> out{"is", "has", "does", "was"};
    for (const auto& v : agreement_verbs()) out.insert(third_person_singular(v));
    return out;
  }();
  return forms;
}

inline const std::unordered_set<std::string>& plural_forms() {
  static const std::unordered_set<std::string> forms = [] {
    std::unordered_set<std::string> out{"are", "were", "have", "do"};
    for (const auto& v : agreement_verbs()) out.insert(v);
    return out;
  }();
  return forms;
}

// Vowel-initial words that still take "a" (pronounced with a leading glide).
inline const std::unordered_set<std::string>& a_exceptions() {
  static const std::unordered_set<std::string> words{
      "one",   "once",    "unit",    "united", "university", "unique", "use",
      "used",  "useful",  "user",    "usual",  "union",      "uniform", "euro",
      "european", "unicorn", "utility", "usb",  "ufo",        "eu",     "unanimous"};
  return words;
}

inline const std::unordered_set<std::string>& english_words() {
  static const std::unordered_set<std::string> words = [] {
    static const char kRaw[] =
#include "shallow/detail/wordlist_en.inc"
        ;
    const std::string_view kList(kRaw, sizeof(kRaw) - 1);
    std::unordered_set<std::string> out;
    out.reserve(60000);
    std::size_t start = 0;
    while (start < kList.size()) {
      std::size_t end = kList.find(' ', start);
      if (end == std::string_view::npos) end = kList.size();
      if (end > start) out.emplace(kList.substr(start, end - start));
      start = end + 1;
    }
    return out;
  }();
  return words;
}

}  // namespace shallow::detail
