#pragma once

// Deterministic built-in backend. It stands in for the model-based
// capabilities with hashed n-gram embeddings and small frozen rule sets, so
// every score is reproducible bit for bit with nothing installed. It carries
// no claim of semantic fidelity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "shallow/backend.hpp"
#include "shallow/detail/lexicon.hpp"
#include "shallow/text.hpp"

namespace shallow {

namespace detail {

inline constexpr std::size_t kReferenceDim = 256;
inline constexpr std::uint64_t kReferenceSeed = 0x5348414c4c4f5731ULL;

// FNV-1a over the seed bytes followed by the data.
inline std::uint64_t seeded_hash(std::string_view data, std::uint64_t seed = kReferenceSeed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int i = 0; i < 8; ++i) {
    h ^= (seed >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline void l2_normalize(Vector& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq <= 0.0) return;
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
}

inline std::vector<std::string> content_tokens(const TokenSequence& seq) {
  std::vector<std::string> out;
  for (const std::string& t : seq)
    if (!is_function_word(t) && !is_negation(t)) out.push_back(t);
  return out;
}

inline std::string strip_word(std::string_view raw) { return normalize(raw); }

}  // namespace detail

// Cosine similarity; 1 for bitwise-identical non-zero vectors, 0 when either
// side is the zero vector.
inline double cosine(const Vector& a, const Vector& b) {
  const std::size_t n = std::min(a.size(), b.size());
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa <= 0.0 || bb <= 0.0) return 0.0;
  return dot / std::sqrt(aa * bb);
}

inline double clamped_cosine(const Vector& a, const Vector& b) {
  return std::clamp(cosine(a, b), 0.0, 1.0);
}

// BERTScore-style greedy matching: precision averages each hypothesis
// vector's best match, recall each reference vector's best match.
inline double greedy_match_f1(const std::vector<Vector>& ref, const std::vector<Vector>& hyp) {
  if (ref.empty() && hyp.empty()) return 1.0;
  if (ref.empty() || hyp.empty()) return 0.0;
  std::vector<double> best_ref(ref.size(), 0.0);
  double precision = 0.0;
  for (const Vector& h : hyp) {
    double best = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double s = clamped_cosine(ref[i], h);
      best = std::max(best, s);
      best_ref[i] = std::max(best_ref[i], s);
    }
    precision += best;
  }
  precision /= static_cast<double>(hyp.size());
  double recall = 0.0;
  for (double s : best_ref) recall += s;
  recall /= static_cast<double>(ref.size());
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

class ReferenceBackend final : public Backend {
 public:
  static constexpr std::string_view kId = "reference";

  BackendDescriptor descriptor() const override {
    return {std::string(kId), CapabilityFlags::all(), version(), true};
  }

  static std::string version() {
    return "reference-1;dim=256;ngrams=2,3;seed=0x5348414c4c4f5731;" +
           std::string(detail::kLexiconVersion) + ";wordlist=wordfreq-en-50k";
  }

  // Hashed counts of the token's character bigrams and trigrams (with "<" and
  // ">" boundary markers), L2-normalized.
  static Vector embed_token(std::string_view token) {
    Vector v(detail::kReferenceDim, 0.0);
    const std::string padded = "<" + std::string(token) + ">";
    for (std::size_t n = 2; n <= 3; ++n) {
      if (padded.size() < n) continue;
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        const std::uint64_t h = detail::seeded_hash(std::string_view(padded).substr(i, n));
        v[h % detail::kReferenceDim] += 1.0;
      }
    }
    detail::l2_normalize(v);
    return v;
  }

  std::vector<Vector> embed_tokens(std::span<const std::string> tokens) const override {
    std::vector<Vector> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens) out.push_back(embed_token(t));
    return out;
  }

  // Sum of token vectors plus hashed word-bigram indicators, L2-normalized.
  Vector embed_sentence(const std::string& text) const override {
    const TokenSequence seq = tokenize(normalize(text));
    Vector v(detail::kReferenceDim, 0.0);
    for (const std::string& t : seq) {
      const Vector e = embed_token(t);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += e[i];
    }
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      const std::uint64_t h = detail::seeded_hash("bigram:" + seq[i] + " " + seq[i + 1]);
      v[h % detail::kReferenceDim] += 1.0;
    }
    detail::l2_normalize(v);
    return v;
  }

  // Polarity heuristic: a negation on exactly one side over largely shared
  // content is a contradiction; reference content mostly kept is entailment.
  NliVerdict nli(const std::string& premise, const std::string& hypothesis) const override {
    const TokenSequence ref = tokenize(normalize(premise));
    const TokenSequence hyp = tokenize(normalize(hypothesis));
    auto negated = [](const TokenSequence& s) {
      return std::ranges::any_of(s, [](const std::string& t) { return detail::is_negation(t); });
    };
    const auto rc = detail::content_tokens(ref);
    const auto hc = detail::content_tokens(hyp);
    const std::unordered_set<std::string> rs(rc.begin(), rc.end());
    const std::unordered_set<std::string> hs(hc.begin(), hc.end());
    std::size_t common = 0;
    for (const auto& t : rs) common += hs.contains(t) ? 1 : 0;
    const std::size_t uni = rs.size() + hs.size() - common;
    const double overlap = uni == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(uni);
    const double containment =
        rs.empty() ? 1.0 : static_cast<double>(common) / static_cast<double>(rs.size());

    if (negated(ref) != negated(hyp) && overlap >= 0.6) return {NliLabel::kContradiction};
    if (containment >= 0.8) return {NliLabel::kEntailment};
    return {NliLabel::kNeutral};
  }

  double token_match_f1(const std::string& reference, const std::string& hypothesis) const override {
    const TokenSequence ref = tokenize(normalize(reference));
    const TokenSequence hyp = tokenize(normalize(hypothesis));
    return greedy_match_f1(embed_tokens(ref.tokens), embed_tokens(hyp.tokens));
  }

  // Adjacency proxy, not syntax: (ROOT, root, first content token) plus
  // (previous content token, adj, token) along the content tokens.
  DependencyRelationSet parse(const std::string& text) const override {
    const auto content = detail::content_tokens(tokenize(normalize(text)));
    DependencyRelationSet rels;
    if (content.empty()) return rels;
    rels.insert({"ROOT", "root", content.front()});
    for (std::size_t i = 1; i < content.size(); ++i)
      rels.insert({content[i - 1], "adj", content[i]});
    return rels;
  }

  GrammarErrorCounts grammar(const std::string& text) const override {
    const std::string raw = normalize_preserving_punctuation(text);
    GrammarErrorCounts c;
    c.e_pu = count_punctuation_errors(raw);

    std::vector<std::string> words;
    for (const std::string& piece : tokenize(raw)) {
      std::string w = detail::strip_word(piece);
      if (!w.empty()) words.push_back(std::move(w));
    }
    for (const std::string& w : words)
      if (misspelled(w)) ++c.e_sp;
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
      const std::string& a = words[i];
      const std::string& b = words[i + 1];
      if (a == b) ++c.e_gr;
      if (a == "a" && starts_with_vowel(b) && !detail::a_exceptions().contains(b)) ++c.e_gr;
      if (agreement_error(a, b)) ++c.e_gr;
    }
    return c;
  }

  static bool misspelled(const std::string& word) {
    bool has_alpha = false;
    for (unsigned char ch : word) {
      if (ch >= '0' && ch <= '9') return false;
      if ((ch >= 'a' && ch <= 'z') || ch >= 0x80) has_alpha = true;
    }
    if (!has_alpha) return false;
    const auto& dict = detail::english_words();
    if (dict.contains(word)) return false;
    const auto apos = word.find('\'');
    if (apos != std::string::npos && dict.contains(word.substr(0, apos))) return false;
    return true;
  }

 private:
  static bool starts_with_vowel(const std::string& w) {
    if (w.empty()) return false;
    const char c = w.front();
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  }

  static bool agreement_error(const std::string& subject, const std::string& verb) {
    if (subject == "he" || subject == "she" || subject == "it")
      return detail::plural_forms().contains(verb);
    if (subject == "they" || subject == "we" || subject == "you")
      return detail::third_person_forms().contains(verb);
    if (subject == "i")
      return verb != "was" && detail::third_person_forms().contains(verb);
    return false;
  }

  // Unbalanced brackets and quotes, plus runs of repeated terminal marks
  // ("!!", "?.") other than an ellipsis.
  static long long count_punctuation_errors(const std::string& raw) {
    long long errors = 0;
    std::vector<char> stack;
    auto closes = [](char c) -> char {
      switch (c) {
        case ')': return '(';
        case ']': return '[';
        case '}': return '{';
        default: return 0;
      }
    };
    long long quotes = 0;
    for (char c : raw) {
      if (c == '(' || c == '[' || c == '{') {
        stack.push_back(c);
      } else if (char open = closes(c)) {
        if (!stack.empty() && stack.back() == open)
          stack.pop_back();
        else
          ++errors;
      } else if (c == '"') {
        ++quotes;
      }
    }
    errors += static_cast<long long>(stack.size());
    if (quotes % 2 != 0) ++errors;

    auto terminal = [](char c) { return c == '.' || c == '!' || c == '?'; };
    for (std::size_t i = 0; i < raw.size();) {
      if (!terminal(raw[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && terminal(raw[j])) ++j;
      const std::string_view run(raw.data() + i, j - i);
      if (run.size() >= 2 && run != "...") ++errors;
      i = j;
    }
    return errors;
  }
};

}  // namespace shallow
