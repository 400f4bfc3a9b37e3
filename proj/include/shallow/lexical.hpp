#pragma once

// Word alignment, WER and the lexical fabrication score.

#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

#include "shallow/edit_distance.hpp"
#include "shallow/text.hpp"
#include "shallow/weights.hpp"

namespace shallow {

struct AlignmentCounts {
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t substitutions = 0;
  std::size_t hits = 0;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;

  std::size_t errors() const { return insertions + deletions + substitutions; }
  friend bool operator==(const AlignmentCounts&, const AlignmentCounts&) = default;
};

struct WordAlignment {
  AlignmentCounts counts;
  // Hypothesis tokens labelled as insertions, in hypothesis order.
  std::vector<std::string> inserted_tokens;
  std::vector<EditOp> ops;
};

struct LexicalBreakdown {
  double r_i = 0.0;
  double r_d = 0.0;
  double r_s = 0.0;
  double lf = 0.0;
  std::vector<std::string> inserted_tokens;
  // Insertions left after filler tokens are removed; this is what the
  // weighted formula sees.
  std::size_t scored_insertions = 0;
  bool operator==(const LexicalBreakdown&) const = default;
};

using FillerSet = std::unordered_set<std::string>;

inline const FillerSet& default_fillers() {
  static const FillerSet fillers{"um", "uh", "uhm", "er", "ah", "hmm", "mm"};
  return fillers;
}

inline WordAlignment align(const TokenSequence& ref, const TokenSequence& hyp) {
  WordAlignment out;
  out.counts.ref_len = ref.size();
  out.counts.hyp_len = hyp.size();
  out.ops = align_sequences(ref.tokens, hyp.tokens);
  std::size_t j = 0;
  for (EditOp op : out.ops) {
    switch (op) {
      case EditOp::kMatch: ++out.counts.hits; ++j; break;
      case EditOp::kSubstitute: ++out.counts.substitutions; ++j; break;
      case EditOp::kDelete: ++out.counts.deletions; break;
      case EditOp::kInsert:
        ++out.counts.insertions;
        out.inserted_tokens.push_back(hyp[j]);
        ++j;
        break;
    }
  }
  return out;
}

// Can exceed 1. An empty reference scores 0 against an empty hypothesis and 1
// against anything else.
inline double wer(const AlignmentCounts& c) {
  if (c.ref_len == 0) return c.hyp_len == 0 ? 0.0 : 1.0;
  return static_cast<double>(c.errors()) / static_cast<double>(c.ref_len);
}

// Insertion ratio is taken over the hypothesis length, deletion and
// substitution ratios over the reference length. Exact matches, empty
// references and empty hypotheses take the short-circuit branches.
inline LexicalBreakdown lexical_fabrication(const AlignmentCounts& c,
                                            const std::vector<std::string>& inserted_tokens,
                                            const MetricWeights& w = {},
                                            const FillerSet& fillers = default_fillers()) {
  LexicalBreakdown out;
  out.inserted_tokens = inserted_tokens;
  if (c.errors() == 0) return out;

  const auto non_filler = static_cast<std::size_t>(std::ranges::count_if(
      inserted_tokens, [&](const std::string& t) { return !fillers.contains(t); }));
  out.scored_insertions = non_filler;

  if (c.ref_len == 0) {
    out.r_i = 1.0;
    out.lf = non_filler > 0 ? 1.0 : 0.0;
    return out;
  }
  if (c.hyp_len == 0) {
    out.r_d = 1.0;
    out.lf = w.lf_del;
    return out;
  }

  const double hyp_len = static_cast<double>(c.hyp_len);
  const double ref_len = static_cast<double>(c.ref_len);
  out.r_i = static_cast<double>(c.insertions) / hyp_len;
  out.r_d = static_cast<double>(c.deletions) / ref_len;
  out.r_s = static_cast<double>(c.substitutions) / ref_len;

  if (c.insertions == c.hyp_len && non_filler > 0) {
    out.lf = 1.0;
    return out;
  }
  const double scored_r_i = static_cast<double>(non_filler) / hyp_len;
  out.lf = std::clamp(w.lf_ins * scored_r_i + w.lf_sub * out.r_s + w.lf_del * out.r_d, 0.0, 1.0);
  return out;
}

inline LexicalBreakdown lexical_fabrication(const WordAlignment& a, const MetricWeights& w = {},
                                            const FillerSet& fillers = default_fillers()) {
  return lexical_fabrication(a.counts, a.inserted_tokens, w, fillers);
}

}  // namespace shallow
