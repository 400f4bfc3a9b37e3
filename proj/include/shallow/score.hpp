#pragma once

// Per-utterance scoring: one ScoreRecord holding WER, the four headline
// scores and every sub-metric behind them.

#include <optional>
#include <string>
#include <vector>

#include "shallow/backend.hpp"
#include "shallow/lexical.hpp"
#include "shallow/morphological.hpp"
#include "shallow/phonetic.hpp"
#include "shallow/semantic.hpp"
#include "shallow/text.hpp"
#include "shallow/weights.hpp"

namespace shallow {

struct MetricFamilies {
  bool lf = true;
  bool pf = true;
  bool me = true;
  bool se = true;

  // Capabilities the enabled families need from a backend.
  std::vector<Capability> required_capabilities() const {
    std::vector<Capability> out;
    if (me) {
      out.push_back(Capability::kParse);
      out.push_back(Capability::kGrammar);
    }
    if (se) {
      out.push_back(Capability::kEmbedTokens);
      out.push_back(Capability::kEmbedSentence);
      out.push_back(Capability::kNli);
      out.push_back(Capability::kTokenMatch);
    }
    return out;
  }
  bool operator==(const MetricFamilies&) const = default;
};

// Parses "lf,pf,me,se" (any subset, any order).
inline MetricFamilies parse_metric_families(std::string_view list) {
  MetricFamilies m{false, false, false, false};
  std::size_t start = 0;
  bool any = false;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    const std::string name = normalize(list.substr(start, end - start));
    if (name == "lf") m.lf = true;
    else if (name == "pf") m.pf = true;
    else if (name == "me") m.me = true;
    else if (name == "se") m.se = true;
    else throw ConfigError("unknown metric family '" + name + "'");
    any = true;
    start = end + 1;
  }
  if (!any) throw ConfigError("no metric families selected");
  return m;
}

inline std::string metric_families_string(const MetricFamilies& m) {
  std::vector<std::string> parts;
  if (m.lf) parts.emplace_back("lf");
  if (m.pf) parts.emplace_back("pf");
  if (m.me) parts.emplace_back("me");
  if (m.se) parts.emplace_back("se");
  return join(parts, ",");
}

struct ScoringOptions {
  MetricWeights weights;
  FillerSet fillers = default_fillers();
  PhoneticOptions phonetic;
  MetricFamilies metrics;
};

struct ScoreRecord {
  std::string id;
  std::optional<std::string> dataset;
  std::optional<std::string> model;
  std::string backend;

  double wer = 0.0;
  AlignmentCounts counts;

  std::optional<LexicalBreakdown> lexical;
  std::optional<PhoneticBreakdown> phonetic;
  std::optional<MorphBreakdown> morphological;
  std::optional<SemanticBreakdown> semantic;

  bool operator==(const ScoreRecord&) const = default;

  std::optional<double> lf() const { return lexical ? std::optional(lexical->lf) : std::nullopt; }
  std::optional<double> pf() const { return phonetic ? std::optional(phonetic->pf) : std::nullopt; }
  std::optional<double> me() const {
    return morphological ? std::optional(morphological->me) : std::nullopt;
  }
  std::optional<double> se() const { return semantic ? std::optional(semantic->se) : std::nullopt; }
};

// A pair that could not be scored. It is reported, never folded into
// aggregates.
struct FailureRecord {
  std::string id;
  std::string kind;
  std::string message;
};

inline ScoreRecord score_pair(const TranscriptPair& pair, const Backend& backend,
                              const ScoringOptions& opt = {}) {
  ScoreRecord rec;
  rec.id = pair.id;
  rec.dataset = pair.dataset;
  rec.model = pair.model;
  rec.backend = backend.descriptor().id;

  const TokenSequence ref = normalize_and_tokenize(pair.reference);
  const TokenSequence hyp = normalize_and_tokenize(pair.hypothesis);
  const WordAlignment alignment = align(ref, hyp);
  rec.counts = alignment.counts;
  rec.wer = wer(alignment.counts);
  const bool exact = ref == hyp;

  try {
    if (opt.metrics.lf) rec.lexical = lexical_fabrication(alignment, opt.weights, opt.fillers);
    if (opt.metrics.pf) rec.phonetic = phonetic_fabrication(ref, hyp, opt.phonetic);
    if (opt.metrics.me) {
      if (exact) {
        rec.morphological = MorphBreakdown{};
      } else {
        rec.morphological = morphological_breakdown(
            backend.parse(pair.reference), backend.parse(pair.hypothesis),
            backend.grammar(pair.hypothesis), hyp.size(), opt.weights);
      }
    }
    if (opt.metrics.se) rec.semantic = semantic_breakdown(ref, hyp, opt.weights, backend);
  } catch (const BackendError& e) {
    if (e.pair_id.empty()) throw e.with_pair(pair.id);
    throw;
  }
  return rec;
}

}  // namespace shallow
