#pragma once

// Structural divergence over dependency triples and the weighted grammatical
// error score.

#include <algorithm>
#include <compare>
#include <set>
#include <string>
#include <tuple>

#include "shallow/text.hpp"
#include "shallow/weights.hpp"

namespace shallow {

struct RelationTriple {
  std::string head;
  std::string label;
  std::string dependent;

  auto operator<=>(const RelationTriple&) const = default;
  bool operator==(const RelationTriple&) const = default;
};

using DependencyRelationSet = std::set<RelationTriple>;

struct GrammarErrorCounts {
  long long e_gr = 0;
  long long e_sp = 0;
  long long e_pu = 0;
  bool operator==(const GrammarErrorCounts&) const = default;
};

struct MorphBreakdown {
  double sd = 0.0;
  double ge = 0.0;
  double me = 0.0;
  GrammarErrorCounts counts;
  bool operator==(const MorphBreakdown&) const = default;
};

// Heads and dependents are put into canonical text form; labels are kept
// verbatim. Duplicates collapse.
inline DependencyRelationSet normalize_relations(const DependencyRelationSet& rels) {
  DependencyRelationSet out;
  for (const RelationTriple& r : rels) out.insert({normalize(r.head), r.label, normalize(r.dependent)});
  return out;
}

// Jaccard distance. Two empty sets are structurally identical.
inline double structural_divergence(const DependencyRelationSet& ref,
                                    const DependencyRelationSet& hyp) {
  if (ref.empty() && hyp.empty()) return 0.0;
  std::size_t common = 0;
  auto i = ref.begin();
  auto j = hyp.begin();
  while (i != ref.end() && j != hyp.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = ref.size() + hyp.size() - common;
  return 1.0 - static_cast<double>(common) / static_cast<double>(uni);
}

// Weighted findings per hypothesis word, clamped to [0,1].
inline double grammatical_error_score(const GrammarErrorCounts& c, std::size_t n_words,
                                      const MetricWeights& w = {}) {
  if (n_words == 0) return 0.0;
  const double weighted = w.ge_grammar * static_cast<double>(c.e_gr) +
                          w.ge_spell * static_cast<double>(c.e_sp) +
                          w.ge_punct * static_cast<double>(c.e_pu);
  return std::clamp(weighted / static_cast<double>(n_words), 0.0, 1.0);
}

inline double morphological_error(double sd, double ge, const MetricWeights& w = {}) {
  return w.me_sd * sd + w.me_ge * ge;
}

inline MorphBreakdown morphological_breakdown(const DependencyRelationSet& ref_rels,
                                              const DependencyRelationSet& hyp_rels,
                                              const GrammarErrorCounts& counts,
                                              std::size_t hyp_words, const MetricWeights& w = {}) {
  MorphBreakdown out;
  out.counts = counts;
  out.sd = structural_divergence(normalize_relations(ref_rels), normalize_relations(hyp_rels));
  out.ge = grammatical_error_score(counts, hyp_words, w);
  out.me = morphological_error(out.sd, out.ge, w);
  return out;
}

}  // namespace shallow
