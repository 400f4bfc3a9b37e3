#pragma once

// Local window coherence, global distance/coherence, and the semantic error
// score.

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "shallow/backend.hpp"
#include "shallow/reference_backend.hpp"
#include "shallow/text.hpp"
#include "shallow/weights.hpp"

namespace shallow {

struct SemanticBreakdown {
  // Window coherence per size; empty when neither side has a window of that
  // size and the scale was dropped.
  std::optional<double> c1, c2, c3;
  double ls = 0.0;
  double sdist = 0.0;
  double token_f1 = 1.0;
  double sc = 1.0;
  double gs = 0.0;
  double se = 0.0;
  std::optional<NliLabel> nli_label;
  bool operator==(const SemanticBreakdown&) const = default;
};

// Window vectors are the mean of the member token vectors.
inline std::vector<Vector> window_embeddings(const std::vector<Vector>& tokens, std::size_t w) {
  std::vector<Vector> out;
  if (w == 0 || tokens.size() < w) return out;
  for (std::size_t start = 0; start + w <= tokens.size(); ++start) {
    Vector v(tokens[start].size(), 0.0);
    for (std::size_t k = start; k < start + w; ++k)
      for (std::size_t d = 0; d < v.size() && d < tokens[k].size(); ++d) v[d] += tokens[k][d];
    for (double& x : v) x /= static_cast<double>(w);
    out.push_back(std::move(v));
  }
  return out;
}

// Sum over hypothesis windows of the best clamped cosine against any
// reference window, divided by the larger window count. Empty when both sides
// lack windows of this size; 0 when exactly one side does.
inline std::optional<double> window_coherence(const std::vector<Vector>& ref_tokens,
                                              const std::vector<Vector>& hyp_tokens,
                                              std::size_t w) {
  const auto ref = window_embeddings(ref_tokens, w);
  const auto hyp = window_embeddings(hyp_tokens, w);
  if (ref.empty() && hyp.empty()) return std::nullopt;
  if (ref.empty() || hyp.empty()) return 0.0;
  double total = 0.0;
  for (const Vector& h : hyp) {
    double best = 0.0;
    for (const Vector& r : ref) best = std::max(best, clamped_cosine(r, h));
    total += best;
  }
  return std::clamp(total / static_cast<double>(std::max(ref.size(), hyp.size())), 0.0, 1.0);
}

inline std::optional<double> window_coherence(const TokenSequence& ref, const TokenSequence& hyp,
                                              std::size_t w, const Backend& backend) {
  return window_coherence(backend.embed_tokens(ref.tokens), backend.embed_tokens(hyp.tokens), w);
}

// Weighted (1 - C_w) with dropped scales removed and the remaining weights
// renormalized.
inline double combine_local(const std::array<std::optional<double>, 3>& c, const MetricWeights& w) {
  const std::array<double, 3> weight{w.ls_w1, w.ls_w2, w.ls_w3};
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!c[i]) continue;
    num += weight[i] * (1.0 - *c[i]);
    den += weight[i];
  }
  if (den <= 0.0) return 0.0;
  return std::clamp(num / den, 0.0, 1.0);
}

inline double local_semantic(const TokenSequence& ref, const TokenSequence& hyp,
                             const MetricWeights& w, const Backend& backend) {
  const auto re = backend.embed_tokens(ref.tokens);
  const auto he = backend.embed_tokens(hyp.tokens);
  return combine_local({window_coherence(re, he, 1), window_coherence(re, he, 2),
                        window_coherence(re, he, 3)},
                       w);
}

inline double semantic_distance(const TokenSequence& ref, const TokenSequence& hyp,
                                const Backend& backend) {
  if (ref.empty() && hyp.empty()) return 0.0;
  if (ref.empty() || hyp.empty()) return 1.0;
  if (ref == hyp) return 0.0;
  return 1.0 - clamped_cosine(backend.embed_sentence(ref.source_text),
                              backend.embed_sentence(hyp.source_text));
}

struct CoherenceResult {
  double sc = 0.0;
  double token_f1 = 0.0;
  std::optional<NliLabel> label;
};

// Token-match F1 gated by the NLI verdict (reference as premise).
inline CoherenceResult semantic_coherence(const TokenSequence& ref, const TokenSequence& hyp,
                                          const Backend& backend) {
  if (ref.empty() && hyp.empty()) return {1.0, 1.0, NliLabel::kEntailment};
  if (ref.empty() || hyp.empty()) return {0.0, 0.0, std::nullopt};
  const NliVerdict verdict = backend.nli(ref.source_text, hyp.source_text);
  const double f1 = std::clamp(backend.token_match_f1(ref.source_text, hyp.source_text), 0.0, 1.0);
  return {f1 * verdict.factor(), f1, verdict.label};
}

// Error orientation: 0 for an identical pair, 1 at maximal divergence.
inline double global_semantic(double sdist, double sc) {
  return std::clamp((sdist + (1.0 - sc)) / 2.0, 0.0, 1.0);
}

inline double semantic_error(double ls, double gs, const MetricWeights& w = {}) {
  return w.se_local * ls + w.se_global * gs;
}

inline SemanticBreakdown semantic_breakdown(const TokenSequence& ref, const TokenSequence& hyp,
                                            const MetricWeights& w, const Backend& backend) {
  SemanticBreakdown out;
  if (ref == hyp) {
    const auto one = [&](std::size_t k) -> std::optional<double> {
      return ref.size() >= k ? std::optional<double>(1.0) : std::nullopt;
    };
    out.c1 = one(1);
    out.c2 = one(2);
    out.c3 = one(3);
    out.nli_label = NliLabel::kEntailment;
    return out;
  }
  const auto re = backend.embed_tokens(ref.tokens);
  const auto he = backend.embed_tokens(hyp.tokens);
  out.c1 = window_coherence(re, he, 1);
  out.c2 = window_coherence(re, he, 2);
  out.c3 = window_coherence(re, he, 3);
  out.ls = combine_local({out.c1, out.c2, out.c3}, w);
  out.sdist = semantic_distance(ref, hyp, backend);
  const CoherenceResult coherence = semantic_coherence(ref, hyp, backend);
  out.sc = coherence.sc;
  out.token_f1 = coherence.token_f1;
  out.nli_label = coherence.label;
  out.gs = global_semantic(out.sdist, out.sc);
  out.se = semantic_error(out.ls, out.gs, w);
  return out;
}

}  // namespace shallow
