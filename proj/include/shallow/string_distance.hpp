#pragma once

// Normalized string distances. All take any random-access sequence of
// equality-comparable symbols so bytes, code points and tokens all work.

#include <algorithm>
#include <cstddef>
#include <ranges>
#include <vector>

#include "shallow/edit_distance.hpp"

namespace shallow {

// Positional mismatches over the common prefix length plus the length gap.
template <std::ranges::random_access_range A, std::ranges::random_access_range B>
std::size_t hamming_distance(const A& a, const B& b) {
  const std::size_t n = std::ranges::size(a);
  const std::size_t m = std::ranges::size(b);
  const std::size_t overlap = std::min(n, m);
  std::size_t d = std::max(n, m) - overlap;
  for (std::size_t i = 0; i < overlap; ++i)
    if (!(std::ranges::begin(a)[i] == std::ranges::begin(b)[i])) ++d;
  return d;
}

template <std::ranges::random_access_range A, std::ranges::random_access_range B>
double hamming_normalized(const A& a, const B& b) {
  const std::size_t longest = std::max(std::ranges::size(a), std::ranges::size(b));
  if (longest == 0) return 0.0;
  return static_cast<double>(hamming_distance(a, b)) / static_cast<double>(longest);
}

template <std::ranges::random_access_range A, std::ranges::random_access_range B>
double levenshtein_normalized(const A& a, const B& b) {
  const std::size_t longest = std::max(std::ranges::size(a), std::ranges::size(b));
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

// Jaro similarity: match window floor(max/2) - 1, half-transposition count.
// Both empty is 1, exactly one empty is 0.
template <std::ranges::random_access_range A, std::ranges::random_access_range B>
double jaro_similarity(const A& a, const B& b) {
  const std::size_t n = std::ranges::size(a);
  const std::size_t m = std::ranges::size(b);
  if (n == 0 && m == 0) return 1.0;
  if (n == 0 || m == 0) return 0.0;
  const auto s1 = std::ranges::begin(a);
  const auto s2 = std::ranges::begin(b);

  const std::size_t half = std::max(n, m) / 2;
  const std::size_t window = half > 0 ? half - 1 : 0;
  std::vector<char> matched1(n, 0), matched2(m, 0);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(i + window, m - 1);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (!matched2[j] && s1[i] == s2[j]) {
        matched1[i] = matched2[j] = 1;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;

  std::size_t half_transpositions = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!matched1[i]) continue;
    while (!matched2[k]) ++k;
    if (!(s1[i] == s2[k])) ++half_transpositions;
    ++k;
  }
  const double mt = static_cast<double>(matches);
  const double t = static_cast<double>(half_transpositions / 2);
  return (mt / static_cast<double>(n) + mt / static_cast<double>(m) + (mt - t) / mt) / 3.0;
}

struct JaroWinklerParams {
  double prefix_scale = 0.1;
  std::size_t max_prefix = 4;
  // The prefix bonus only applies above this Jaro similarity.
  double boost_threshold = 0.7;
};

template <std::ranges::random_access_range A, std::ranges::random_access_range B>
double jaro_winkler(const A& a, const B& b, const JaroWinklerParams& p = {}) {
  const double jaro = jaro_similarity(a, b);
  if (jaro <= p.boost_threshold) return jaro;
  const std::size_t limit =
      std::min({std::ranges::size(a), std::ranges::size(b), p.max_prefix});
  std::size_t prefix = 0;
  while (prefix < limit && std::ranges::begin(a)[prefix] == std::ranges::begin(b)[prefix])
    ++prefix;
  return jaro + static_cast<double>(prefix) * p.prefix_scale * (1.0 - jaro);
}

}  // namespace shallow
