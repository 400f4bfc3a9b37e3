#pragma once

// Generic unit-cost edit distance and alignment over random-access sequences
// (strings, code-point strings, token vectors).

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ranges>
#include <vector>

namespace shallow {

enum class EditOp { kMatch, kSubstitute, kDelete, kInsert };

template <std::ranges::random_access_range A, std::ranges::random_access_range B>
std::size_t levenshtein_distance(const A& a, const B& b) {
  const std::size_t n = std::ranges::size(a);
  const std::size_t m = std::ranges::size(b);
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag =
          prev[j - 1] + (std::ranges::begin(a)[i - 1] == std::ranges::begin(b)[j - 1] ? 0 : 1);
      cur[j] = std::min({diag, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

// Minimum-cost alignment of `ref` against `hyp`, returned as an edit script in
// left-to-right order. The cost table is built over suffixes so the script can
// be read forwards; at each step a diagonal move (match or substitution) wins
// ties, then deletion, then insertion.
template <std::ranges::random_access_range A, std::ranges::random_access_range B>
std::vector<EditOp> align_sequences(const A& ref, const B& hyp) {
  const std::size_t n = std::ranges::size(ref);
  const std::size_t m = std::ranges::size(hyp);
  const auto r = std::ranges::begin(ref);
  const auto h = std::ranges::begin(hyp);
  const std::size_t width = m + 1;
  // cost[i * width + j] = distance between ref[i..) and hyp[j..)
  std::vector<std::size_t> cost((n + 1) * width);
  for (std::size_t i = 0; i <= n; ++i) cost[i * width + m] = n - i;
  for (std::size_t j = 0; j <= m; ++j) cost[n * width + j] = m - j;
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      const std::size_t diag = cost[(i + 1) * width + j + 1] + (r[i] == h[j] ? 0 : 1);
      const std::size_t del = cost[(i + 1) * width + j] + 1;
      const std::size_t ins = cost[i * width + j + 1] + 1;
      cost[i * width + j] = std::min({diag, del, ins});
    }
  }

  std::vector<EditOp> ops;
  ops.reserve(std::max(n, m));
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    const std::size_t here = cost[i * width + j];
    if (i < n && j < m) {
      const bool same = r[i] == h[j];
      if (cost[(i + 1) * width + j + 1] + (same ? 0 : 1) == here) {
        ops.push_back(same ? EditOp::kMatch : EditOp::kSubstitute);
        ++i;
        ++j;
        continue;
      }
    }
    if (i < n && cost[(i + 1) * width + j] + 1 == here) {
      ops.push_back(EditOp::kDelete);
      ++i;
    } else {
      ops.push_back(EditOp::kInsert);
      ++j;
    }
  }
  return ops;
}

}  // namespace shallow
