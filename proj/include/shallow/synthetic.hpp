#pragma once

// Category-separation check on a labelled synthetic set: each score should
// peak on the category it targets, except PF, which should bottom out on
// phonetic confusions (near-homophones encode alike).

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shallow/aggregate.hpp"
#include "shallow/score.hpp"

namespace shallow {

inline const std::vector<std::string>& target_categories() {
  static const std::vector<std::string> cats{"lexical", "phonetic", "morphological", "semantic"};
  return cats;
}

inline std::optional<double> median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

struct SeparationProperty {
  std::string name;
  Metric metric;
  std::string category;
  bool want_max = true;
  bool passed = false;
  std::string detail;
};

struct SeparationResult {
  // medians[category][metric]
  std::map<std::string, std::array<std::optional<double>, 5>> medians;
  std::vector<SeparationProperty> properties;
  bool all_passed() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const SeparationProperty& p) { return p.passed; });
  }
};

// `categories[i]` labels `records[i]`. Only the four target categories are
// compared; other labels (wer_only, mixed) are carried but not ranked.
inline SeparationResult check_category_separation(const std::vector<ScoreRecord>& records,
                                                  const std::vector<std::string>& categories) {
  if (records.size() != categories.size()) throw Error("one category label per record required");
  std::map<std::string, std::array<std::vector<double>, 5>> values;
  for (std::size_t i = 0; i < records.size(); ++i)
    for (Metric m : kAllMetrics)
      if (auto v = metric_value(records[i], m))
        values[categories[i]][static_cast<std::size_t>(m)].push_back(*v);

  SeparationResult out;
  for (auto& [cat, per_metric] : values)
    for (std::size_t k = 0; k < 5; ++k) out.medians[cat][k] = median(per_metric[k]);

  const std::vector<SeparationProperty> wanted{
      {"median LF highest on lexical", Metric::kLf, "lexical", true, false, {}},
      {"median ME highest on morphological", Metric::kMe, "morphological", true, false, {}},
      {"median SE highest on semantic", Metric::kSe, "semantic", true, false, {}},
      {"median PF lowest on phonetic", Metric::kPf, "phonetic", false, false, {}}};
  for (SeparationProperty p : wanted) {
    const std::size_t k = static_cast<std::size_t>(p.metric);
    const auto target = out.medians.contains(p.category) ? out.medians[p.category][k] : std::nullopt;
    if (!target) {
      p.passed = false;
      p.detail = "no " + p.category + " samples";
      out.properties.push_back(p);
      continue;
    }
    p.passed = true;
    for (const std::string& other : target_categories()) {
      if (other == p.category || !out.medians.contains(other)) continue;
      const auto v = out.medians[other][k];
      if (!v) continue;
      const bool ok = p.want_max ? *target > *v : *target < *v;
      if (!ok) {
        p.passed = false;
        p.detail += (p.detail.empty() ? "" : "; ") + other + " " + std::to_string(*v) +
                    (p.want_max ? " >= " : " <= ") + std::to_string(*target);
      }
    }
    out.properties.push_back(p);
  }
  return out;
}

}  // namespace shallow
