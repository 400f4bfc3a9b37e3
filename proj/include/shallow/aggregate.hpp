#pragma once

// Group means of WER and the four scores, per (dataset, model).

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shallow/score.hpp"

namespace shallow {

enum class Metric { kWer, kLf, kPf, kMe, kSe };

inline constexpr std::array<Metric, 5> kAllMetrics{Metric::kWer, Metric::kLf, Metric::kPf,
                                                   Metric::kMe, Metric::kSe};

inline std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kWer: return "wer";
    case Metric::kLf: return "lf";
    case Metric::kPf: return "pf";
    case Metric::kMe: return "me";
    case Metric::kSe: return "se";
  }
  return "";
}

inline std::string_view metric_title(Metric m) {
  switch (m) {
    case Metric::kWer: return "WER";
    case Metric::kLf: return "Lexical";
    case Metric::kPf: return "Phonetic";
    case Metric::kMe: return "Morph.";
    case Metric::kSe: return "Semantic";
  }
  return "";
}

inline std::optional<double> metric_value(const ScoreRecord& r, Metric m) {
  switch (m) {
    case Metric::kWer: return r.wer;
    case Metric::kLf: return r.lf();
    case Metric::kPf: return r.pf();
    case Metric::kMe: return r.me();
    case Metric::kSe: return r.se();
  }
  return std::nullopt;
}

inline constexpr std::string_view kNoLabel = "-";

struct GroupRow {
  std::string dataset;
  std::string model;
  std::size_t count = 0;
  // Unit-interval means (WER may exceed 1); empty when no record in the group
  // carries the metric.
  std::array<std::optional<double>, 5> mean;

  std::optional<double> percent(Metric m) const {
    const auto& v = mean[static_cast<std::size_t>(m)];
    return v ? std::optional(100.0 * *v) : std::nullopt;
  }
};

struct AggregateTable {
  std::vector<GroupRow> groups;   // sorted by (dataset, model)
  std::vector<GroupRow> average;  // per model: mean over datasets of the group means ("AVG")
  std::vector<GroupRow> pooled;   // per model: mean over all of the model's records
  std::vector<std::string> backends;

  std::vector<std::string> datasets() const {
    std::vector<std::string> out;
    for (const auto& g : groups)
      if (std::find(out.begin(), out.end(), g.dataset) == out.end()) out.push_back(g.dataset);
    return out;
  }
  std::vector<std::string> models() const {
    std::vector<std::string> out;
    for (const auto& g : average) out.push_back(g.model);
    return out;
  }
  const GroupRow* find(const std::string& dataset, const std::string& model) const {
    for (const auto& g : groups)
      if (g.dataset == dataset && g.model == model) return &g;
    return nullptr;
  }
};

namespace detail {

// Sorted before summing so the mean is independent of input order.
inline std::optional<double> order_free_mean(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace detail

inline AggregateTable aggregate(const std::vector<ScoreRecord>& records) {
  using Key = std::pair<std::string, std::string>;
  struct Acc {
    std::size_t count = 0;
    std::array<std::vector<double>, 5> values;
  };
  std::map<Key, Acc> groups;
  std::map<std::string, Acc> per_model;
  std::set<std::string> backends;
  for (const ScoreRecord& r : records) {
    backends.insert(r.backend);
    const Key key{r.dataset.value_or(std::string(kNoLabel)), r.model.value_or(std::string(kNoLabel))};
    Acc& g = groups[key];
    Acc& m = per_model[key.second];
    ++g.count;
    ++m.count;
    for (Metric metric : kAllMetrics) {
      if (auto v = metric_value(r, metric)) {
        g.values[static_cast<std::size_t>(metric)].push_back(*v);
        m.values[static_cast<std::size_t>(metric)].push_back(*v);
      }
    }
  }

  AggregateTable table;
  table.backends.assign(backends.begin(), backends.end());
  std::map<std::string, std::array<std::vector<double>, 5>> dataset_means;
  std::map<std::string, std::size_t> model_counts;
  for (auto& [key, acc] : groups) {
    GroupRow row{key.first, key.second, acc.count, {}};
    for (std::size_t k = 0; k < 5; ++k) {
      row.mean[k] = detail::order_free_mean(acc.values[k]);
      if (row.mean[k]) dataset_means[key.second][k].push_back(*row.mean[k]);
    }
    model_counts[key.second] += acc.count;
    table.groups.push_back(std::move(row));
  }
  for (auto& [model, means] : dataset_means) {
    GroupRow row{"AVG", model, model_counts[model], {}};
    for (std::size_t k = 0; k < 5; ++k) row.mean[k] = detail::order_free_mean(means[k]);
    table.average.push_back(std::move(row));
  }
  for (auto& [model, acc] : per_model) {
    GroupRow row{"POOLED", model, acc.count, {}};
    for (std::size_t k = 0; k < 5; ++k) row.mean[k] = detail::order_free_mean(acc.values[k]);
    table.pooled.push_back(std::move(row));
  }
  return table;
}

}  // namespace shallow
