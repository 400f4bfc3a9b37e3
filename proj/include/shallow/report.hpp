#pragma once

// Markdown and CSV renderings of aggregate tables and correlation reports.
// Human-facing numbers are percent with two decimals.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>

#include "shallow/aggregate.hpp"
#include "shallow/correlation.hpp"
#include "shallow/csv.hpp"
#include "shallow/record_io.hpp"
#include "shallow/reference_backend.hpp"

namespace shallow {

inline std::string fixed2(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

inline std::string signed2(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.2f", *v == 0.0 ? 0.0 : *v);
  return buf;
}

inline void write_backend_note(std::ostream& os, const std::vector<std::string>& backends) {
  os << "Backend: ";
  for (std::size_t i = 0; i < backends.size(); ++i) os << (i ? ", " : "") << backends[i];
  if (backends.empty()) os << "none";
  os << "\n";
  if (std::find(backends.begin(), backends.end(), ReferenceBackend::kId) != backends.end())
    os << "\nScores from the `reference` backend use hashed n-gram embeddings and fixed rules in "
          "place of models; morphological and semantic values are reproducible but carry no "
          "model-level fidelity.\n";
}

namespace detail {

inline void markdown_metric_block(std::ostream& os, const std::vector<std::string>& models,
                                  const std::function<const GroupRow*(const std::string&)>& row) {
  os << "| |";
  for (const auto& m : models) os << " " << m << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < models.size(); ++i) os << "---:|";
  os << "\n";
  for (Metric metric : kAllMetrics) {
    os << "| **" << metric_title(metric) << "** |";
    for (const auto& m : models) {
      const GroupRow* g = row(m);
      os << " " << (g ? fixed2(g->percent(metric)) : std::string("n/a")) << " |";
    }
    os << "\n";
  }
}

}  // namespace detail

// Overall table: metrics down, models across, AVG values (mean over datasets
// of per-dataset means). Per-dataset blocks follow.
inline void write_aggregate_markdown(std::ostream& os, const AggregateTable& t) {
  const auto models = t.models();
  auto find_in = [](const std::vector<GroupRow>& rows, const std::string& model) -> const GroupRow* {
    for (const auto& r : rows)
      if (r.model == model) return &r;
    return nullptr;
  };
  os << "# Scores by model\n\n";
  write_backend_note(os, t.backends);
  os << "\n## AVG (mean over datasets of per-dataset means)\n\n";
  detail::markdown_metric_block(os, models, [&](const std::string& m) { return find_in(t.average, m); });
  os << "\n## Pooled (mean over all utterances)\n\n";
  detail::markdown_metric_block(os, models, [&](const std::string& m) { return find_in(t.pooled, m); });
  for (const auto& d : t.datasets()) {
    os << "\n## " << d << "\n\n";
    detail::markdown_metric_block(os, models, [&](const std::string& m) { return t.find(d, m); });
  }
  os << "\n| dataset | model | n |\n|---|---|---:|\n";
  for (const auto& g : t.groups) os << "| " << g.dataset << " | " << g.model << " | " << g.count << " |\n";
}

inline void write_aggregate_csv(std::ostream& os, const AggregateTable& t) {
  csv::write_row(os, {"dataset", "model", "count", "wer", "lf", "pf", "me", "se"});
  auto emit = [&](const GroupRow& g) {
    std::vector<std::string> row{g.dataset, g.model, std::to_string(g.count)};
    for (Metric m : kAllMetrics) {
      const auto v = g.percent(m);
      row.push_back(v ? fixed2(v) : std::string());
    }
    csv::write_row(os, row);
  };
  for (const auto& g : t.groups) emit(g);
  for (const auto& g : t.average) emit(g);
  for (const auto& g : t.pooled) emit(g);
}

inline std::string bin_label(const CorrelationBin& b) {
  if (b.lower) return "(" + fixed2(*b.lower) + ", " + fixed2(b.threshold) + "]";
  return "<= " + fixed2(b.threshold);
}

inline void write_correlation_csv(std::ostream& os, const CorrelationReport& r) {
  csv::write_row(os, {"threshold", "lower", "count", "defined", "metric_a", "metric_b", "rho"});
  for (const auto& b : r.bins) {
    for (Metric a : kAllMetrics) {
      for (Metric c : kAllMetrics) {
        const auto v = rho(b, a, c);
        csv::write_row(os, {fixed2(b.threshold), b.lower ? fixed2(*b.lower) : std::string(),
                            std::to_string(b.count), b.defined ? "true" : "false",
                            std::string(metric_name(a)), std::string(metric_name(c)),
                            v ? detail::format_real(*v) : std::string()});
      }
    }
  }
}

inline void write_correlation_markdown(std::ostream& os, const CorrelationReport& r,
                                       const std::vector<std::string>& backends = {}) {
  os << "# Spearman correlation by WER threshold\n\n";
  if (!backends.empty()) {
    write_backend_note(os, backends);
    os << "\n";
  }
  os << (r.mode == BinMode::kCumulative ? "Bins are cumulative: WER <= threshold (percent).\n"
                                        : "Bins are disjoint: previous threshold < WER <= threshold (percent).\n");
  os << "Bins with fewer than 3 utterances are undefined.\n";
  os << "\n## Correlation with WER\n\n| bin | n | LF | PF | ME | SE |\n|---|---:|---:|---:|---:|---:|\n";
  for (const auto& b : r.bins) {
    os << "| " << bin_label(b) << " | " << b.count << " |";
    for (Metric m : {Metric::kLf, Metric::kPf, Metric::kMe, Metric::kSe})
      os << " " << (b.defined ? signed2(rho(b, Metric::kWer, m)) : std::string("undefined")) << " |";
    os << "\n";
  }
  for (const auto& b : r.bins) {
    os << "\n## " << bin_label(b) << " (n = " << b.count << ")\n\n";
    if (!b.defined) {
      os << "undefined\n";
      continue;
    }
    os << "| |";
    for (Metric m : kAllMetrics) os << " " << metric_title(m) << " |";
    os << "\n|---|---:|---:|---:|---:|---:|\n";
    for (Metric a : kAllMetrics) {
      os << "| **" << metric_title(a) << "** |";
      for (Metric c : kAllMetrics) os << " " << signed2(rho(b, a, c)) << " |";
      os << "\n";
    }
  }
}

}  // namespace shallow
