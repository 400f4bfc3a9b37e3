#pragma once

// Streaming manifest ingestion: JSONL, CSV or TSV rows of reference and
// hypothesis text, read one pair at a time.

#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "shallow/csv.hpp"
#include "shallow/text.hpp"
#include "shallow/weights.hpp"

namespace shallow {

enum class ManifestFormat { kJsonl, kCsv, kTsv };

inline std::string_view manifest_format_name(ManifestFormat f) {
  switch (f) {
    case ManifestFormat::kJsonl: return "jsonl";
    case ManifestFormat::kCsv: return "csv";
    case ManifestFormat::kTsv: return "tsv";
  }
  return "jsonl";
}

inline ManifestFormat parse_manifest_format(std::string_view s) {
  if (s == "jsonl" || s == "json" || s == "ndjson") return ManifestFormat::kJsonl;
  if (s == "csv") return ManifestFormat::kCsv;
  if (s == "tsv") return ManifestFormat::kTsv;
  throw ConfigError("unknown input format '" + std::string(s) + "'");
}

// From the file extension; jsonl when unrecognised.
inline ManifestFormat guess_manifest_format(std::string_view path) {
  auto ends = [&](std::string_view ext) { return path.ends_with(ext); };
  if (ends(".csv")) return ManifestFormat::kCsv;
  if (ends(".tsv") || ends(".tab")) return ManifestFormat::kTsv;
  return ManifestFormat::kJsonl;
}

struct ManifestError : Error {
  ManifestError(std::string source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source(std::move(source)),
        line(line) {}
  std::string source;
  std::size_t line;
};

class ManifestReader {
 public:
  ManifestReader(std::istream& in, ManifestFormat format, std::string source = "<input>")
      : in_(&in), format_(format), source_(std::move(source)) {
    init();
  }

  ManifestReader(const std::string& path, ManifestFormat format)
      : owned_(std::make_unique<std::ifstream>(path, std::ios::binary)),
        in_(owned_.get()),
        format_(format),
        source_(path) {
    if (!*owned_) throw ConfigError("cannot open input '" + path + "'");
    init();
  }

  ManifestFormat format() const { return format_; }
  const std::string& source() const { return source_; }
  std::size_t rows_read() const { return rows_; }

  std::optional<TranscriptPair> next() {
    std::optional<TranscriptPair> pair =
        format_ == ManifestFormat::kJsonl ? next_jsonl() : next_delimited();
    if (!pair) return std::nullopt;
    ++rows_;
    auto_rows_.push_back(pair->id.empty());
    if (pair->id.empty()) {
      pair->id = std::to_string(rows_);
      if (explicit_ids_.contains(pair->id)) fail("duplicate id '" + pair->id + "'");
    } else {
      const auto n = row_number(pair->id);
      if ((n && *n < rows_ && auto_rows_[*n - 1]) || !explicit_ids_.insert(pair->id).second)
        fail("duplicate id '" + pair->id + "'");
    }
    return pair;
  }

 private:
  void init() {
    if (format_ == ManifestFormat::kJsonl) return;
    csv_ = std::make_unique<csv::Reader>(*in_, format_ == ManifestFormat::kTsv ? '\t' : ',');
    std::optional<std::vector<std::string>> header;
    try {
      header = csv_->next();
    } catch (const csv::ParseError& e) {
      throw ManifestError(source_, e.line, e.what());
    }
    if (!header) return;
    line_ = csv_->record_line();
    for (std::size_t i = 0; i < header->size(); ++i) {
      std::string name = normalize((*header)[i]);
      if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name = name.substr(3);
      if (!columns_.emplace(name, i).second) fail("duplicate column '" + name + "'");
    }
    for (const char* required : {"reference", "hypothesis"})
      if (!columns_.contains(required)) fail(std::string("header lacks column '") + required + "'");
  }

  // Rows without an id are named by their row number. Only a bit per row is
  // kept for those, so a corpus of unnamed rows does not hold every id.
  static std::optional<std::size_t> row_number(const std::string& id) {
    if (id.empty() || id.size() > 18 || id[0] == '0') return std::nullopt;
    std::size_t n = 0;
    for (char c : id) {
      if (c < '0' || c > '9') return std::nullopt;
      n = n * 10 + static_cast<std::size_t>(c - '0');
    }
    return n;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ManifestError(source_, line_, what); }

  std::optional<TranscriptPair> next_jsonl() {
    std::string line;
    while (std::getline(*in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) fail("not a JSON object");
      TranscriptPair p;
      auto text = [&](const char* key, bool required) -> std::optional<std::string> {
        const auto it = j.find(key);
        if (it == j.end() || it->is_null()) {
          if (required) fail(std::string("missing field '") + key + "'");
          return std::nullopt;
        }
        if (it->is_string()) return it->get<std::string>();
        if (std::string_view(key) == "id" && it->is_number_integer()) return it->dump();
        fail(std::string("field '") + key + "' is not a string");
      };
      p.reference = *text("reference", true);
      p.hypothesis = *text("hypothesis", true);
      p.id = text("id", false).value_or("");
      p.dataset = text("dataset", false);
      p.model = text("model", false);
      p.category = text("category", false);
      return p;
    }
    return std::nullopt;
  }

  std::optional<TranscriptPair> next_delimited() {
    if (!csv_ || columns_.empty()) return std::nullopt;
    std::optional<std::vector<std::string>> row;
    try {
      row = csv_->next();
    } catch (const csv::ParseError& e) {
      throw ManifestError(source_, e.line, e.what());
    }
    if (!row) return std::nullopt;
    line_ = csv_->record_line();
    if (row->size() != columns_.size())
      fail("expected " + std::to_string(columns_.size()) + " fields, got " +
           std::to_string(row->size()));
    auto get = [&](const char* name) -> std::optional<std::string> {
      const auto it = columns_.find(name);
      if (it == columns_.end()) return std::nullopt;
      return (*row)[it->second];
    };
    auto optional_text = [&](const char* name) -> std::optional<std::string> {
      auto v = get(name);
      if (v && v->empty()) return std::nullopt;
      return v;
    };
    TranscriptPair p;
    p.reference = *get("reference");
    p.hypothesis = *get("hypothesis");
    p.id = get("id").value_or("");
    p.dataset = optional_text("dataset");
    p.model = optional_text("model");
    p.category = optional_text("category");
    return p;
  }

  std::unique_ptr<std::istream> owned_;
  std::istream* in_;
  ManifestFormat format_;
  std::string source_;
  std::unique_ptr<csv::Reader> csv_;
  std::unordered_map<std::string, std::size_t> columns_;
  std::unordered_set<std::string> explicit_ids_;
  std::vector<bool> auto_rows_;
  std::size_t line_ = 0;
  std::size_t rows_ = 0;
};

struct Manifest {
  std::vector<TranscriptPair> pairs;
  std::string source;
  ManifestFormat format = ManifestFormat::kJsonl;
};

// Whole-file convenience over ManifestReader.
inline Manifest ingest(const std::string& path, std::optional<ManifestFormat> format = {}) {
  ManifestReader reader(path, format.value_or(guess_manifest_format(path)));
  Manifest m{{}, path, reader.format()};
  while (auto p = reader.next()) m.pairs.push_back(std::move(*p));
  return m;
}

inline void write_manifest_row(std::ostream& os, const TranscriptPair& p, ManifestFormat format) {
  if (format == ManifestFormat::kJsonl) {
    nlohmann::json j{{"id", p.id}, {"reference", p.reference}, {"hypothesis", p.hypothesis}};
    if (p.dataset) j["dataset"] = *p.dataset;
    if (p.model) j["model"] = *p.model;
    if (p.category) j["category"] = *p.category;
    os << j.dump() << '\n';
    return;
  }
  const char d = format == ManifestFormat::kTsv ? '\t' : ',';
  csv::write_row(os, {p.id, p.reference, p.hypothesis, p.dataset.value_or(""), p.model.value_or(""),
                      p.category.value_or("")},
                 d);
}

inline void write_manifest_header(std::ostream& os, ManifestFormat format) {
  if (format == ManifestFormat::kJsonl) return;
  const char d = format == ManifestFormat::kTsv ? '\t' : ',';
  csv::write_row(os, {"id", "reference", "hypothesis", "dataset", "model", "category"}, d);
}

}  // namespace shallow
