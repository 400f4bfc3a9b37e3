#pragma once

// ScoreRecord serialization. Records are flattened to one level of
// snake_case columns; JSONL and CSV carry the same columns, and both read
// back to an equal record.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shallow/csv.hpp"
#include "shallow/score.hpp"

namespace shallow {

enum class ColumnType { kString, kOptString, kReal, kOptReal, kCount, kTokens, kOptLabel };

struct Column {
  const char* name;
  ColumnType type;
};

// Fixed column order for CSV and for the JSONL key order.
inline const std::vector<Column>& record_columns() {
  using T = ColumnType;
  static const std::vector<Column> cols{
      {"id", T::kString},          {"dataset", T::kOptString},   {"model", T::kOptString},
      {"backend", T::kString},     {"wer", T::kReal},            {"ref_len", T::kCount},
      {"hyp_len", T::kCount},      {"hits", T::kCount},          {"insertions", T::kCount},
      {"deletions", T::kCount},    {"substitutions", T::kCount}, {"r_i", T::kOptReal},
      {"r_d", T::kOptReal},        {"r_s", T::kOptReal},         {"lf", T::kOptReal},
      {"inserted_tokens", T::kTokens}, {"scored_insertions", T::kCount},
      {"encoded_ref", T::kOptString}, {"encoded_hyp", T::kOptString}, {"h_n", T::kOptReal},
      {"l_n", T::kOptReal},        {"jw", T::kOptReal},          {"jw_complement", T::kOptReal},
      {"pf", T::kOptReal},         {"sd", T::kOptReal},          {"e_gr", T::kCount},
      {"e_sp", T::kCount},         {"e_pu", T::kCount},          {"ge", T::kOptReal},
      {"me", T::kOptReal},         {"c_1", T::kOptReal},         {"c_2", T::kOptReal},
      {"c_3", T::kOptReal},        {"ls", T::kOptReal},          {"sdist", T::kOptReal},
      {"token_f1", T::kOptReal},   {"nli_label", T::kOptLabel},  {"sc", T::kOptReal},
      {"sc_complement", T::kOptReal}, {"gs", T::kOptReal},       {"se", T::kOptReal}};
  return cols;
}

using ordered_json = nlohmann::ordered_json;

namespace detail {

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

// Shortest representation that parses back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_real(const std::string& s, const char* column) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(std::string("column '") + column + "': bad number '" + s + "'");
  return v;
}

}  // namespace detail

inline ordered_json record_to_json(const ScoreRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["dataset"] = detail::opt(r.dataset);
  j["model"] = detail::opt(r.model);
  j["backend"] = r.backend;
  j["wer"] = r.wer;
  j["ref_len"] = r.counts.ref_len;
  j["hyp_len"] = r.counts.hyp_len;
  j["hits"] = r.counts.hits;
  j["insertions"] = r.counts.insertions;
  j["deletions"] = r.counts.deletions;
  j["substitutions"] = r.counts.substitutions;

  const auto& lx = r.lexical;
  j["r_i"] = lx ? ordered_json(lx->r_i) : nullptr;
  j["r_d"] = lx ? ordered_json(lx->r_d) : nullptr;
  j["r_s"] = lx ? ordered_json(lx->r_s) : nullptr;
  j["lf"] = lx ? ordered_json(lx->lf) : nullptr;
  j["inserted_tokens"] = lx ? ordered_json(lx->inserted_tokens) : nullptr;
  j["scored_insertions"] = lx ? ordered_json(lx->scored_insertions) : nullptr;

  const auto& ph = r.phonetic;
  j["encoded_ref"] = ph ? ordered_json(ph->encoded_ref) : nullptr;
  j["encoded_hyp"] = ph ? ordered_json(ph->encoded_hyp) : nullptr;
  j["h_n"] = ph ? ordered_json(ph->h_n) : nullptr;
  j["l_n"] = ph ? ordered_json(ph->l_n) : nullptr;
  j["jw"] = ph ? ordered_json(ph->jw) : nullptr;
  j["jw_complement"] = ph ? ordered_json(1.0 - ph->jw) : nullptr;
  j["pf"] = ph ? ordered_json(ph->pf) : nullptr;

  const auto& mo = r.morphological;
  j["sd"] = mo ? ordered_json(mo->sd) : nullptr;
  j["e_gr"] = mo ? ordered_json(mo->counts.e_gr) : nullptr;
  j["e_sp"] = mo ? ordered_json(mo->counts.e_sp) : nullptr;
  j["e_pu"] = mo ? ordered_json(mo->counts.e_pu) : nullptr;
  j["ge"] = mo ? ordered_json(mo->ge) : nullptr;
  j["me"] = mo ? ordered_json(mo->me) : nullptr;

  const auto& se = r.semantic;
  j["c_1"] = se ? detail::opt(se->c1) : nullptr;
  j["c_2"] = se ? detail::opt(se->c2) : nullptr;
  j["c_3"] = se ? detail::opt(se->c3) : nullptr;
  j["ls"] = se ? ordered_json(se->ls) : nullptr;
  j["sdist"] = se ? ordered_json(se->sdist) : nullptr;
  j["token_f1"] = se ? ordered_json(se->token_f1) : nullptr;
  j["nli_label"] = se && se->nli_label ? ordered_json(std::string(nli_label_name(*se->nli_label)))
                                       : ordered_json(nullptr);
  j["sc"] = se ? ordered_json(se->sc) : nullptr;
  j["sc_complement"] = se ? ordered_json(1.0 - se->sc) : nullptr;
  j["gs"] = se ? ordered_json(se->gs) : nullptr;
  j["se"] = se ? ordered_json(se->se) : nullptr;
  return j;
}

inline ScoreRecord record_from_json(const nlohmann::json& j) {
  try {
    auto opt_str = [&](const char* k) -> std::optional<std::string> {
      if (!j.contains(k) || j[k].is_null()) return std::nullopt;
      return j[k].get<std::string>();
    };
    auto present = [&](const char* k) { return j.contains(k) && !j[k].is_null(); };
    auto real = [&](const char* k) { return j.at(k).get<double>(); };
    auto opt_real = [&](const char* k) -> std::optional<double> {
      if (!present(k)) return std::nullopt;
      return j[k].get<double>();
    };

    ScoreRecord r;
    r.id = j.at("id").get<std::string>();
    r.dataset = opt_str("dataset");
    r.model = opt_str("model");
    r.backend = j.at("backend").get<std::string>();
    r.wer = real("wer");
    r.counts.ref_len = j.at("ref_len").get<std::size_t>();
    r.counts.hyp_len = j.at("hyp_len").get<std::size_t>();
    r.counts.hits = j.at("hits").get<std::size_t>();
    r.counts.insertions = j.at("insertions").get<std::size_t>();
    r.counts.deletions = j.at("deletions").get<std::size_t>();
    r.counts.substitutions = j.at("substitutions").get<std::size_t>();

    if (present("lf")) {
      LexicalBreakdown lx;
      lx.r_i = real("r_i");
      lx.r_d = real("r_d");
      lx.r_s = real("r_s");
      lx.lf = real("lf");
      if (present("inserted_tokens"))
        lx.inserted_tokens = j["inserted_tokens"].get<std::vector<std::string>>();
      if (present("scored_insertions")) lx.scored_insertions = j["scored_insertions"].get<std::size_t>();
      r.lexical = std::move(lx);
    }
    if (present("pf")) {
      PhoneticBreakdown ph;
      ph.encoded_ref = opt_str("encoded_ref").value_or("");
      ph.encoded_hyp = opt_str("encoded_hyp").value_or("");
      ph.h_n = real("h_n");
      ph.l_n = real("l_n");
      ph.jw = present("jw") ? real("jw") : 1.0 - real("jw_complement");
      ph.pf = real("pf");
      r.phonetic = std::move(ph);
    }
    if (present("me")) {
      MorphBreakdown mo;
      mo.sd = real("sd");
      mo.counts.e_gr = j.at("e_gr").get<long long>();
      mo.counts.e_sp = j.at("e_sp").get<long long>();
      mo.counts.e_pu = j.at("e_pu").get<long long>();
      mo.ge = real("ge");
      mo.me = real("me");
      r.morphological = mo;
    }
    if (present("se")) {
      SemanticBreakdown se;
      se.c1 = opt_real("c_1");
      se.c2 = opt_real("c_2");
      se.c3 = opt_real("c_3");
      se.ls = real("ls");
      se.sdist = real("sdist");
      se.token_f1 = real("token_f1");
      if (auto label = opt_str("nli_label")) {
        se.nli_label = parse_nli_label(*label);
        if (!se.nli_label) throw Error("unknown nli_label '" + *label + "'");
      }
      se.sc = real("sc");
      se.gs = real("gs");
      se.se = real("se");
      r.semantic = se;
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed score record: ") + e.what());
  }
}

inline std::string record_to_jsonl(const ScoreRecord& r) { return record_to_json(r).dump(); }

inline std::vector<std::string> record_column_names() {
  std::vector<std::string> out;
  for (const Column& c : record_columns()) out.emplace_back(c.name);
  return out;
}

inline std::vector<std::string> record_to_csv_fields(const ScoreRecord& r) {
  const ordered_json j = record_to_json(r);
  std::vector<std::string> out;
  for (const Column& c : record_columns()) {
    const auto& v = j[c.name];
    if (v.is_null()) {
      out.emplace_back();
    } else if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_array()) {
      out.push_back(join(v.get<std::vector<std::string>>()));
    } else if (v.is_number_float()) {
      out.push_back(detail::format_real(v.get<double>()));
    } else {
      out.push_back(v.dump());
    }
  }
  return out;
}

// CSV cells have no null, so an empty string column reads back as absent.
// Record ids and backend ids are never empty in practice.
inline ScoreRecord record_from_csv_fields(const std::vector<std::string>& header,
                                          const std::vector<std::string>& fields) {
  if (header.size() != fields.size())
    throw Error("expected " + std::to_string(header.size()) + " fields, got " +
                std::to_string(fields.size()));
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto it = std::find_if(record_columns().begin(), record_columns().end(),
                                 [&](const Column& c) { return header[i] == c.name; });
    if (it == record_columns().end()) continue;
    const std::string& s = fields[i];
    switch (it->type) {
      case ColumnType::kString: j[it->name] = s; break;
      case ColumnType::kOptString:
      case ColumnType::kOptLabel:
        j[it->name] = s.empty() ? nlohmann::json(nullptr) : nlohmann::json(s);
        break;
      case ColumnType::kReal:
      case ColumnType::kOptReal:
        j[it->name] = s.empty() ? nlohmann::json(nullptr)
                                : nlohmann::json(detail::parse_real(s, it->name));
        break;
      case ColumnType::kCount:
        j[it->name] = s.empty() ? nlohmann::json(nullptr)
                                : nlohmann::json(static_cast<long long>(detail::parse_real(s, it->name)));
        break;
      case ColumnType::kTokens:
        j[it->name] = tokenize(s).tokens;
        break;
    }
  }
  return record_from_json(j);
}

class RecordWriter {
 public:
  enum class Format { kJsonl, kCsv };
  RecordWriter(std::ostream& os, Format f) : os_(os), format_(f) {
    if (format_ == Format::kCsv) csv::write_row(os_, record_column_names());
  }
  void write(const ScoreRecord& r) {
    if (format_ == Format::kJsonl)
      os_ << record_to_jsonl(r) << '\n';
    else
      csv::write_row(os_, record_to_csv_fields(r));
  }

 private:
  std::ostream& os_;
  Format format_;
};

// Reads records written by RecordWriter in either format. The format is
// sniffed from the first byte: '{' means JSONL.
inline std::vector<ScoreRecord> read_records(std::istream& in) {
  std::vector<ScoreRecord> out;
  const int first = in.peek();
  if (first == std::char_traits<char>::eof()) return out;
  if (first == '{') {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) throw Error("line " + std::to_string(n) + ": invalid JSON");
      try {
        out.push_back(record_from_json(j));
      } catch (const Error& e) {
        throw Error("line " + std::to_string(n) + ": " + e.what());
      }
    }
    return out;
  }
  csv::Reader reader(in);
  const auto header = reader.next();
  if (!header) return out;
  while (auto row = reader.next()) {
    try {
      out.push_back(record_from_csv_fields(*header, *row));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(reader.record_line()) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<ScoreRecord> read_records_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open score file '" + path + "'");
  return read_records(in);
}

// Plot-ready matrix: one row per record, headline scores only.
inline void write_metric_vectors(std::ostream& os, const std::vector<ScoreRecord>& records) {
  csv::write_row(os, {"id", "dataset", "model", "wer", "lf", "pf", "me", "se"});
  auto cell = [](std::optional<double> v) { return v ? detail::format_real(*v) : std::string(); };
  for (const ScoreRecord& r : records)
    csv::write_row(os, {r.id, r.dataset.value_or(""), r.model.value_or(""),
                        detail::format_real(r.wer), cell(r.lf()), cell(r.pf()), cell(r.me()),
                        cell(r.se())});
}

}  // namespace shallow
