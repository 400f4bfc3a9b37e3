#pragma once

// The `shallow` command line: score, report, correlate, validate-synthetic.
// Exit codes: 0 success, 1 run aborted (backend failure, failed check),
// 2 configuration or input error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shallow.hpp"

namespace shallow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAbort = 1;
inline constexpr int kExitConfig = 2;

struct BackendSettings {
  std::string selector = "reference";  // "reference" or an http:// url
  double timeout_seconds = 30.0;
  std::size_t max_batch = 64;
  std::string expected_version;
};

inline std::unique_ptr<Backend> make_backend(const BackendSettings& s) {
  if (s.selector == "reference") return std::make_unique<ReferenceBackend>();
  if (s.selector.rfind("http://", 0) == 0 || s.selector.rfind("https://", 0) == 0) {
    RemoteConfig rc;
    rc.url = s.selector;
    rc.timeout_seconds = s.timeout_seconds;
    rc.max_batch = s.max_batch;
    if (!s.expected_version.empty()) rc.expected_version = s.expected_version;
    return std::make_unique<RemoteBackend>(rc);
  }
  throw ConfigError("unknown backend '" + s.selector + "' (expected 'reference' or an http:// url)");
}

// path with its extension replaced; "-" has no siblings.
inline std::string sibling(const std::string& path, const std::string& ext) {
  std::filesystem::path p(path);
  p.replace_extension(ext);
  return p.string();
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

inline PhoneticCodec parse_codec(const std::string& s) {
  if (s == "metaphone") return PhoneticCodec::kMetaphone;
  if (s == "double_metaphone") return PhoneticCodec::kDoubleMetaphonePrimary;
  throw ConfigError("unknown phonetic codec '" + s + "'");
}

inline std::string_view codec_name(PhoneticCodec c) {
  return c == PhoneticCodec::kMetaphone ? "metaphone" : "double_metaphone";
}

struct ScoreArgs {
  std::string input;
  std::string format;
  BackendSettings backend;
  std::string weights;
  std::string metrics = "lf,pf,me,se";
  std::size_t parallelism = 1;
  std::string on_error = "abort";
  std::string out;
  std::string codec = "metaphone";
  bool keep_unencodable = false;
};

inline nlohmann::ordered_json resolved_config(const std::string& command, const ScoreArgs& a,
                                              const PipelineOptions& opt, ManifestFormat format,
                                              const BackendDescriptor& d) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["input"] = a.input;
  j["format"] = manifest_format_name(format);
  nlohmann::json desc = d;
  j["backend"] = {{"selector", a.backend.selector}, {"descriptor", desc}};
  if (a.backend.selector != "reference")
    j["backend"]["timeout_seconds"] = a.backend.timeout_seconds;
  nlohmann::json w = opt.scoring.weights;
  j["weights"] = w;
  j["weights_file"] = a.weights.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(a.weights);
  j["metrics"] = metric_families_string(opt.scoring.metrics);
  std::vector<std::string> fillers(opt.scoring.fillers.begin(), opt.scoring.fillers.end());
  std::sort(fillers.begin(), fillers.end());
  j["fillers"] = fillers;
  j["phonetic"] = {{"codec", codec_name(opt.scoring.phonetic.codec)},
                   {"keep_unencodable", opt.scoring.phonetic.keep_unencodable}};
  j["parallelism"] = opt.parallelism;
  j["on_error"] = failure_policy_name(opt.on_error);
  j["out"] = a.out;
  return j;
}

inline PipelineOptions pipeline_options(const ScoreArgs& a) {
  PipelineOptions opt;
  if (!a.weights.empty()) opt.scoring.weights = load_weights(a.weights);
  opt.scoring.metrics = parse_metric_families(a.metrics);
  opt.scoring.phonetic.codec = parse_codec(a.codec);
  opt.scoring.phonetic.keep_unencodable = a.keep_unencodable;
  if (a.parallelism == 0) throw ConfigError("--parallelism must be at least 1");
  opt.parallelism = a.parallelism;
  opt.on_error = parse_failure_policy(a.on_error);
  return opt;
}

inline void add_backend_flags(CLI::App* cmd, BackendSettings& b) {
  cmd->add_option("--backend", b.selector, "'reference' or the sidecar url (http://host:port)")
      ->capture_default_str();
  cmd->add_option("--timeout", b.timeout_seconds, "Sidecar request timeout in seconds")
      ->capture_default_str();
  cmd->add_option("--max-batch", b.max_batch, "Requests per sidecar POST")->capture_default_str();
  cmd->add_option("--expect-backend-version", b.expected_version,
                  "Fail unless the sidecar reports exactly this version");
}

inline void add_scoring_flags(CLI::App* cmd, ScoreArgs& a) {
  cmd->add_option("--input", a.input, "Manifest of reference/hypothesis pairs")->required();
  cmd->add_option("--format", a.format, "jsonl, csv or tsv (default: from the extension)");
  add_backend_flags(cmd, a.backend);
  cmd->add_option("--weights", a.weights, "JSON file of weight overrides");
  cmd->add_option("--metrics", a.metrics, "Comma list of lf,pf,me,se")->capture_default_str();
  cmd->add_option("--parallelism", a.parallelism, "Worker threads")->capture_default_str();
  cmd->add_option("--on-error", a.on_error, "skip or abort")->capture_default_str();
  cmd->add_option("--codec", a.codec, "metaphone or double_metaphone")->capture_default_str();
  cmd->add_flag("--keep-unencodable", a.keep_unencodable,
                "Keep tokens with no phonetic code (digits) verbatim instead of dropping them");
}

inline int cmd_score(const ScoreArgs& a, std::ostream& log) {
  const PipelineOptions opt = pipeline_options(a);
  const ManifestFormat format =
      a.format.empty() ? guess_manifest_format(a.input) : parse_manifest_format(a.format);
  ManifestReader reader(a.input, format);
  const auto backend = make_backend(a.backend);
  require_capabilities(backend->descriptor(), opt.scoring.metrics.required_capabilities());

  {
    auto cfg = open_out(sibling(a.out, ".config.json"));
    cfg << resolved_config("score", a, opt, format, backend->descriptor()).dump(2) << '\n';
  }
  auto out = open_out(a.out);
  const bool csv_out = a.out.ends_with(".csv");
  RecordWriter writer(out, csv_out ? RecordWriter::Format::kCsv : RecordWriter::Format::kJsonl);
  std::vector<FailureRecord> failures;
  PipelineStats stats;
  try {
    stats = score_stream([&] { return reader.next(); }, *backend, opt,
                         [&](const ScoreRecord& r) { writer.write(r); },
                         [&](const FailureRecord& f) { failures.push_back(f); });
  } catch (const PipelineAborted& e) {
    out.flush();
    log << "error: " << e.what() << "\n";
    return kExitAbort;
  }
  if (!failures.empty()) {
    auto fout = open_out(sibling(a.out, ".failures.jsonl"));
    for (const auto& f : failures)
      fout << nlohmann::ordered_json{{"id", f.id}, {"kind", f.kind}, {"message", f.message}}.dump()
           << '\n';
  }
  log << "scored " << stats.scored << " pairs, " << stats.failed << " failed -> " << a.out << "\n";
  return kExitOk;
}

struct ReportArgs {
  std::string input;
  std::string out;
  std::string vectors;
};

inline int cmd_report(const ReportArgs& a, std::ostream& log) {
  const auto records = read_records_file(a.input);
  const AggregateTable table = aggregate(records);
  {
    auto md = open_out(a.out);
    write_aggregate_markdown(md, table);
  }
  {
    auto csv_out = open_out(sibling(a.out, ".csv"));
    write_aggregate_csv(csv_out, table);
  }
  if (!a.vectors.empty()) {
    auto v = open_out(a.vectors);
    write_metric_vectors(v, records);
  }
  log << "aggregated " << records.size() << " records into " << table.groups.size() << " groups -> "
      << a.out << "\n";
  return kExitOk;
}

struct CorrelateArgs {
  std::string input;
  std::string out;
  std::string bins = "10,20,30,40,50,60,70,80,90";
  std::string bin_mode = "cumulative";
};

inline std::vector<double> parse_bins(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !(v >= 0.0)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad --bins entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("--bins is empty");
  return out;
}

inline int cmd_correlate(const CorrelateArgs& a, std::ostream& log) {
  const auto bins = parse_bins(a.bins);
  BinMode mode;
  if (a.bin_mode == "cumulative")
    mode = BinMode::kCumulative;
  else if (a.bin_mode == "disjoint")
    mode = BinMode::kDisjoint;
  else
    throw ConfigError("unknown --bin-mode '" + a.bin_mode + "'");
  const auto records = read_records_file(a.input);
  const CorrelationReport report = correlation_by_threshold(records, bins, mode);
  {
    auto md = open_out(a.out);
    write_correlation_markdown(md, report, aggregate(records).backends);
  }
  {
    auto c = open_out(sibling(a.out, ".csv"));
    write_correlation_csv(c, report);
  }
  log << "correlated " << records.size() << " records over " << report.bins.size() << " bins -> "
      << a.out << "\n";
  return kExitOk;
}

struct ValidateArgs {
  ScoreArgs score;
  long long shuffle_seed = -1;
};

inline int cmd_validate_synthetic(const ValidateArgs& a, std::ostream& out, std::ostream& log) {
  const PipelineOptions opt = pipeline_options(a.score);
  const ManifestFormat format = a.score.format.empty() ? guess_manifest_format(a.score.input)
                                                       : parse_manifest_format(a.score.format);
  const Manifest m = ingest(a.score.input, format);
  if (m.pairs.empty()) throw ConfigError("no pairs in '" + a.score.input + "'");
  std::vector<std::string> labels;
  for (const auto& p : m.pairs) {
    if (!p.category) throw ConfigError("pair '" + p.id + "' has no category");
    labels.push_back(*p.category);
  }
  if (a.shuffle_seed >= 0) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(a.shuffle_seed));
    // Fisher-Yates with an explicit draw so the permutation is the same on
    // every standard library.
    for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng() % i]);
  }
  const auto backend = make_backend(a.score.backend);
  PipelineOptions strict = opt;
  strict.on_error = FailurePolicy::kAbort;
  ScoreAllResult res;
  try {
    res = score_all(m, *backend, strict);
  } catch (const PipelineAborted& e) {
    log << "error: " << e.what() << "\n";
    return kExitAbort;
  }
  const SeparationResult sep = check_category_separation(res.records, labels);
  out << "category medians (" << backend->descriptor().id << " backend)\n";
  for (const auto& [cat, med] : sep.medians) {
    out << "  " << cat;
    for (Metric mt : {Metric::kLf, Metric::kPf, Metric::kMe, Metric::kSe})
      out << "  " << metric_name(mt) << "=" << fixed2(med[static_cast<std::size_t>(mt)]);
    out << "\n";
  }
  for (const auto& p : sep.properties)
    out << (p.passed ? "PASS " : "FAIL ") << p.name << (p.detail.empty() ? "" : " (" + p.detail + ")")
        << "\n";
  if (!a.score.out.empty()) {
    auto f = open_out(a.score.out);
    RecordWriter w(f, a.score.out.ends_with(".csv") ? RecordWriter::Format::kCsv
                                                    : RecordWriter::Format::kJsonl);
    for (const auto& r : res.records) w.write(r);
  }
  return sep.all_passed() ? kExitOk : kExitAbort;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& log = std::cerr) {
  CLI::App app{"Hallucination-aware scoring of ASR transcripts"};
  app.name("shallow");
  app.require_subcommand(1);

  ScoreArgs score;
  auto* c_score = app.add_subcommand("score", "Score a manifest of transcript pairs");
  add_scoring_flags(c_score, score);
  c_score->add_option("--out", score.out, "Score records (.jsonl or .csv)")->required();

  ReportArgs report;
  auto* c_report = app.add_subcommand("report", "Aggregate a score file by dataset and model");
  c_report->add_option("--input", report.input, "Score records from `score`")->required();
  c_report->add_option("--out", report.out, "Markdown table; a .csv sibling is written too")->required();
  c_report->add_option("--vectors", report.vectors, "Also write the per-utterance metric matrix (CSV)");

  CorrelateArgs corr;
  auto* c_corr = app.add_subcommand("correlate", "Spearman correlations per WER threshold");
  c_corr->add_option("--input", corr.input, "Score records from `score`")->required();
  c_corr->add_option("--out", corr.out, "Markdown report; a .csv sibling is written too")->required();
  c_corr->add_option("--bins", corr.bins, "WER thresholds in percent")->capture_default_str();
  c_corr->add_option("--bin-mode", corr.bin_mode, "cumulative or disjoint")->capture_default_str();

  ValidateArgs val;
  auto* c_val = app.add_subcommand("validate-synthetic",
                                   "Check category separation on a labelled synthetic set");
  add_scoring_flags(c_val, val.score);
  c_val->add_option("--out", val.score.out, "Optionally write the score records");
  c_val->add_option("--shuffle-seed", val.shuffle_seed,
                    "Shuffle category labels with this seed (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, log);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, log);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, log);
    return kExitConfig;
  }

  try {
    if (*c_score) return cmd_score(score, log);
    if (*c_report) return cmd_report(report, log);
    if (*c_corr) return cmd_correlate(corr, log);
    if (*c_val) return cmd_validate_synthetic(val, out, log);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ManifestError& e) {
    log << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BackendError& e) {
    log << "error: " << e.what() << "\n";
    return kExitAbort;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitAbort;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitAbort;
  }
  return kExitConfig;
}

}  // namespace shallow::cli
