// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// Informational lines start with "  ".

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shallow.hpp"
#include "shallow/cli.hpp"

namespace fs = std::filesystem;
using namespace shallow;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: got %.6f want %.6f (tol %g)", what.c_str(), got, want, tol);
      failures.push_back(buf);
    }
  }
};

int g_failed = 0;

void report(int n, const std::string& title, const Check& c) {
  std::printf("%s %d. %s\n", c.failures.empty() ? "PASS" : "FAIL", n, title.c_str());
  for (std::size_t i = 0; i < c.failures.size() && i < 10; ++i)
    std::printf("  - %s\n", c.failures[i].c_str());
  if (c.failures.size() > 10) std::printf("  - ... %zu more\n", c.failures.size() - 10);
  if (!c.failures.empty()) ++g_failed;
}

std::string ops_string(const std::vector<EditOp>& ops) {
  std::string s;
  for (EditOp op : ops) s += "MSDI"[static_cast<int>(op)];
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1 --------------------------------------------------------------------------
void lexical_rows() {
  Check c;
  const auto t0 = Clock::now();
  struct Row {
    const char* ref;
    const char* hyp;
    double wer, r_i, r_d, r_s, lf;
  };
  const Row rows[] = {
      {"she left her keys at home", "she forgot her keys", 0.50, 0.00, 0.33, 0.17, 0.12},
      {"she opened a window", "she breached the wall portal to let space in", 2.00, 0.56, 0.00, 0.75, 0.50},
  };
  for (const auto& r : rows) {
    const auto a = align(normalize_and_tokenize(r.ref), normalize_and_tokenize(r.hyp));
    const auto b = lexical_fabrication(a);
    const std::string tag = std::string(r.ref) + " -> " + r.hyp;
    c.near(wer(a.counts), r.wer, 0.005, tag + " wer");
    c.near(b.r_i, r.r_i, 0.005, tag + " r_i");
    c.near(b.r_d, r.r_d, 0.005, tag + " r_d");
    c.near(b.r_s, r.r_s, 0.005, tag + " r_s");
    c.near(b.lf, r.lf, 0.005, tag + " lf");
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 1.0, "runtime " + std::to_string(secs) + " s");
  report(1, "lexical worked rows (wer, r_i, r_d, r_s, LF within 0.005)", c);
}

// 2 --------------------------------------------------------------------------
void aggregation_arithmetic() {
  Check c;
  // "They rided horses quickierly": SD 1, two grammar findings, 4 words.
  const double ge = grammatical_error_score({2, 0, 0}, 4);
  c.near(ge, 0.20, 1e-9, "GE rided");
  c.near(morphological_error(1.0, ge), 0.52, 1e-9, "ME rided");
  // "He paints walls redly": SD 1, no grammar findings.
  c.near(morphological_error(1.0, grammatical_error_score({0, 0, 0}, 4)), 0.40, 1e-9, "ME redly");

  // SE from given LS/GS, compared against the weights written out by hand.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double ls = u(rng), gs = u(rng);
    c.near(semantic_error(ls, gs), 0.25 * ls + 0.75 * gs, 1e-9, "SE");
  }

  // The semantic worked rows give C_1..C_3, SDist and 1-SC; SE follows.
  struct Row {
    const char* name;
    double c1, c2, c3, sdist, one_minus_sc, se;
  };
  const Row rows[] = {{"red/dead flower", 0.96, 0.71, 0.54, 0.40, 0.77, 0.46},
                      {"big/small house", 0.94, 0.73, 0.52, 0.64, 1.00, 0.67},
                      {"video games/sports", 0.65, 0.34, 0.18, 0.71, 1.00, 0.77}};
  for (const auto& r : rows) {
    const double ls = combine_local({r.c1, r.c2, r.c3}, MetricWeights{});
    const double gs = global_semantic(r.sdist, 1.0 - r.one_minus_sc);
    const double by_hand_ls = 0.5 * (1 - r.c1) + 0.3 * (1 - r.c2) + 0.2 * (1 - r.c3);
    const double by_hand_gs = (r.sdist + r.one_minus_sc) / 2;
    c.near(ls, by_hand_ls, 1e-9, std::string(r.name) + " LS");
    c.near(gs, by_hand_gs, 1e-9, std::string(r.name) + " GS");
    const double se = semantic_error(ls, gs);
    c.near(se, 0.25 * by_hand_ls + 0.75 * by_hand_gs, 1e-9, std::string(r.name) + " SE");
    std::printf("  %-20s LS=%.4f GS=%.4f SE=%.4f printed SE=%.2f%s\n", r.name, ls, gs, se, r.se,
                std::abs(se - r.se) <= 0.005 ? "" : "  (differs)");
  }
  report(2, "GE/ME/SE aggregation arithmetic", c);
}

// 3 --------------------------------------------------------------------------
void edge_cases() {
  Check c;
  const ReferenceBackend be;
  const auto same = score_pair({"s", "The cat sat on the mat.", "the cat sat on the mat", {}, {}, {}}, be);
  c.expect(same.wer == 0.0, "exact match wer");
  c.expect(same.lf() == 0.0, "exact match LF");
  c.expect(same.pf() == 0.0, "exact match PF");
  c.expect(same.me() == 0.0, "exact match ME");
  c.expect(same.se() == 0.0, "exact match SE");

  const auto no_ref = score_pair({"r", "", "hello there friend", {}, {}, {}}, be);
  c.expect(no_ref.lexical->r_i == 1.0, "empty reference r_i");
  c.expect(no_ref.lexical->r_d == 0.0 && no_ref.lexical->r_s == 0.0, "empty reference r_d/r_s");
  c.expect(no_ref.lf() == 1.0, "empty reference LF");

  const auto no_hyp = score_pair({"h", "some words were spoken", "", {}, {}, {}}, be);
  c.expect(no_hyp.lexical->r_d == 1.0, "empty hypothesis r_d");
  c.expect(no_hyp.lexical->r_i == 0.0 && no_hyp.lexical->r_s == 0.0, "empty hypothesis r_i/r_s");
  c.expect(no_hyp.lf() == 0.20, "empty hypothesis LF");
  c.expect(no_hyp.wer == 1.0, "empty hypothesis wer");
  report(3, "edge cases (exact match, empty reference, empty hypothesis)", c);
}

// 4 --------------------------------------------------------------------------
void oracle_equivalence() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4);
  const int n = 2000;
  int mismatches[5] = {};
  for (int i = 0; i < n; ++i) {
    // word-level alignment over a small vocabulary so ties are common
    std::vector<std::string> a, b;
    std::uniform_int_distribution<int> len(0, 5), pick(0, 3);
    const char* vocab[] = {"the", "cat", "sat", "mat"};
    for (int k = len(rng); k > 0; --k) a.push_back(vocab[pick(rng)]);
    for (int k = len(rng); k > 0; --k) b.push_back(vocab[pick(rng)]);
    if (ops_string(align_sequences(a, b)) != oracle::preferred_alignment(a, b)) ++mismatches[0];

    const std::string s = oracle::random_word(rng, "abcd", 7);
    const std::string t = oracle::random_word(rng, "abcd", 7);
    const std::vector<char> sv(s.begin(), s.end()), tv(t.begin(), t.end());
    if (levenshtein_distance(s, t) != oracle::edit_distance(sv, tv)) ++mismatches[1];
    if (hamming_normalized(s, t) != oracle::hamming(sv, tv)) ++mismatches[2];
    if (jaro_winkler(s, t) != oracle::jaro_winkler(s, t)) ++mismatches[3];

    std::uniform_int_distribution<int> m(3, 30), small(0, 5);
    std::uniform_real_distribution<double> u(-1, 1);
    const int k = m(rng);
    std::vector<double> x(k), y(k);
    for (int j = 0; j < k; ++j) {
      x[j] = i % 2 ? small(rng) : u(rng);
      y[j] = i % 2 ? small(rng) : u(rng);
    }
    const auto got = spearman(x, y);
    const auto want = oracle::spearman(x, y);
    if (got.has_value() != want.has_value() || (got && !(std::abs(*got - *want) <= 1e-12))) ++mismatches[4];
  }
  const char* names[] = {"alignment", "levenshtein", "hamming", "jaro-winkler", "spearman"};
  for (int k = 0; k < 5; ++k)
    c.expect(mismatches[k] == 0, std::string(names[k]) + ": " + std::to_string(mismatches[k]) + " of " +
                                     std::to_string(n) + " differ");
  const double secs = seconds_since(t0);
  c.expect(secs < 30.0, "runtime " + std::to_string(secs) + " s");
  std::printf("  %d cases per oracle in %.2f s\n", n, secs);
  report(4, "oracle equivalence (alignment, levenshtein, hamming, jaro-winkler, spearman)", c);
}

// 5 --------------------------------------------------------------------------
std::string random_sentence(std::mt19937_64& rng) {
  static const std::vector<std::string> vocab{
      "the", "a", "she", "they", "is", "are", "was", "were", "not", "never", "um", "uh", "flour",
      "flower", "mail", "male", "knight", "night", "their", "there", "cat", "cats", "run", "runs",
      "quickly", "recieve", "teh", "4", "911", "an", "apple", "unique", "idea", "houses", "red",
      "dead", "big", "small", "café", "naïve", "!", "?!", "...", "(", "\"", ",", "the"};
  std::uniform_int_distribution<std::size_t> len(0, 12), pick(0, vocab.size() - 1);
  std::string s;
  for (std::size_t k = len(rng); k > 0; --k) s += (s.empty() ? "" : " ") + vocab[pick(rng)];
  return s;
}

void invariants() {
  Check c;
  const ReferenceBackend be;
  std::mt19937_64 rng(5);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const std::string ref = random_sentence(rng);
    const std::string hyp = random_sentence(rng);
    const auto r = score_pair({std::to_string(i), ref, hyp, {}, {}, {}}, be);
    for (auto [name, v] : {std::pair{"LF", r.lf()}, {"PF", r.pf()}, {"ME", r.me()}, {"SE", r.se()}})
      c.expect(v && *v >= 0.0 && *v <= 1.0, std::string(name) + " out of range for '" + ref + "' / '" + hyp + "'");

    const auto same = score_pair({"id", ref, ref, {}, {}, {}}, be);
    c.expect(same.lf() == 0.0 && same.pf() == 0.0 && same.me() == 0.0 && same.se() == 0.0,
             "identity not zero for '" + ref + "'");

    const auto tr = normalize_and_tokenize(ref), th = normalize_and_tokenize(hyp);
    const double ab = phonetic_fabrication(tr, th).pf, ba = phonetic_fabrication(th, tr).pf;
    c.near(ab, ba, 1e-12, "PF symmetry for '" + ref + "' / '" + hyp + "'");
  }
  report(5, "range [0,1], identity zeros and PF symmetry over 10^4 random pairs", c);
}

// 6 --------------------------------------------------------------------------
void corrected_gs() {
  Check c;
  c.expect(global_semantic(0.0, 1.0) == 0.0, "GS(0, 1) != 0");
  c.expect(global_semantic(1.0, 0.0) == 1.0, "GS(1, 0) != 1");
  report(6, "global semantic orientation: GS(0,1)=0, GS(1,0)=1", c);
}

// 7 --------------------------------------------------------------------------
void category_separation() {
  Check c;
  const Manifest m = ingest(SHALLOW_DATA "/synthetic_fixture.jsonl");
  const ReferenceBackend be;
  const auto res = score_all(m, be);
  std::vector<std::string> labels;
  for (const auto& p : m.pairs) labels.push_back(p.category.value_or(""));
  const auto sep = check_category_separation(res.records, labels);
  for (const auto& p : sep.properties) {
    std::printf("  %s %s%s\n", p.passed ? "ok  " : "miss", p.name.c_str(),
                p.detail.empty() ? "" : (" (" + p.detail + ")").c_str());
    c.expect(p.passed, p.name);
  }

  // Negative control: the shuffle used by `validate-synthetic --shuffle-seed`.
  auto shuffled = [&](std::uint64_t seed) {
    std::vector<std::string> l = labels;
    std::mt19937_64 rng(seed);
    for (std::size_t i = l.size(); i > 1; --i) std::swap(l[i - 1], l[rng() % i]);
    return l;
  };
  c.expect(!check_category_separation(res.records, shuffled(1)).all_passed(),
           "shuffled labels (seed 1) still separate");
  int survived = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed)
    survived += check_category_separation(res.records, shuffled(seed)).all_passed() ? 1 : 0;
  std::printf("  shuffled controls passing all four properties: %d of 200\n", survived);
  report(7, "category separation on the synthetic fixture, shuffled control fails", c);
}

// 8 --------------------------------------------------------------------------
void correlation_fixture() {
  Check c;
  // 200 utterances with wer in (0, 1]. LF is a strictly increasing function
  // of wer. SE tracks wer up to 0.5 and runs against it above that, while
  // staying above every low-wer value.
  std::vector<ScoreRecord> rs;
  for (int i = 1; i <= 200; ++i) {
    ScoreRecord r;
    r.id = std::to_string(i);
    r.backend = "fixture";
    r.wer = i / 200.0;
    r.lexical = LexicalBreakdown{};
    r.lexical->lf = r.wer * r.wer;
    r.semantic = SemanticBreakdown{};
    r.semantic->se = r.wer <= 0.5 ? r.wer : 1.5 - r.wer;
    rs.push_back(r);
  }
  std::vector<double> thresholds = default_thresholds();
  thresholds.push_back(100);
  const auto rep = correlation_by_threshold(rs, thresholds);
  std::optional<double> prev;
  std::string trace;
  for (const auto& bin : rep.bins) {
    const auto lf = rho(bin, Metric::kWer, Metric::kLf);
    const auto se = rho(bin, Metric::kWer, Metric::kSe);
    c.expect(bin.defined && lf && *lf == 1.0, "LF-WER rho != 1 at " + fixed2(bin.threshold));
    c.expect(bool(se), "SE-WER undefined at " + fixed2(bin.threshold));
    if (!se) continue;
    if (bin.threshold <= 50) c.expect(*se == 1.0, "SE-WER rho != 1 at " + fixed2(bin.threshold));
    if (prev) {
      if (bin.threshold > 50) c.expect(*se < *prev, "SE-WER does not decay at " + fixed2(bin.threshold));
      else c.expect(*se <= *prev, "SE-WER rises at " + fixed2(bin.threshold));
    }
    prev = se;
    trace += " " + fixed2(*se);
  }
  std::printf("  SE-WER rho by cumulative bin:%s\n", trace.c_str());
  report(8, "correlation bins: monotone pair rho=1 everywhere, decoupled pair decays", c);
}

// 9 --------------------------------------------------------------------------
void determinism() {
  Check c;
  const fs::path dir = fs::current_path() / "acceptance_scratch";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream log;
  auto score_to = [&](const std::string& name, std::size_t parallelism) {
    cli::ScoreArgs a;
    a.input = SHALLOW_DATA "/determinism_manifest.jsonl";
    a.out = (dir / name).string();
    a.parallelism = parallelism;
    const int code = cli::cmd_score(a, log);
    c.expect(code == 0, name + " exited " + std::to_string(code));
    return slurp(dir / name);
  };
  const std::string first = score_to("run1.jsonl", 1);
  const std::string second = score_to("run2.jsonl", 1);
  const std::string parallel = score_to("run3.jsonl", 4);
  c.expect(!first.empty(), "empty output");
  c.expect(std::count(first.begin(), first.end(), '\n') == 100, "expected 100 records");
  c.expect(first == second, "two runs differ");
  c.expect(first == parallel, "parallel run differs");

  const auto records = read_records_file((dir / "run1.jsonl").string());
  c.expect(records.size() == 100, "read back " + std::to_string(records.size()) + " records");
  {
    std::ostringstream again;
    RecordWriter w(again, RecordWriter::Format::kJsonl);
    for (const auto& r : records) w.write(r);
    c.expect(again.str() == first, "jsonl rewrite differs");
  }
  {
    std::stringstream csv_text;
    RecordWriter w(csv_text, RecordWriter::Format::kCsv);
    for (const auto& r : records) w.write(r);
    const auto back = read_records(csv_text);
    c.expect(back == records, "csv round-trip differs");
  }
  const auto direct = score_all(ingest(SHALLOW_DATA "/determinism_manifest.jsonl"), ReferenceBackend{});
  c.expect(direct.records == records, "ingested records differ from freshly scored ones");
  report(9, "byte-identical repeated runs and lossless export/ingest", c);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{
      lexical_rows, aggregation_arithmetic, edge_cases,          oracle_equivalence, invariants,
      corrected_gs, category_separation,    correlation_fixture, determinism};
  for (const auto& f : criteria) {
    try {
      f();
    } catch (const std::exception& e) {
      std::printf("FAIL (exception: %s)\n", e.what());
      ++g_failed;
    }
  }
  std::printf("%d criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
