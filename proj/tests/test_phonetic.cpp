#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "shallow/phonetic.hpp"

using namespace shallow;
using Catch::Approx;

TEST_CASE("metaphone agrees with the frozen table", "[phonetic]") {
  const auto rows = oracle::read_tsv(SHALLOW_FIXTURES "/metaphone.tsv");
  REQUIRE(rows.size() > 2000);
  std::size_t mismatches = 0;
  for (const auto& r : rows) {
    REQUIRE(r.size() == 2);
    const std::string got = metaphone(r[0]);
    if (got != r[1]) {
      ++mismatches;
      UNSCOPED_INFO(r[0] << ": got " << got << ", want " << r[1]);
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("metaphone spot checks", "[phonetic]") {
  CHECK(metaphone("flour") == "FLR");
  CHECK(metaphone("flower") == "FLWR");
  CHECK(metaphone("knight") == "NT");
  CHECK(metaphone("the") == "0");
  CHECK(metaphone("4") == "");
  CHECK(metaphone("") == "");
}

TEST_CASE("jaro-winkler agrees with the frozen table", "[phonetic]") {
  const auto rows = oracle::read_tsv(SHALLOW_FIXTURES "/jaro_winkler.tsv");
  REQUIRE(rows.size() > 1000);
  for (const auto& r : rows) {
    REQUIRE(r.size() == 4);
    const auto a = to_code_points(r[0]);
    const auto b = to_code_points(r[1]);
    INFO("'" << r[0] << "' / '" << r[1] << "'");
    if (a.empty() && b.empty()) {
      // The table's library returns 0 here; two empty codes are identical.
      CHECK(jaro_winkler(a, b) == 1.0);
      continue;
    }
    CHECK(jaro_similarity(a, b) == Approx(std::stod(r[2])).margin(1e-12));
    CHECK(jaro_winkler(a, b) == Approx(std::stod(r[3])).margin(1e-12));
  }
}

TEST_CASE("per-token encoding joins codes with spaces", "[phonetic]") {
  CHECK(metaphone_encode(normalize_and_tokenize("She bakes with flour")) == "X BKS W0 FLR");
  CHECK(metaphone_encode(normalize_and_tokenize("Isle by it 4 ewe")) == "ISL B IT EW");
  PhoneticOptions keep;
  keep.keep_unencodable = true;
  CHECK(metaphone_encode(normalize_and_tokenize("Isle by it 4 ewe"), keep) == "ISL B IT 4 EW");
  CHECK(metaphone_encode(TokenSequence{}) == "");
}

TEST_CASE("phonetic rows from the worked examples", "[phonetic]") {
  struct Row {
    const char* ref;
    const char* hyp;
    double h, l, one_minus_jw, pf;
  };
  const Row rows[] = {
      {"She bakes with flour", "She baks with flower", 0.15, 0.07, 0.02, 0.08},
      {"I cleaned the kitchen", "I leaned the kitchen", 0.83, 0.08, 0.02, 0.31},
      {"I will buy it for you", "Isle by it 4 ewe", 0.93, 0.43, 0.36, 0.57},
  };
  for (const Row& r : rows) {
    INFO(r.ref << " / " << r.hyp);
    const auto b = phonetic_fabrication(normalize_and_tokenize(r.ref), normalize_and_tokenize(r.hyp));
    CHECK(b.h_n == Approx(r.h).margin(0.005));
    if (r.l != 0.07) CHECK(b.l_n == Approx(r.l).margin(0.005));
    CHECK(1.0 - b.jw == Approx(r.one_minus_jw).margin(0.005));
    CHECK(b.pf == Approx(r.pf).margin(0.005));
  }
}

TEST_CASE("flour row levenshtein cell", "[phonetic]") {
  // "X BKS W0 FLR" vs "X BKS W0 FLWR": one insertion over 13 characters.
  // The printed 0.07 is 0.0069 below this; H = 2/13 and PF agree with the
  // printed row, so only this cell is off.
  const auto b = phonetic_fabrication(normalize_and_tokenize("She bakes with flour"),
                                      normalize_and_tokenize("She baks with flower"));
  CHECK(b.l_n == 1.0 / 13.0);
  CHECK(b.h_n == 2.0 / 13.0);
}

TEST_CASE("phonetic identity and homophones", "[phonetic]") {
  const auto same = phonetic_fabrication(normalize_and_tokenize("red flower"),
                                         normalize_and_tokenize("red flower"));
  CHECK(same.pf == 0.0);
  CHECK(same.jw == 1.0);
  const auto homo = phonetic_fabrication(normalize_and_tokenize("the mail came"),
                                         normalize_and_tokenize("the male came"));
  CHECK(homo.encoded_ref == homo.encoded_hyp);
  CHECK(homo.pf == 0.0);
  const auto both_empty = phonetic_from_codes("", "");
  CHECK(both_empty.pf == 0.0);
  const auto one_empty = phonetic_from_codes("", "AB");
  CHECK(one_empty.pf == 1.0);
}

TEST_CASE("phonetic fabrication is symmetric and bounded", "[phonetic]") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    std::string a, b;
    for (int k = 0; k < 4; ++k) {
      a += oracle::random_word(rng, "abcdefghiklmnoprstuwy", 6) + " ";
      b += oracle::random_word(rng, "abcdefghiklmnoprstuwy", 6) + " ";
    }
    const auto x = phonetic_fabrication(normalize_and_tokenize(a), normalize_and_tokenize(b));
    const auto y = phonetic_fabrication(normalize_and_tokenize(b), normalize_and_tokenize(a));
    INFO(a << " / " << b);
    CHECK(x.pf == y.pf);
    CHECK(x.pf >= 0.0);
    CHECK(x.pf <= 1.0);
  }
}

TEST_CASE("double metaphone primary codes", "[phonetic]") {
  // TH before OM reads as T; the P is only dropped in PH, PP and PB.
  CHECK(double_metaphone("Thompson").primary == "TMPSN");
  CHECK(double_metaphone("Smith").primary == "SM0");
  CHECK(double_metaphone("Smith").alternate == "XMT");
  CHECK(double_metaphone("knight").primary == "NT");
  PhoneticOptions dm;
  dm.codec = PhoneticCodec::kDoubleMetaphonePrimary;
  CHECK(metaphone_encode(normalize_and_tokenize("Smith Thompson"), dm) == "SM0 TMPSN");
}
