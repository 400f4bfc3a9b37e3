#include <catch2/catch_amalgamated.hpp>

#include "shallow/morphological.hpp"

using namespace shallow;
using Catch::Approx;

TEST_CASE("structural divergence is a jaccard distance", "[morphological]") {
  const DependencyRelationSet a{{"ROOT", "root", "ride"}, {"ride", "nsubj", "they"}, {"ride", "obj", "horses"}};
  const DependencyRelationSet b{{"ROOT", "root", "ride"}, {"ride", "nsubj", "they"}, {"ride", "advmod", "fast"}};
  CHECK(structural_divergence(a, a) == 0.0);
  CHECK(structural_divergence(a, b) == Approx(1.0 - 2.0 / 4.0));
  CHECK(structural_divergence({}, {}) == 0.0);
  CHECK(structural_divergence(a, {}) == 1.0);
  CHECK(structural_divergence(a, b) == structural_divergence(b, a));
}

TEST_CASE("relations are compared in canonical text form", "[morphological]") {
  const DependencyRelationSet a{{"Ride", "root", "Horses."}};
  const DependencyRelationSet b{{"ride", "root", "horses"}};
  CHECK(structural_divergence(normalize_relations(a), normalize_relations(b)) == 0.0);
  // labels are not normalized
  const DependencyRelationSet c{{"ride", "ROOT", "horses"}};
  CHECK(structural_divergence(normalize_relations(c), normalize_relations(b)) == 1.0);
}

TEST_CASE("grammatical error score", "[morphological]") {
  // "They rided horses quickierly": two grammar findings over four words.
  CHECK(grammatical_error_score({2, 0, 0}, 4) == Approx(0.20).margin(1e-12));
  CHECK(grammatical_error_score({0, 1, 0}, 5) == Approx(0.06).margin(1e-12));
  CHECK(grammatical_error_score({0, 0, 1}, 10) == Approx(0.03).margin(1e-12));
  CHECK(grammatical_error_score({10, 10, 10}, 2) == 1.0);
  CHECK(grammatical_error_score({3, 0, 0}, 0) == 0.0);
}

TEST_CASE("morphological error combines structure and grammar", "[morphological]") {
  CHECK(morphological_error(1.0, 0.20) == Approx(0.52).margin(1e-12));
  CHECK(morphological_error(1.0, 0.0) == Approx(0.40).margin(1e-12));
  CHECK(morphological_error(0.0, 0.0) == 0.0);
  const auto b = morphological_breakdown({{"ROOT", "root", "ride"}}, {{"ROOT", "root", "rided"}},
                                         {2, 0, 0}, 4);
  CHECK(b.sd == 1.0);
  CHECK(b.ge == Approx(0.2));
  CHECK(b.me == Approx(0.52));
  CHECK(b.counts == GrammarErrorCounts{2, 0, 0});
}

TEST_CASE("custom morphological weights", "[morphological]") {
  MetricWeights w;
  w.me_sd = 1.0;
  w.me_ge = 0.0;
  CHECK(morphological_error(0.3, 0.9, w) == Approx(0.3));
  w.ge_grammar = 1.0;
  w.ge_spell = 0.0;
  w.ge_punct = 0.0;
  CHECK(grammatical_error_score({1, 5, 5}, 4, w) == Approx(0.25));
}
