#include <doctest.h>

#include <random>

#include "lecmeta/errors.hpp"
#include "lecmeta/matching.hpp"
#include "support/oracles.hpp"

using namespace lecmeta;
using matching::best_match;
using matching::Lexicon;
using matching::levenshtein;
using matching::partial_ratio;
using matching::ratio;

namespace {

std::u32string random_string(std::mt19937& rng, size_t max_len) {
  std::uniform_int_distribution<size_t> len_dist(0, max_len);
  std::uniform_int_distribution<int> ch_dist(0, 3);  // alphabet size 4
  std::u32string s;
  size_t len = len_dist(rng);
  for (size_t i = 0; i < len; ++i) s += static_cast<char32_t>(U'a' + ch_dist(rng));
  return s;
}

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("levenshtein basics") {
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("kitten", "sitting") == oracles::levenshtein_memo("kitten", "sitting"));
  CHECK(levenshtein("kitten", "sitting") == 3);
}

TEST_CASE("levenshtein agrees with the memoized oracle") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    auto a = random_string(rng, 12), b = random_string(rng, 12);
    CAPTURE(i);
    REQUIRE(levenshtein(a, b) == oracles::levenshtein_memo(a, b));
  }
}

TEST_CASE("levenshtein is a metric") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    auto a = random_string(rng, 8), b = random_string(rng, 8), c = random_string(rng, 8);
    size_t ab = levenshtein(a, b), ba = levenshtein(b, a);
    size_t bc = levenshtein(b, c), ac = levenshtein(a, c);
    REQUIRE(ab == ba);
    REQUIRE((ab == 0) == (a == b));
    REQUIRE(ac <= ab + bc);
  }
}

TEST_CASE("levenshtein counts Unicode scalars, not bytes") {
  // two-byte codepoints: one substitution, not two
  CHECK(levenshtein("caf\xC3\xA9", "caf\xC3\xA8") == 1);
}

TEST_CASE("ratio") {
  CHECK(ratio("abc", "abc") == 100.0);
  CHECK(ratio("abcd", "") == 0.0);
  CHECK(ratio("", "") == 100.0);
  CHECK(ratio("nptel", "nptei") == doctest::Approx(80.0));
  // spelling slip: two substitutions over 16 characters
  CHECK(ratio("computer sceince", "computer science") == doctest::Approx(87.5));
}

TEST_CASE("partial_ratio") {
  CHECK(partial_ratio("NPTEL", "NPTEL online certification") < 100.0);  // case-sensitive here
  CHECK(partial_ratio("nptel", "nptel online certification") == 100.0);
  CHECK(partial_ratio("abc", "zzabczz") == 100.0);
  CHECK(partial_ratio("abcd", "abxd") == ratio("abcd", "abxd"));  // equal length
  SUBCASE("never below the plain ratio") {
    std::mt19937 rng(31);
    for (int i = 0; i < 300; ++i) {
      auto a = random_string(rng, 10), b = random_string(rng, 10);
      REQUIRE(partial_ratio(a, b) >= ratio(a, b));
    }
    // interleaved insertions: windows alone would score below ratio
    CHECK(partial_ratio("k s rao", "k. s. rao") >= ratio("k s rao", "k. s. rao"));
  }
  SUBCASE("symmetric") {
    CHECK(partial_ratio("abc", "zzabczz") == partial_ratio("zzabczz", "abc"));
  }
}

TEST_CASE("best_match") {
  Lexicon lex;
  lex.category = matching::Category::institute;
  lex.entries = {
      {"IIT Kharagpur", {"iit kharagpur", "indian institute of technology kharagpur"}},
      {"IIT Madras", {"indian institute of technology madras"}},
  };

  SUBCASE("exact after case fold") {
    auto m = best_match("IIT Kharagpur", lex, 80);
    REQUIRE(m);
    CHECK(m->canonical == "IIT Kharagpur");
    CHECK(m->score == 100.0);
  }
  SUBCASE("case-folding invariance") {
    auto lower = best_match("iit kharagpur", lex, 80);
    auto upper = best_match("IIT KHARAGPUR", lex, 80);
    REQUIRE(lower);
    REQUIRE(upper);
    CHECK(lower->canonical == upper->canonical);
    CHECK(lower->score == upper->score);
  }
  SUBCASE("typo within threshold") {
    auto m = best_match("Computer Sceince", matching::default_lexicon(
                            matching::Category::department), 80);
    REQUIRE(m);
    CHECK(m->canonical == "Computer Science");
    CHECK(m->score >= 85.0);
  }
  SUBCASE("garbage query stays below threshold everywhere") {
    auto dept = matching::default_lexicon(matching::Category::department);
    for (const auto& e : dept.entries) {
      CHECK(std::max(ratio("qqqq", matching::case_fold(e.canonical)),
                     partial_ratio("qqqq", matching::case_fold(e.canonical))) < 80.0);
      for (const auto& a : e.aliases)
        CHECK(std::max(ratio("qqqq", a), partial_ratio("qqqq", a)) < 80.0);
    }
    CHECK_FALSE(best_match("qqqq", dept, 80));
  }
  SUBCASE("empty lexicon yields none") {
    Lexicon empty;
    CHECK_FALSE(best_match("anything", empty, 0));
  }
  SUBCASE("deterministic tie-break") {
    Lexicon tie;
    tie.entries = {{"beta", {}}, {"alpha", {}}};
    auto m = best_match("zzzz", tie, 0);  // both score 0
    REQUIRE(m);
    CHECK(m->canonical == "alpha");  // lexicographically smaller
  }
}

TEST_CASE("lexicon JSON round-trip and validation") {
  auto lex = matching::default_lexicon(matching::Category::publisher);
  auto parsed = matching::parse_lexicon(matching::serialize_lexicon(lex));
  CHECK(parsed.category == lex.category);
  REQUIRE(parsed.entries.size() == lex.entries.size());
  for (size_t i = 0; i < lex.entries.size(); ++i) {
    CHECK(parsed.entries[i].canonical == lex.entries[i].canonical);
    CHECK(parsed.entries[i].aliases == lex.entries[i].aliases);
  }

  Lexicon dup;
  dup.entries = {{"X", {}}, {"x", {}}};
  CHECK_THROWS_AS(matching::validate_lexicon(dup), config_error);
  Lexicon empty_name;
  empty_name.entries = {{"", {}}};
  CHECK_THROWS_AS(matching::validate_lexicon(empty_name), config_error);
}

}  // TEST_SUITE
