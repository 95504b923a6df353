#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "seldiac/error.hpp"
#include "seldiac/textcore.hpp"

using namespace seldiac;

namespace {

std::string random_bw_word(std::mt19937_64& rng) {
  static const std::string letters = "bt vjHxd*rzs$SDTZEgfqklmnhwyAY'|>&<}p";
  std::string w;
  const std::size_t n = 1 + rng() % 7;
  for (std::size_t i = 0; i < n; ++i) {
    char c = letters[rng() % letters.size()];
    if (c == ' ') c = 'k';
    w.push_back(c);
    const std::size_t marks = rng() % 3;
    for (std::size_t m = 0; m < marks; ++m) w.push_back(oracle::kBwMarks[rng() % oracle::kBwMarks.size()]);
  }
  return w;
}

}  // namespace

TEST_SUITE("textcore") {
  TEST_CASE("strip_diacritics worked examples") {
    CHECK(strip_diacritics("katab") == "ktb");
    CHECK(strip_diacritics("ktb") == "ktb");
    CHECK(strip_diacritics("bayot") == "byt");
    CHECK(WordForm::of("kutub").key == "ktb");
    CHECK(WordForm::of("kutub").surface == "kutub");
  }

  TEST_CASE("to_full_cm worked examples") {
    CHECK(to_full_cm("Ealama") == "Ealam");
    CHECK(to_full_cm("Ealamu") == "Ealam");
    CHECK(to_full_cm("ktb") == "ktb");
    CHECK(to_full_cm("kutubN") == "kutub");
    CHECK(to_full_cm("baEoda") == "baEod");
  }

  TEST_CASE("to_full_cm keeps shadda and dagger alef at the end") {
    CHECK(to_full_cm("rab~a") == "rab~");
    CHECK(to_full_cm("rab~") == "rab~");
    CHECK(to_full_cm("h`") == "h`");
    CHECK(to_full_cm("h`a") == "h`");
    DiacriticSet loose(default_diacritics().marks(), false);
    CHECK(to_full_cm("rab~a", loose) == "rab");
    CHECK(to_full_cm("h`a", loose) == "h`");
  }

  TEST_CASE("abstract_pattern worked examples") {
    CHECK(abstract_pattern("katab").pattern == "CaCaC");
    CHECK(abstract_pattern("kutib").pattern == "CuCiC");
    CHECK(abstract_pattern("ktb").pattern == "CCC");
    CHECK(abstract_pattern("Ear~aD").pattern == "CaC~aC");
  }

  TEST_CASE("transliteration worked examples") {
    const std::string katab = "كَتَب";
    const std::string bayot = "بَيْت";
    CHECK(transliterate(katab, Direction::kArabicToBuckwalter) == "katab");
    CHECK(transliterate(bayot, Direction::kArabicToBuckwalter) == "bayot");
    CHECK(transliterate("katab", Direction::kBuckwalterToArabic) == katab);
  }

  TEST_CASE("transliteration round trip on the whole table") {
    std::string bw;
    std::string ar;
    for (const auto& [c, cp] : buckwalter_table()) {
      bw.push_back(c);
      utf8::append(ar, cp);
    }
    CHECK(transliterate(bw, Direction::kBuckwalterToArabic) == ar);
    CHECK(transliterate(ar, Direction::kArabicToBuckwalter) == bw);
    CHECK(transliterate(transliterate(bw, Direction::kBuckwalterToArabic),
                        Direction::kArabicToBuckwalter) == bw);
  }

  TEST_CASE("strict transliteration reports the code point position") {
    const std::string mixed = "ككx";
    try {
      (void)transliterate(mixed, Direction::kArabicToBuckwalter);
      FAIL("expected UnknownCharacter");
    } catch (const UnknownCharacter& e) {
      CHECK(e.position() == 2);
    }
    CHECK(transliterate(mixed, Direction::kArabicToBuckwalter, false) == "kkx");
  }

  TEST_CASE("diacritic set: Buckwalter marks mirror the Unicode marks") {
    const DiacriticSet& d = default_diacritics();
    CHECK(d.marks().size() == d.buckwalter_marks().size());
    std::set<char32_t> bw(d.buckwalter_marks().begin(), d.buckwalter_marks().end());
    for (char c : oracle::kBwMarks) CHECK(bw.count(static_cast<char32_t>(c)) == 1);
    for (const auto& [c, cp] : buckwalter_table()) {
      // A character is a mark in one script exactly when it is in the other.
      CHECK(d.is_mark(static_cast<char32_t>(c)) == d.is_mark(cp));
    }
  }

  TEST_CASE("Unicode and Buckwalter inputs behave identically") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
      const std::string w = random_bw_word(rng);
      const std::string ar = transliterate(w, Direction::kBuckwalterToArabic);
      CHECK(transliterate(strip_diacritics(ar), Direction::kArabicToBuckwalter) == strip_diacritics(w));
      CHECK(transliterate(to_full_cm(ar), Direction::kArabicToBuckwalter) == to_full_cm(w));
      CHECK(has_diacritic(ar) == has_diacritic(w));
    }
  }

  TEST_CASE("property laws against the oracle") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
      const std::string w = random_bw_word(rng);
      const std::string s = strip_diacritics(w);
      CHECK(s == oracle::strip(w));
      CHECK(to_full_cm(w) == oracle::full_cm(w));
      CHECK(abstract_pattern(w).pattern == oracle::pattern(w));
      // Idempotence and commutation.
      CHECK(strip_diacritics(s) == s);
      CHECK(strip_diacritics(to_full_cm(w)) == s);
      // Length law.
      const auto p = abstract_pattern(w).pattern;
      CHECK(p.size() == w.size());
      CHECK(static_cast<std::size_t>(std::count(p.begin(), p.end(), 'C')) == s.size());
      CHECK(abstract_pattern(s).pattern == std::string(s.size(), 'C'));
      CHECK_FALSE(has_diacritic(s));
      CHECK_FALSE(ends_in_case_mark(to_full_cm(w)));
    }
  }

  TEST_CASE("utf8 helpers") {
    CHECK(utf8::valid("abc"));
    CHECK_FALSE(utf8::valid("\xC0\xAF"));
    CHECK_FALSE(utf8::valid("\xE2\x82"));
    const auto d = utf8::decode("كa");
    REQUIRE(d.has_value());
    CHECK(d->size() == 2);
    CHECK(utf8::encode(*d) == "كa");
  }

  TEST_CASE("unified tokens") {
    for (const char* t : {"<URL>", "<EMAIL>", "<NUM>", "<PUNC>", "<SYM>"}) CHECK(is_unified_token(t));
    CHECK_FALSE(is_unified_token("<FOO>"));
    CHECK_FALSE(is_unified_token("katab"));
  }
}
