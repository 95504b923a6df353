#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "seldiac/align.hpp"
#include "seldiac/error.hpp"
#include "seldiac/synth.hpp"

using namespace seldiac;

TEST_SUITE("align") {
  TEST_CASE("recovers a bijective dictionary") {
    const auto bc = synth::bijective_corpus(1000, 20, 3);
    const auto m = train_ibm2(bc.corpus);
    const auto tt = top_n_translations(m, 1);
    std::size_t right = 0;
    for (const auto& [f, e] : bc.translation) {
      const auto it = tt.entries.find(f);
      if (it != tt.entries.end() && it->second.at(0).first == e) ++right;
    }
    CHECK(right == bc.translation.size());
    // Order is preserved, so every Viterbi link is the diagonal.
    for (std::size_t k = 0; k < 20; ++k) {
      const auto& [src, tgt] = bc.corpus.pairs[k];
      const auto links = viterbi_align(m, src, tgt);
      CHECK(links.size() == src.size());
      for (const auto& [i, j] : links) CHECK(i == j);
    }
  }

  TEST_CASE("a single pair aligns with certainty") {
    ParallelCorpus p;
    p.pairs.push_back({{"f"}, {"e"}});
    const auto m = train_ibm2(p);
    CHECK(m.prob("f", "e") == doctest::Approx(1.0));
  }

  TEST_CASE("prior is uniform with zero tension and no null") {
    for (std::size_t mlen : {1u, 3u, 7u}) {
      const auto pr = alignment_prior(1, 4, mlen, 0.0, 0.0);
      REQUIRE(pr.size() == mlen + 1);
      for (std::size_t i = 0; i < mlen; ++i) CHECK(pr[i] == doctest::Approx(1.0 / mlen));
      CHECK(pr[mlen] == doctest::Approx(0.0));
    }
    const auto pr = alignment_prior(2, 5, 5, 4.0, 0.08);
    double s = 0;
    for (double x : pr) s += x;
    CHECK(s == doctest::Approx(1.0));
    CHECK(pr[5] == doctest::Approx(0.08));
    CHECK(std::max_element(pr.begin(), pr.begin() + 5) - pr.begin() == 2);
  }

  TEST_CASE("log-likelihood never decreases and rows are stochastic") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto bc = synth::bijective_corpus(300, 15, seed);
      // Add noise words so the problem is not trivially separable.
      std::mt19937_64 rng(seed);
      for (auto& [s, t] : bc.corpus.pairs) {
        if (rng() % 2) t.push_back("noise" + std::to_string(rng() % 3));
      }
      AlignOptions o;
      o.iterations = 8;
      o.optimize_tension = false;
      const auto m = train_ibm2(bc.corpus, o);
      REQUIRE(m.log_likelihood.size() == 8);
      for (std::size_t i = 1; i < m.log_likelihood.size(); ++i) {
        CHECK(m.log_likelihood[i] >= m.log_likelihood[i - 1] - 1e-6 * std::abs(m.log_likelihood[i - 1]));
      }
      for (const auto& [f, row] : m.ttable) {
        double s = 0;
        for (const auto& [e, p] : row) {
          CHECK(p >= 0.0);
          CHECK(p <= 1.0);
          s += p;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
      }
      double s = 0;
      for (const auto& [e, p] : m.null_row) s += p;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("Viterbi links are in range and unique per target") {
    const auto bc = synth::bijective_corpus(200, 12, 5);
    const auto m = train_ibm2(bc.corpus);
    const Sentence src = {"f0", "f1", "f2"};
    const Sentence tgt = {"x", bc.translation.at("f1"), "y", "z"};
    const auto links = viterbi_align(m, src, tgt);
    std::set<std::size_t> targets;
    for (const auto& [i, j] : links) {
      CHECK(i < src.size());
      CHECK(j < tgt.size());
      CHECK(targets.insert(j).second);
    }
    CHECK(std::find(links.begin(), links.end(), Link{1, 1}) != links.end());
    CHECK(viterbi_align(m, {}, tgt).empty());
    CHECK(format_links({{0, 1}, {2, 0}}) == "0-1 2-0");
  }

  TEST_CASE("unknown words fall back to the floor") {
    const auto bc = synth::bijective_corpus(50, 5, 1);
    const auto m = train_ibm2(bc.corpus);
    CHECK(m.prob("never-seen", "e0") == doctest::Approx(kProbFloor));
    CHECK(m.prob("f0", "never-seen") == doctest::Approx(kProbFloor));
  }

  TEST_CASE("top-N equals a full sort cut at N") {
    std::mt19937_64 rng(9);
    ParallelCorpus p;
    for (int k = 0; k < 200; ++k) {
      Sentence s, t;
      for (int i = 0; i < 4; ++i) s.push_back("f" + std::to_string(rng() % 6));
      for (int i = 0; i < 4; ++i) t.push_back("e" + std::to_string(rng() % 9));
      p.pairs.push_back({s, t});
    }
    const auto m = train_ibm2(p);
    const auto all = top_n_translations(m, std::nullopt);
    for (std::size_t n : {1u, 2u, 5u, 100u}) {
      const auto tt = top_n_translations(m, n);
      CHECK(tt.entries == truncate(all, n).entries);
      for (const auto& [f, row] : m.ttable) {
        std::vector<std::pair<std::string, double>> sorted;
        for (const auto& [e, prob] : row) {
          if (prob > kProbFloor) sorted.emplace_back(e, prob);
        }
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
          return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        sorted.resize(std::min(n, sorted.size()));
        CHECK(tt.entries.at(f) == sorted);
      }
    }
  }

  TEST_CASE("thread count does not change the model") {
    auto bc = synth::bijective_corpus(400, 25, 11);
    std::mt19937_64 rng(11);
    for (auto& [s, t] : bc.corpus.pairs) {
      if (rng() % 2) t.push_back("noise" + std::to_string(rng() % 5));
    }
    AlignOptions one;
    AlignOptions four;
    four.threads = 4;
    const auto a = train_ibm2(bc.corpus, one);
    const auto b = train_ibm2(bc.corpus, four);
    CHECK(a.lambda == doctest::Approx(b.lambda).epsilon(1e-12));
    REQUIRE(a.ttable.size() == b.ttable.size());
    for (const auto& [f, row] : a.ttable) {
      for (const auto& [e, p] : row) CHECK(std::abs(p - b.ttable.at(f).at(e)) <= 1e-12);
    }
  }

  TEST_CASE("translation table file round trip") {
    TranslationTable tt;
    tt.entries["f"] = {{"a", 0.75}, {"b", 0.25}};
    tt.entries["g"] = {{"c", 1.0}};
    const auto path = (std::filesystem::temp_directory_path() / "seldiac_tt.tsv").string();
    write_ttable(path, tt);
    const auto back = read_ttable(path);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries.at("f")[0].first == "a");
    CHECK(back.entries.at("f")[1].second == doctest::Approx(0.25));
    CHECK(back.entries.at("g")[0].second == doctest::Approx(1.0));
    std::filesystem::remove(path);
  }
}
