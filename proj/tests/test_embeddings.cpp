#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "seldiac/embeddings.hpp"
#include "seldiac/error.hpp"
#include "seldiac/synth.hpp"

using namespace seldiac;

namespace {

Corpus random_corpus(std::size_t tokens, std::size_t vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Corpus c;
  Sentence s;
  for (std::size_t i = 0; i < tokens; ++i) {
    // Skewed so that word frequencies differ.
    const std::size_t r = rng() % vocab;
    s.push_back("w" + std::to_string((r * r) / vocab));
    if (s.size() == 10) {
      c.sentences.push_back(s);
      s.clear();
    }
  }
  return c;
}

EmbeddingTable hand_table(const std::vector<std::vector<float>>& rows) {
  std::vector<std::string> vocab;
  for (std::size_t i = 0; i < rows.size(); ++i) vocab.push_back("v" + std::to_string(i));
  EmbeddingTable t(vocab, rows[0].size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), t.word(i).begin());
    std::copy(rows[i].begin(), rows[i].end(), t.context(i).begin());
  }
  return t;
}

}  // namespace

TEST_SUITE("embeddings") {
  TEST_CASE("identically distributed words end up closer") {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto tc = synth::template_corpus(2000, seed);
      SgnsOptions o;
      o.dim = 30;
      o.epochs = 5;
      o.seed = seed;
      // With 27 types every word is frequent enough to be subsampled away.
      o.subsample = 0;
      const auto res = train_sgns(tc.corpus, o);
      const auto& t = res.table;
      const auto a = *t.index(tc.a), b = *t.index(tc.b), c = *t.index(tc.c);
      wins += cosine(t.word(a), t.word(b)) > cosine(t.word(a), t.word(c));
    }
    CHECK(wins >= 4);
  }

  TEST_CASE("degenerate corpus stays finite") {
    Corpus c;
    for (int i = 0; i < 200; ++i) c.sentences.push_back({"a", "b"});
    SgnsOptions o;
    o.dim = 20;
    o.min_count = 1;
    const auto res = train_sgns(c, o);
    for (float x : res.table.word_data()) CHECK(std::isfinite(x));
    for (float x : res.table.context_data()) CHECK(std::isfinite(x));
  }

  TEST_CASE("vectors stay bounded and vocabulary is complete") {
    const Corpus c = random_corpus(10000, 300, 9);
    SgnsOptions o;
    o.dim = 50;
    o.seed = 4;
    const auto res = train_sgns(c, o);
    const auto& t = res.table;
    const auto stats = vocab_stats(c);
    std::size_t above = 0;
    for (const auto& [w, n] : stats.type_freqs) {
      if (n >= o.min_count) {
        ++above;
        CHECK(t.index(w).has_value());
      }
    }
    CHECK(t.size() == above);
    CHECK(std::set<std::string>(t.vocab().begin(), t.vocab().end()).size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      double norm = 0;
      for (float x : t.word(i)) norm += double(x) * x;
      norm = std::sqrt(norm);
      CHECK(norm > 0);
      CHECK(norm < 100);
      CHECK(cosine(t.word(i), t.word(i)) == doctest::Approx(1.0).epsilon(1e-6));
    }
    REQUIRE(res.epoch_loss.size() == o.epochs);
    CHECK(res.epoch_loss.back() < res.epoch_loss.front());
  }

  TEST_CASE("single-threaded training is bit-identical") {
    const Corpus c = random_corpus(3000, 100, 1);
    SgnsOptions o;
    o.dim = 16;
    o.seed = 77;
    const auto a = train_sgns(c, o);
    const auto b = train_sgns(c, o);
    CHECK(a.table.vocab() == b.table.vocab());
    CHECK(a.table.word_data() == b.table.word_data());
    CHECK(a.table.context_data() == b.table.context_data());
    CHECK(a.epoch_loss == b.epoch_loss);
  }

  TEST_CASE("multi-threaded training produces finite vectors") {
    const Corpus c = random_corpus(3000, 100, 1);
    SgnsOptions o;
    o.dim = 16;
    o.threads = 3;
    const auto r = train_sgns(c, o);
    for (float x : r.table.word_data()) CHECK(std::isfinite(x));
  }

  TEST_CASE("errors") {
    Corpus c;
    c.sentences.push_back({"a"});
    CHECK_THROWS_AS(train_sgns(c, {}), EmptyVocabulary);
    SgnsOptions o;
    o.dim = 1;
    o.min_count = 1;
    CHECK_THROWS_AS(train_sgns(c, o), std::invalid_argument);
  }

  TEST_CASE("nearest neighbors") {
    const EmbeddingTable t = hand_table({{1, 0, 0}, {0.9f, 0.1f, 0}, {0, 1, 0}, {0.5f, 0.5f, 0}, {-1, 0, 0}});
    CHECK(nearest_neighbors(t, "v0", 0).empty());
    for (std::size_t n : {1u, 2u, 4u, 9u}) {
      const auto r = nearest_neighbors(t, "v0", n);
      CHECK(r.size() == std::min<std::size_t>(n, t.size() - 1));
      for (const auto& [w, s] : r) CHECK(w != "v0");
    }
    CHECK_THROWS_AS(nearest_neighbors(t, "zzz", 2), UnknownWord);
  }

  TEST_CASE("nearest neighbors match an exhaustive scan") {
    std::mt19937_64 rng(8);
    std::normal_distribution<float> g;
    std::vector<std::vector<float>> rows(40, std::vector<float>(6));
    for (auto& r : rows) {
      for (auto& x : r) x = g(rng);
    }
    const EmbeddingTable t = hand_table(rows);
    for (std::size_t q = 0; q < rows.size(); ++q) {
      std::vector<std::pair<double, std::size_t>> scan;
      for (std::size_t j = 0; j < rows.size(); ++j) {
        if (j != q) scan.emplace_back(-oracle::cosine(rows[q], rows[j]), j);
      }
      std::sort(scan.begin(), scan.end());
      const auto got = nearest_neighbors(t, "v" + std::to_string(q), 10);
      REQUIRE(got.size() == 10);
      for (std::size_t k = 0; k < 10; ++k) {
        CHECK(got[k].first == "v" + std::to_string(scan[k].second));
        CHECK(got[k].second == doctest::Approx(-scan[k].first).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("combined space averages word and context cosines") {
    std::vector<std::string> vocab = {"a", "b"};
    EmbeddingTable t(vocab, 2, true);
    const float w0[] = {1, 0}, w1[] = {0, 1}, c0[] = {1, 0}, c1[] = {1, 0};
    std::copy(w0, w0 + 2, t.word(0).begin());
    std::copy(w1, w1 + 2, t.word(1).begin());
    std::copy(c0, c0 + 2, t.context(0).begin());
    std::copy(c1, c1 + 2, t.context(1).begin());
    NeighborIndex idx(t, VectorSpace::kCombined);
    CHECK(idx.cosine(0, 1) == doctest::Approx(0.5));
    CHECK(NeighborIndex(t, VectorSpace::kContext).cosine(0, 1) == doctest::Approx(1.0));
    CHECK(NeighborIndex(t, VectorSpace::kWord).cosine(0, 1) == doctest::Approx(0.0));
  }

  TEST_CASE("save and load round trip") {
    const auto path = (std::filesystem::temp_directory_path() / "seldiac_emb.txt").string();
    const Corpus c = random_corpus(2000, 50, 3);
    SgnsOptions o;
    o.dim = 8;
    const auto t = train_sgns(c, o).table;
    save_embeddings(path, t);
    const auto u = load_embeddings(path);
    REQUIRE(u.vocab() == t.vocab());
    REQUIRE(u.has_context());
    CHECK(u.word_data() == t.word_data());
    CHECK(u.context_data() == t.context_data());
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".ctx");
  }
}
