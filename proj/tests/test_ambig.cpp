#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "seldiac/ambig.hpp"
#include "seldiac/error.hpp"

using namespace seldiac;

namespace {

Corpus fullcm(std::vector<Sentence> s) {
  Corpus c;
  c.sentences = std::move(s);
  c.scheme = {Scheme::kFullCm, {}};
  return c;
}

EmbeddingTable table_from(const std::vector<std::pair<std::string, std::vector<float>>>& rows) {
  std::vector<std::string> vocab;
  for (const auto& [w, v] : rows) vocab.push_back(w);
  EmbeddingTable t(vocab, rows[0].second.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].second.begin(), rows[i].second.end(), t.word(i).begin());
    std::copy(rows[i].second.begin(), rows[i].second.end(), t.context(i).begin());
  }
  t.trained_on = {Scheme::kNone, {}};
  return t;
}

// Small jitter keeps the neighbor order strict.
std::vector<float> around(std::size_t axis, std::size_t dim, float jitter) {
  std::vector<float> v(dim, 0.0f);
  v[axis] = 1.0f;
  v[(axis + 1) % dim] = jitter;
  return v;
}

std::vector<std::string> random_variants(std::mt19937_64& rng, const std::string& key) {
  std::set<std::string> out;
  const std::size_t n = 1 + rng() % 3;
  while (out.size() < n) {
    std::string v;
    for (char c : key) {
      v.push_back(c);
      if (rng() % 2) v.push_back("aiuo"[rng() % 4]);
    }
    out.insert(v);
  }
  return {out.begin(), out.end()};
}

}  // namespace

TEST_SUITE("ambig") {
  TEST_CASE("MULTI worked examples") {
    MorphLexicon lex;
    lex.add("Ealam");
    lex.add("Eilom");
    lex.add("Ealima");
    lex.add("bayot");
    const auto d = build_multi(lex);
    CHECK(d.keying == Keying::kUndiac);
    CHECK(d.ambiguous("Elm"));
    CHECK_FALSE(d.ambiguous("byt"));
    CHECK(d.labels.at("byt") == Label::kUnambiguous);
    CHECK_FALSE(d.ambiguous("xyz"));
    CHECK(d.labels.count("xyz") == 0);
    // Case marks collapse under FULL-CM, so these are one analysis.
    MorphLexicon same;
    same.add("kataba");
    same.add("katabu");
    CHECK_FALSE(build_multi(same).ambiguous("ktb"));
  }

  TEST_CASE("MULTI against the oracle") {
    std::mt19937_64 rng(4);
    const std::vector<std::string> keys = {"ktb", "Elm", "drs", "qlb", "byt", "HsAb"};
    for (int trial = 0; trial < 50; ++trial) {
      MorphLexicon lex;
      std::map<std::string, std::set<std::string>> raw;
      for (const auto& k : keys) {
        if (rng() % 4 == 0) continue;
        for (const auto& v : random_variants(rng, k)) {
          lex.add(v);
          raw[k].insert(oracle::full_cm(v));
        }
      }
      const auto d = build_multi(lex);
      const auto expect = oracle::multi_labels(raw);
      REQUIRE(d.labels.size() == expect.size());
      for (const auto& [k, amb] : expect) CHECK(d.ambiguous(k) == amb);
    }
  }

  TEST_CASE("SENSE: two orthogonal neighborhoods make a word ambiguous") {
    std::vector<std::pair<std::string, std::vector<float>>> rows;
    rows.push_back({"w", {1, 1, 0, 0}});
    for (int i = 0; i < 6; ++i) rows.push_back({"a" + std::to_string(i), around(0, 4, 0.01f * (i + 1))});
    for (int i = 0; i < 6; ++i) rows.push_back({"b" + std::to_string(i), around(1, 4, 0.01f * (i + 1))});
    const auto t = table_from(rows);
    SenseOptions o;
    o.graph_size = 12;
    o.granularity = 5;
    o.min_cluster = 5;
    const auto d = build_sense(t, o);
    CHECK(d.ambiguous("w"));
    CHECK(d.method == Method::kSense);
    CHECK(d.labels.size() == t.size());
  }

  TEST_CASE("SENSE: one tight neighborhood is unambiguous") {
    std::vector<std::pair<std::string, std::vector<float>>> rows;
    rows.push_back({"w", {1, 0.2f, 0}});
    for (int i = 0; i < 10; ++i) rows.push_back({"c" + std::to_string(i), around(0, 3, 0.01f * (i + 1))});
    const auto t = table_from(rows);
    SenseOptions o;
    o.graph_size = 10;
    o.granularity = 9;
    o.min_cluster = 5;
    CHECK_FALSE(build_sense(t, o).ambiguous("w"));
  }

  TEST_CASE("SENSE: tiny vocabularies are unambiguous") {
    const auto t = table_from({{"x", {1, 0}}, {"y", {0, 1}}, {"z", {1, 1}}});
    const auto d = build_sense(t, {});
    CHECK(d.labels.size() == 3);
    CHECK(d.ambiguous_count() == 0);
  }

  TEST_CASE("SENSE rejects diacritized embeddings") {
    auto t = table_from({{"x", {1, 0}}, {"y", {0, 1}}, {"z", {1, 1}}});
    t.trained_on = {Scheme::kFullCm, {}};
    CHECK_THROWS_AS(build_sense(t, {}), SchemeMismatch);
  }

  TEST_CASE("CL worked example") {
    VariantMap vm;
    vm.add("Ealam");
    vm.add("Ealima");
    vm.add("bayot");
    ClusterAssignment ca;
    ca.algo = ClusterAlgo::kBrown;
    ca.k = 2;
    ca.labels = {{"Ealam", 0}, {"Ealima", 1}, {"bayot", 0}};
    const auto d = build_cl(vm, ca);
    CHECK(d.keying == Keying::kDiac);
    CHECK(d.method == Method::kClBrown);
    CHECK(d.ambiguous("Ealam"));
    CHECK(d.ambiguous("Ealima"));
    CHECK_FALSE(d.ambiguous("bayot"));
    ca.labels["Ealima"] = 0;
    const auto d2 = build_cl(vm, ca);
    CHECK_FALSE(d2.ambiguous("Ealam"));
    CHECK_FALSE(d2.ambiguous("Ealima"));
    ca.labels.erase("Ealima");
    ClReport rep;
    const auto d3 = build_cl(vm, ca, &rep);
    CHECK(d3.ambiguous("Ealam"));
    CHECK(rep.uncovered == std::vector<std::string>{"Ealima"});
    ca.algo = ClusterAlgo::kChineseWhispers;
    CHECK_THROWS_AS(build_cl(vm, ca), Error);
  }

  TEST_CASE("CL against the oracle") {
    std::mt19937_64 rng(8);
    const std::vector<std::string> keys = {"ktb", "Elm", "drs", "qlb", "byt"};
    for (int trial = 0; trial < 50; ++trial) {
      VariantMap vm;
      std::map<std::string, std::vector<std::string>> groups;
      ClusterAssignment ca;
      ca.algo = ClusterAlgo::kKMeans;
      ca.k = 3;
      for (const auto& k : keys) {
        for (const auto& v : random_variants(rng, k)) {
          vm.add(v);
          groups[k].push_back(v);
          if (rng() % 5) ca.labels[v] = rng() % 3;
        }
      }
      const auto d = build_cl(vm, ca);
      const auto expect = oracle::cl_labels(groups, ca.labels);
      REQUIRE(d.labels.size() == expect.size());
      for (const auto& [v, amb] : expect) CHECK(d.ambiguous(v) == amb);
    }
  }

  TEST_CASE("TR requires overlap with every sibling") {
    VariantMap vm;
    for (const char* v : {"katab", "kutub", "kutib"}) vm.add(v);
    TranslationTable tt;
    tt.entries["katab"] = {{"a", 0.6}, {"b", 0.4}};
    tt.entries["kutub"] = {{"a", 0.9}, {"c", 0.1}};
    tt.entries["kutib"] = {{"b", 0.7}, {"a", 0.3}};
    const auto all = build_tr(vm, tt, std::nullopt);
    CHECK(all.ambiguous_count() == 0);
    // With N=1: katab={a}, kutub={a}, kutib={b}.
    const auto one = build_tr(vm, tt, 1);
    CHECK(one.ambiguous("katab"));
    CHECK(one.ambiguous("kutub"));
    CHECK(one.ambiguous("kutib"));
    // A variant with no translations shares nothing.
    vm.add("katib");
    CHECK(build_tr(vm, tt, std::nullopt).ambiguous("katib"));
    // Singleton groups are unambiguous.
    VariantMap single;
    single.add("bayot");
    CHECK_FALSE(build_tr(single, tt, 1).ambiguous("bayot"));
  }

  TEST_CASE("TR against the oracle on every small configuration") {
    // Three variants, each translating to a subset of {x, y}.
    const std::vector<std::set<std::string>> subsets = {{}, {"x"}, {"y"}, {"x", "y"}};
    const std::vector<std::string> names = {"katab", "kutib", "kutub"};
    std::size_t cases = 0;
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        for (std::size_t c = 0; c < 4; ++c) {
          VariantMap vm;
          TranslationTable tt;
          std::vector<std::pair<std::string, std::set<std::string>>> group;
          const std::size_t pick[] = {a, b, c};
          for (std::size_t i = 0; i < 3; ++i) {
            vm.add(names[i]);
            for (const auto& t : subsets[pick[i]]) tt.entries[names[i]].emplace_back(t, 0.5);
            group.emplace_back(names[i], subsets[pick[i]]);
          }
          const auto d = build_tr(vm, tt, std::nullopt);
          for (const auto& [v, amb] : oracle::tr_labels(group)) CHECK(d.ambiguous(v) == amb);
          ++cases;
        }
      }
    }
    CHECK(cases == 64);
  }

  TEST_CASE("TR with every translation is at least as permissive as N=1") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
      VariantMap vm;
      TranslationTable tt;
      for (const char* v : {"katab", "kutib", "kutub", "katib"}) {
        if (rng() % 4 == 0) continue;
        vm.add(v);
        const std::size_t m = rng() % 4;
        for (std::size_t i = 0; i < m; ++i) {
          tt.entries[v].emplace_back("e" + std::to_string(rng() % 4), 1.0 / (i + 2));
        }
      }
      const auto all = build_tr(vm, tt, std::nullopt);
      const auto one = build_tr(vm, tt, 1);
      for (const auto& [w, l] : one.labels) {
        if (l == Label::kUnambiguous) CHECK_FALSE(all.ambiguous(w));
      }
    }
  }

  TEST_CASE("CL labels are shared within a group") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 30; ++trial) {
      VariantMap vm;
      ClusterAssignment ca;
      ca.algo = ClusterAlgo::kGmm;
      ca.k = 4;
      for (const auto& k : {"ktb", "Elm", "drs"}) {
        for (const auto& v : random_variants(rng, k)) {
          vm.add(v);
          ca.labels[v] = rng() % 4;
        }
      }
      const auto d = build_cl(vm, ca);
      for (const auto& [key, group] : vm.groups()) {
        for (const auto& [v, f] : group) CHECK(d.labels.at(v) == d.labels.at(group.begin()->first));
      }
    }
  }

  TEST_CASE("apply_selective worked example and extremes") {
    const Corpus c = fullcm({{"baEod", "yawom", "<NUM>"}});
    AmbigDict d;
    d.keying = Keying::kUndiac;
    d.labels = {{"bEd", Label::kAmbiguous}, {"ywm", Label::kUnambiguous}};
    const Corpus s = apply_selective(c, d);
    CHECK(s.sentences[0] == Sentence{"baEod", "ywm", "<NUM>"});
    CHECK(s.scheme.scheme == Scheme::kSelective);

    AmbigDict none;
    CHECK(apply_selective(c, none).sentences[0] == Sentence{"bEd", "ywm", "<NUM>"});
    AmbigDict every;
    every.keying = Keying::kDiac;
    every.labels = {{"baEod", Label::kAmbiguous}, {"yawom", Label::kAmbiguous}};
    CHECK(apply_selective(c, every).sentences == c.sentences);
  }

  TEST_CASE("apply_selective sits between NONE and FULL-CM and is monotone") {
    std::mt19937_64 rng(12);
    const std::vector<std::string> keys = {"ktb", "Elm", "drs", "qlb", "byt"};
    for (int trial = 0; trial < 30; ++trial) {
      Sentence s;
      std::vector<std::string> pool;
      for (const auto& k : keys) {
        for (const auto& v : random_variants(rng, k)) pool.push_back(v);
      }
      for (int i = 0; i < 40; ++i) s.push_back(pool[rng() % pool.size()]);
      const Corpus c = fullcm({s});
      AmbigDict d;
      d.keying = trial % 2 ? Keying::kDiac : Keying::kUndiac;
      for (const auto& v : pool) {
        const std::string key = d.keying == Keying::kDiac ? v : oracle::strip(v);
        if (rng() % 2) d.labels[key] = Label::kAmbiguous;
      }
      const auto out = apply_selective(c, d).sentences[0];
      REQUIRE(out.size() == s.size());
      std::size_t kept = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK((out[i] == s[i] || out[i] == oracle::strip(s[i])));
        kept += out[i] == s[i] && s[i] != oracle::strip(s[i]);
      }
      AmbigDict more = d;
      for (const auto& v : pool) {
        const std::string key = d.keying == Keying::kDiac ? v : oracle::strip(v);
        if (rng() % 3 == 0) more.labels[key] = Label::kAmbiguous;
      }
      const auto out2 = apply_selective(c, more).sentences[0];
      std::size_t kept2 = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (out[i] == s[i]) CHECK(out2[i] == s[i]);
        kept2 += out2[i] == s[i] && s[i] != oracle::strip(s[i]);
      }
      CHECK(kept2 >= kept);
    }
  }

  TEST_CASE("dictionary text round trip") {
    AmbigDict d;
    d.keying = Keying::kDiac;
    d.method = Method::kTranslation;
    d.params = {{"N", "1"}};
    d.labels = {{"katab", Label::kAmbiguous}, {"kutub", Label::kUnambiguous}};
    std::stringstream ss;
    write_dict(ss, d);
    CHECK(read_dict(ss, "mem") == d);
    CHECK(d.id() == "TR,N=1");

    std::istringstream dup("#keying=UNDIAC method=MULTI params=\nktb\tA\nktb\tU\n");
    CHECK_THROWS_AS(read_dict(dup, "dup"), ParseError);
    std::istringstream same("#keying=UNDIAC method=MULTI params=\nktb\tA\nktb\tA\n");
    CHECK(read_dict(same, "same").labels.size() == 1);
    std::istringstream bad("#keying=UNDIAC method=MULTI params=\nktb\tX\n");
    CHECK_THROWS_AS(read_dict(bad, "bad"), ParseError);

    AmbigDict empty;
    std::stringstream es;
    write_dict(es, empty);
    CHECK(read_dict(es, "empty").labels.empty());
  }

  TEST_CASE("lexicon text round trip") {
    MorphLexicon lex;
    for (const char* v : {"katab", "kutub", "bayot"}) lex.add(v);
    std::stringstream ss;
    write_lexicon(ss, lex);
    CHECK(read_lexicon(ss, "mem").analyses == lex.analyses);
    std::istringstream wrong("ktb\tbayot\n");
    CHECK_THROWS_AS(read_lexicon(wrong, "wrong"), ParseError);
    std::istringstream diac("katab\tkatab\n");
    CHECK_THROWS_AS(read_lexicon(diac, "diac"), ParseError);
  }
}
