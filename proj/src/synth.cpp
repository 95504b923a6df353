#include "seldiac/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace seldiac::synth {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(g_() % n); }
  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  std::size_t weighted(const std::vector<double>& cdf) {
    const double u = uniform() * cdf.back();
    return static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 g_;
};

std::string fill(const std::string& pattern, const std::string& root) {
  std::string out;
  std::size_t k = 0;
  for (char ch : pattern) out.push_back(ch == 'C' ? root[k++] : ch);
  return out;
}

// Patterns whose stripped form is the bare root, so any two collide. A
// pattern does not determine the part of speech.
constexpr const char* kTriliteral[] = {"CaCaC", "CuCiC", "CuCuC", "CaCoC", "CaCiC"};
constexpr const char* kContentTags[] = {"NOUN", "NOUN", "VERB", "VERB", "ADJ"};
constexpr const char* kAdverbPattern = "CaCiyCA";
constexpr const char* kConsonants = "btvjHxd*rzs$SDTZEgfqklmnh";

struct FunctionWord {
  const char* stem;
  const char* ending;
  const char* tag;
  const char* gloss;
};

constexpr FunctionWord kFunctionWords[] = {
    {"fiy", "", "PREP", "in"},   {"EalaY", "", "PREP", "on"},
    {"w", "a", "CONJ", "and"},   {"lam", "", "PART", "not"},
    {"huw", "a", "PRON", "he"},  {"*alik", "a", "PRON", "that"},
};

const std::vector<std::vector<std::string>>& templates() {
  static const std::vector<std::vector<std::string>> t = {
      {"PRON", "VERB", "NOUN", "ADJ"},
      {"PRON", "NOUN", "ADJ", "VERB"},
      {"CONJ", "VERB", "NOUN", "PREP", "NOUN"},
      {"CONJ", "NOUN", "VERB", "ADV"},
      {"PREP", "NOUN", "ADJ", "VERB", "NOUN"},
      {"PART", "VERB", "PREP", "NOUN", "ADJ"},
      {"NOUN", "VERB", "NOUN", "ADV"},
      {"VERB", "ADJ", "NOUN"},
      {"NOUN", "ADJ", "CONJ", "NOUN", "VERB"},
  };
  return t;
}

std::string gloss_word(Rng& rng, std::set<std::string>& used) {
  static const char* kSyl[] = {"ka", "lo", "mi", "ter", "van", "su", "rod", "pel",
                               "ba", "nu", "gri", "tos", "fen", "da", "wil", "zor"};
  for (;;) {
    std::string g;
    const std::size_t n = 2 + rng.below(2);
    for (std::size_t i = 0; i < n; ++i) g += kSyl[rng.below(std::size(kSyl))];
    if (used.insert(g).second) return g;
  }
}

}  // namespace

ToyData make_toy(const ToyOptions& opts) {
  Rng rng(opts.seed);
  ToyData data;
  const DiacriticSet& ds = default_diacritics();

  std::set<std::string> keys;
  for (const auto& fw : kFunctionWords) keys.insert(strip_diacritics(fw.stem, ds));
  std::set<std::string> glosses_used;
  std::set<std::string> homograph_keys;
  const std::string consonants = kConsonants;

  for (std::size_t r = 0; r < opts.roots; ++r) {
    std::string root;
    do {
      root.clear();
      for (int i = 0; i < 3; ++i) root.push_back(consonants[rng.below(consonants.size())]);
    } while (keys.count(root) || keys.count(strip_diacritics(fill(kAdverbPattern, root), ds)) ||
             root[0] == root[1] || root[1] == root[2]);
    keys.insert(root);

    if (rng.chance(opts.homograph_rate)) {
      std::size_t p1 = rng.below(std::size(kTriliteral)), p2;
      do {
        p2 = rng.below(std::size(kTriliteral));
      } while (p1 == p2);
      std::string t1 = kContentTags[rng.below(std::size(kContentTags))], t2;
      do {
        t2 = kContentTags[rng.below(std::size(kContentTags))];
      } while (t1 == t2);
      data.lemmas.push_back({{fill(kTriliteral[p1], root)}, t1, gloss_word(rng, glosses_used), true});
      data.lemmas.push_back({{fill(kTriliteral[p2], root)}, t2, gloss_word(rng, glosses_used), true});
      homograph_keys.insert(root);
      continue;
    }
    const double u = rng.uniform();
    if (u < 0.1) {
      const std::string adv = fill(kAdverbPattern, root);
      keys.insert(strip_diacritics(adv, ds));
      data.lemmas.push_back({{adv}, "ADV", gloss_word(rng, glosses_used), false});
    } else if (rng.chance(opts.free_variant_rate)) {
      // Optional sukun: both spellings mean the same thing.
      const std::string full = fill("CaCoC", root);
      data.lemmas.push_back({{full, fill("CaCC", root)},
                             kContentTags[rng.below(std::size(kContentTags))],
                             gloss_word(rng, glosses_used), true});
    } else {
      data.lemmas.push_back({{fill(kTriliteral[rng.below(std::size(kTriliteral))], root)},
                             kContentTags[rng.below(std::size(kContentTags))],
                             gloss_word(rng, glosses_used), true});
    }
  }

  // Content words per tag, Zipf-weighted in a shuffled order.
  std::map<std::string, std::vector<std::size_t>> by_tag;
  for (std::size_t i = 0; i < data.lemmas.size(); ++i) by_tag[data.lemmas[i].tag].push_back(i);
  std::map<std::string, std::vector<double>> cdf;
  for (auto& [tag, ids] : by_tag) {
    rng.shuffle(ids);
    double acc = 0;
    for (std::size_t r = 0; r < ids.size(); ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), 0.7);
      cdf[tag].push_back(acc);
    }
  }
  std::map<std::string, std::vector<const FunctionWord*>> fw_by_tag;
  for (const auto& fw : kFunctionWords) fw_by_tag[fw.tag].push_back(&fw);

  data.tagged.scheme = {Scheme::kFull, ""};
  for (std::size_t s = 0; s < opts.sentences; ++s) {
    const auto& tmpl = templates()[rng.below(templates().size())];
    TaggedSentence sent;
    std::vector<std::string> raw;
    Sentence gloss;
    std::string prev_tag;
    for (const auto& tag : tmpl) {
      if (auto it = fw_by_tag.find(tag); it != fw_by_tag.end()) {
        const FunctionWord* fw = it->second[rng.below(it->second.size())];
        const std::string word = std::string(fw->stem) + fw->ending;
        sent.push_back({word, tag});
        raw.push_back(word);
        gloss.push_back(fw->gloss);
      } else {
        const Lemma& lem = data.lemmas[by_tag[tag][rng.weighted(cdf[tag])]];
        std::string word = lem.forms.size() > 1 && rng.chance(0.25) ? lem.forms[1] : lem.forms[0];
        if (tag == "ADV") {
          word += "F";
        } else if (tag == "VERB") {
          word += "a";
        } else if (prev_tag == "PREP") {
          word += rng.chance(0.5) ? "i" : "K";
        } else {
          static const char* kEndings[] = {"u", "a", "N", "F"};
          word += kEndings[rng.below(4)];
        }
        sent.push_back({word, tag});
        raw.push_back(word);
        gloss.push_back(lem.gloss);
      }
      prev_tag = tag;
    }
    if (rng.chance(opts.url_rate)) {
      sent.push_back({"<URL>", "X"});
      raw.push_back("http://example.org/page" + std::to_string(s));
      gloss.push_back("<URL>");
    }
    sent.push_back({"<PUNC>", "PUNC"});
    raw.push_back(".");
    gloss.push_back(".");

    std::string line;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (i) line.push_back(' ');
      line += raw[i];
    }
    data.raw_lines.push_back(std::move(line));
    data.tagged.sentences.push_back(std::move(sent));
    data.glosses.push_back(std::move(gloss));
  }

  for (const auto& lem : data.lemmas) {
    for (const auto& f : lem.forms) data.lexicon.add(f, ds);
  }
  for (const auto& fw : kFunctionWords) {
    data.lexicon.add(to_full_cm(std::string(fw.stem) + fw.ending, ds), ds);
  }

  data.oracle.keying = Keying::kUndiac;
  data.oracle.method = Method::kMulti;
  data.oracle.params["source"] = "oracle";
  for (const auto& [key, variants] : data.lexicon.analyses) {
    data.oracle.labels[key] = homograph_keys.count(key) ? Label::kAmbiguous : Label::kUnambiguous;
  }
  return data;
}

TemplateCorpus template_corpus(std::size_t sentences, std::uint64_t seed) {
  Rng rng(seed);
  TemplateCorpus out{{}, "alpha", "beta", "gamma"};
  out.corpus.scheme = {Scheme::kNone, ""};
  auto ctx = [](char group, std::size_t i) { return std::string(1, group) + std::to_string(i); };
  constexpr std::size_t kContexts = 12;
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t pick = rng.below(3);
    const char group = pick == 2 ? 'y' : 'x';
    Sentence sent;
    for (int i = 0; i < 3; ++i) sent.push_back(ctx(group, rng.below(kContexts)));
    sent.push_back(pick == 0 ? out.a : pick == 1 ? out.b : out.c);
    for (int i = 0; i < 3; ++i) sent.push_back(ctx(group, rng.below(kContexts)));
    out.corpus.sentences.push_back(std::move(sent));
  }
  return out;
}

BijectiveCorpus bijective_corpus(std::size_t sentences, std::size_t vocab,
                                 std::uint64_t seed) {
  Rng rng(seed);
  BijectiveCorpus out;
  std::vector<std::string> targets;
  for (std::size_t i = 0; i < vocab; ++i) targets.push_back("e" + std::to_string(i));
  rng.shuffle(targets);
  std::vector<std::string> sources;
  for (std::size_t i = 0; i < vocab; ++i) {
    sources.push_back("f" + std::to_string(i));
    out.translation[sources.back()] = targets[i];
  }
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t len = 3 + rng.below(6);
    std::vector<std::size_t> ids(vocab);
    for (std::size_t i = 0; i < vocab; ++i) ids[i] = i;
    rng.shuffle(ids);
    Sentence src, tgt;
    for (std::size_t k = 0; k < len && k < vocab; ++k) {
      src.push_back(sources[ids[k]]);
      tgt.push_back(out.translation[sources[ids[k]]]);
    }
    out.corpus.pairs.emplace_back(std::move(src), std::move(tgt));
  }
  return out;
}

}  // namespace seldiac::synth
