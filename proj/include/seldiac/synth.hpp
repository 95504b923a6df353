#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seldiac/ambig.hpp"
#include "seldiac/corpus.hpp"
#include "seldiac/evalkit.hpp"

// Synthetic Buckwalter data with known ground truth, used by the tests and
// by the bundled toy dataset.
namespace seldiac::synth {

struct Lemma {
  std::vector<std::string> forms;  // FULL-CM spellings; free variants share a lemma
  std::string tag;
  std::string gloss;
  bool inflects = false;  // takes a case or mood ending in FULL text
};

struct ToyOptions {
  std::size_t sentences = 5000;
  std::size_t roots = 1500;
  double homograph_rate = 0.25;
  double free_variant_rate = 0.3;
  double url_rate = 0.02;
  std::uint64_t seed = 1;
};

struct ToyData {
  std::vector<Lemma> lemmas;
  TaggedCorpus tagged;                 // FULL scheme
  std::vector<std::string> raw_lines;  // FULL text before cleaning
  std::vector<Sentence> glosses;       // English side, parallel to `tagged`
  MorphLexicon lexicon;
  // UNDIAC dictionary marking exactly the planted homograph keys.
  AmbigDict oracle;
};

ToyData make_toy(const ToyOptions& opts);

// Words a and b occur in the same contexts; c occurs elsewhere.
struct TemplateCorpus {
  Corpus corpus;
  std::string a, b, c;
};

TemplateCorpus template_corpus(std::size_t sentences, std::uint64_t seed);

// Every source word has one translation and word order is preserved.
struct BijectiveCorpus {
  ParallelCorpus corpus;
  std::map<std::string, std::string> translation;
};

BijectiveCorpus bijective_corpus(std::size_t sentences, std::size_t vocab,
                                 std::uint64_t seed);

}  // namespace seldiac::synth
