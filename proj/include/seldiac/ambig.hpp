#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "seldiac/align.hpp"
#include "seldiac/clustering.hpp"
#include "seldiac/corpus.hpp"
#include "seldiac/embeddings.hpp"

namespace seldiac {

enum class Keying { kUndiac, kDiac };
enum class Method { kMulti, kSense, kClBrown, kClKMeans, kClGmm, kTranslation };
enum class Label { kAmbiguous, kUnambiguous };

std::string keying_name(Keying k);      // UNDIAC, DIAC
std::string method_name(Method m);      // MULTI, SENSE, CL-BR, CL-KM, CL-EM, TR
Keying parse_keying(const std::string& s);
Method parse_method(const std::string& s);

// Ambiguity labels for words, keyed either by undiacritized or by FULL-CM
// forms.
struct AmbigDict {
  Keying keying = Keying::kUndiac;
  Method method = Method::kMulti;
  std::map<std::string, std::string> params;
  std::map<std::string, Label> labels;

  bool ambiguous(const std::string& word) const;
  std::size_t ambiguous_count() const;
  // Identifier used in SELECTIVE(...) scheme tags.
  std::string id() const;

  friend bool operator==(const AmbigDict&, const AmbigDict&) = default;
};

// Stand-in for a morphological analyzer: every valid diacritized variant of
// an undiacritized word, FULL-CM normalized.
struct MorphLexicon {
  std::map<std::string, std::set<std::string>> analyses;

  void add(const std::string& variant, const DiacriticSet& d = default_diacritics());
};

// "<undiac_word>\t<variant1>|<variant2>|..." lines.
MorphLexicon read_lexicon(const std::string& path);
MorphLexicon read_lexicon(std::istream& in, const std::string& source);
void write_lexicon(std::ostream& out, const MorphLexicon& lex);

AmbigDict build_multi(const MorphLexicon& lex);

struct SenseOptions {
  std::size_t graph_size = 200;   // N
  std::size_t granularity = 400;  // n
  std::size_t min_cluster = 5;
  std::size_t iterations = 20;
  std::uint64_t seed = 1;
  VectorSpace space = VectorSpace::kCombined;
};

// Clusters of w's ego network that keep at least min_cluster members.
std::vector<std::vector<std::string>> sense_clusters(EgoGraphBuilder& builder,
                                                     const std::string& w,
                                                     const SenseOptions& opts);

AmbigDict build_sense(const EmbeddingTable& t, const SenseOptions& opts = {});

struct ClReport {
  std::vector<std::string> uncovered;
};

AmbigDict build_cl(const VariantMap& vm, const ClusterAssignment& ca,
                   ClReport* report = nullptr);

// A variant is unambiguous iff its top-N translations intersect those of
// every sibling in its group.
AmbigDict build_tr(const VariantMap& vm, const TranslationTable& tt,
                   std::optional<std::size_t> n);

// Keeps diacritics only on tokens labeled ambiguous; everything else,
// including words absent from the dictionary, is stripped.
Corpus apply_selective(const Corpus& fullcm, const AmbigDict& d,
                       const DiacriticSet& ds = default_diacritics());

// "#keying=<UNDIAC|DIAC> method=<...> params=<k=...,N=...>" then
// "<word>\t<A|U>" lines.
void write_dict(std::ostream& out, const AmbigDict& d);
void write_dict(const std::string& path, const AmbigDict& d);
AmbigDict read_dict(std::istream& in, const std::string& source);
AmbigDict read_dict(const std::string& path);

}  // namespace seldiac
