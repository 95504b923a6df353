#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seldiac/ambig.hpp"
#include "seldiac/corpus.hpp"

namespace seldiac {

struct AmbiguityStats {
  std::size_t types = 0;
  std::size_t ambig_count = 0;
  double ambig_pct = 0.0;
  bool empty_warning = false;
};

AmbiguityStats ambiguity_stats(const AmbigDict& d);

// "MULTI 168,384 33.82" style row.
std::string format_stats_row(const std::string& name, const AmbiguityStats& s);

using PatternPair = std::pair<std::string, std::string>;  // first <= second

struct PatternReport {
  std::map<PatternPair, std::size_t> ambiguous;
  std::map<PatternPair, std::size_t> unambiguous;
  std::set<PatternPair> always_ambiguous;
};

// Pairs are ambiguous when both members are labeled ambiguous, except for
// TR dictionaries where either member suffices.
PatternReport pattern_report(const VariantMap& vm, const AmbigDict& d,
                             const DiacriticSet& ds = default_diacritics());

struct SparsityMetrics {
  std::size_t type_count = 0;   // training vocabulary
  std::size_t token_count = 0;  // training tokens
  double oov_type_rate = 0.0;
  double oov_token_rate = 0.0;
};

SparsityMetrics sparsity_metrics(const Corpus& train, const Corpus& test);

// True when the stripped key of `token` has at least two variants in vm.
bool is_homograph(const std::string& token, const VariantMap& vm,
                  const DiacriticSet& ds = default_diacritics());

Corpus homograph_filter(const Corpus& test, const VariantMap& vm,
                        const DiacriticSet& ds = default_diacritics());

struct TaggedToken {
  std::string word;
  std::string tag;
  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

using TaggedSentence = std::vector<TaggedToken>;

struct TaggedCorpus {
  std::vector<TaggedSentence> sentences;
  SchemeTag scheme;

  std::set<std::string> tagset() const;
  Corpus words() const;
};

// "word/TAG" tokens separated by spaces; the tag follows the last '/'.
TaggedCorpus read_tagged(const std::string& path, SchemeTag scheme = {});
TaggedCorpus read_tagged(std::istream& in, const std::string& source,
                         SchemeTag scheme = {});
void write_tagged(std::ostream& out, const TaggedCorpus& c);

// Replaces every word through `view`, which must preserve sentence shape.
TaggedCorpus retag_view(const TaggedCorpus& tc, const Corpus& view);

// Greedy left-to-right averaged perceptron.
class PosTagger {
 public:
  static PosTagger train(const TaggedCorpus& data, std::size_t epochs,
                         std::uint64_t seed);

  std::vector<std::string> tag(const std::vector<std::string>& words) const;
  const SchemeTag& scheme() const { return scheme_; }
  const std::set<std::string>& vocabulary() const { return vocab_; }
  const std::vector<std::string>& tags() const { return tags_; }

  // Feature strings for position i given the previous predicted tag.
  static std::vector<std::string> features(const std::vector<std::string>& words,
                                           std::size_t i, const std::string& prev_tag);

 private:
  std::size_t predict(const std::vector<std::string>& feats) const;

  std::vector<std::string> tags_;
  std::unordered_map<std::string, std::vector<double>> weights_;
  std::set<std::string> vocab_;
  SchemeTag scheme_;
};

enum class Slice { kAll, kHomographs, kOov, kPerTag };

struct SliceContext {
  // Homograph membership; null disables the homographs slice.
  const VariantMap* variants = nullptr;
  // OOV membership; null uses the tagger's training vocabulary.
  const std::set<std::string>* reference_vocab = nullptr;
  // Parallel view of the test data whose words decide slice membership;
  // null uses the test words themselves.
  const TaggedCorpus* membership_view = nullptr;
};

struct SliceAccuracy {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

struct TaggerReport {
  std::map<std::string, SliceAccuracy> slices;  // "all", "homographs", "oov", "tag:VERB", ...
  std::map<std::pair<std::string, std::string>, std::size_t> confusion;  // (gold, predicted)
};

inline const std::vector<std::string> kReportedTags = {"VERB", "NOUN", "ADJ", "ADV"};

TaggerReport evaluate_tagger(const PosTagger& model, const TaggedCorpus& test,
                             const std::set<Slice>& slices,
                             const SliceContext& ctx = {});

// Two-sided paired bootstrap over per-sentence scores.
double paired_bootstrap(const std::vector<double>& a, const std::vector<double>& b,
                        std::size_t resamples, std::uint64_t seed);

// "metric<TAB>slice<TAB>value" lines.
void write_metric_lines(std::ostream& out, const TaggerReport& r);
// Aligned plain-text table of the same numbers.
void write_report_table(std::ostream& out, const TaggerReport& r);

}  // namespace seldiac
