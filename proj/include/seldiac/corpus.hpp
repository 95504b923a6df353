#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "seldiac/textcore.hpp"

namespace seldiac {

using Sentence = std::vector<std::string>;

enum class Scheme { kNone, kFull, kFullCm, kSelective };

struct SchemeTag {
  Scheme scheme = Scheme::kNone;
  std::string dict_id;  // only for kSelective

  std::string str() const;
  static SchemeTag parse(std::string_view s);
  friend bool operator==(const SchemeTag&, const SchemeTag&) = default;
};

struct Corpus {
  std::vector<Sentence> sentences;
  SchemeTag scheme;
  std::vector<std::string> provenance;

  std::size_t token_count() const;
};

enum class InputScript { kBuckwalter, kUnicode };

struct CleanOptions {
  std::size_t max_sentence_tokens = 150;
  // In Buckwalter input, characters such as $ * ' | > < & } _ { ` ~ are
  // letters or marks and must not be split off as punctuation.
  InputScript script = InputScript::kBuckwalter;
  const DiacriticSet* diacritics = &default_diacritics();
};

struct CleanReport {
  std::size_t lines_read = 0;
  std::size_t invalid_encoding = 0;
  std::size_t empty = 0;
  std::size_t split = 0;    // over-long lines that were split at punctuation
  std::size_t dropped = 0;  // pieces still over the limit after splitting
};

struct CleanResult {
  Corpus corpus;
  CleanReport report;
};

CleanResult clean(std::istream& raw_lines, const CleanOptions& opts = {});
CleanResult clean(const std::vector<std::string>& raw_lines,
                  const CleanOptions& opts = {});

// Splits a whitespace token into word pieces and unified placeholders.
std::vector<std::string> normalize_token(std::string_view token,
                                         const CleanOptions& opts = {});

// Splits at <PUNC> (kept at the end of each piece) and packs consecutive
// pieces greedily left to right up to `max_tokens`. Chunks that are still
// too long are dropped and counted in `overlong`.
std::vector<Sentence> split_long_sentence(const Sentence& s,
                                          std::size_t max_tokens,
                                          std::size_t* overlong = nullptr);

struct Views {
  Corpus none;
  Corpus fullcm;
};

Views derive_views(const Corpus& full,
                   const DiacriticSet& d = default_diacritics());
Corpus map_tokens(const Corpus& c, SchemeTag scheme,
                  std::string (*fn)(std::string_view, const DiacriticSet&),
                  const DiacriticSet& d = default_diacritics());

// Undiacritized key -> (variant -> corpus frequency). Lexicon-injected
// variants may carry frequency zero.
class VariantMap {
 public:
  using Group = std::map<std::string, std::size_t>;

  void add(std::string_view variant, std::size_t freq = 1,
           const DiacriticSet& d = default_diacritics());
  void merge(const VariantMap& other);

  const std::map<std::string, Group>& groups() const { return groups_; }
  const Group* find(const std::string& key) const;
  std::size_t variant_count(const std::string& key) const;
  std::size_t size() const { return groups_.size(); }
  bool empty() const { return groups_.empty(); }

  friend bool operator==(const VariantMap&, const VariantMap&) = default;

 private:
  std::map<std::string, Group> groups_;
};

VariantMap build_variant_map(const Corpus& fullcm,
                             const DiacriticSet& d = default_diacritics());

struct VocabStats {
  std::size_t types = 0;
  std::size_t tokens = 0;
  std::map<std::string, std::size_t> type_freqs;
};

VocabStats vocab_stats(const Corpus& c);

// Drops tokens whose corpus frequency is below min_count; sentences left
// empty are removed.
Corpus filter_min_count(const Corpus& c, std::size_t min_count);

// One sentence per line, tokens separated by single spaces. Blank lines
// are skipped.
Corpus read_corpus(const std::string& path, SchemeTag scheme = {});
Corpus read_corpus(std::istream& in, const std::string& source,
                   SchemeTag scheme = {});
void write_corpus(std::ostream& out, const Corpus& c);
void write_corpus(const std::string& path, const Corpus& c);

std::vector<std::string> split_tokens(std::string_view line);

struct ParallelCorpus {
  std::vector<std::pair<Sentence, Sentence>> pairs;
};

struct ParallelReadReport {
  std::size_t skipped_empty = 0;
};

// Lines i of both files form pair i; pairs with an empty side are skipped.
ParallelCorpus read_parallel(const std::string& source_path,
                             const std::string& target_path,
                             ParallelReadReport* report = nullptr);

}  // namespace seldiac
