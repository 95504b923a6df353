#pragma once

#include <bitset>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seldiac {

// UTF-8 helpers. Tokens are handled as UTF-8 byte strings everywhere; these
// are the only places that look at code points.
namespace utf8 {

// Decodes `s`; returns nullopt on malformed input (overlong forms,
// surrogates, truncated sequences).
std::optional<std::u32string> decode(std::string_view s);
std::string encode(std::u32string_view s);
void append(std::string& out, char32_t cp);
bool valid(std::string_view s);
// Decodes, substituting U+FFFD for malformed bytes.
std::u32string decode_lossy(std::string_view s);

}  // namespace utf8

inline constexpr char32_t kShadda = U'ّ';
inline constexpr char32_t kDaggerAlef = U'ٰ';

// The set of characters treated as diacritics. Both the Unicode marks and
// their Buckwalter equivalents are members, so Buckwalter-encoded and
// Arabic-script input behave identically.
class DiacriticSet {
 public:
  // Harakat, tanween, shadda, sukun (U+064B..U+0652) and dagger alef U+0670.
  DiacriticSet();
  // `marks` must be Unicode code points with a Buckwalter equivalent.
  explicit DiacriticSet(std::vector<char32_t> marks, bool lexical_only = true);

  bool is_mark(char32_t c) const;
  bool is_shadda(char32_t c) const { return c == kShadda || c == U'~'; }
  bool is_dagger_alef(char32_t c) const { return c == kDaggerAlef || c == U'`'; }

  const std::vector<char32_t>& marks() const { return marks_; }
  const std::vector<char32_t>& buckwalter_marks() const { return bw_marks_; }
  bool lexical_only() const { return lexical_only_; }
  void set_lexical_only(bool v) { lexical_only_ = v; }

 private:
  std::vector<char32_t> marks_;
  std::vector<char32_t> bw_marks_;
  std::bitset<128> ascii_;
  bool lexical_only_ = true;
};

const DiacriticSet& default_diacritics();

struct WordForm {
  std::string surface;
  std::string key;

  static WordForm of(std::string_view surface,
                     const DiacriticSet& d = default_diacritics());
};

struct DiacPattern {
  std::string pattern;

  friend bool operator==(const DiacPattern&, const DiacPattern&) = default;
  friend auto operator<=>(const DiacPattern&, const DiacPattern&) = default;
};

std::string strip_diacritics(std::string_view w,
                             const DiacriticSet& d = default_diacritics());

// Drops the word-final run of diacritics (case and mood endings). Shadda is
// kept when d.lexical_only(); dagger alef is always kept.
std::string to_full_cm(std::string_view w,
                       const DiacriticSet& d = default_diacritics());

DiacPattern abstract_pattern(std::string_view w,
                             const DiacriticSet& d = default_diacritics());

bool has_diacritic(std::string_view w,
                   const DiacriticSet& d = default_diacritics());

// True when w ends in a diacritic that to_full_cm would remove.
bool ends_in_case_mark(std::string_view w,
                       const DiacriticSet& d = default_diacritics());

enum class Direction { kArabicToBuckwalter, kBuckwalterToArabic };

// Strict mode throws UnknownCharacter (code-point position); otherwise
// unmapped characters pass through unchanged.
std::string transliterate(std::string_view w, Direction dir,
                          bool strict = true);

// Every Buckwalter character paired with its Arabic code point.
const std::vector<std::pair<char, char32_t>>& buckwalter_table();

// Placeholder tokens produced by cleaning: <URL>, <EMAIL>, <NUM>, <PUNC>,
// <SYM>. They never enter variant maps or dictionaries.
bool is_unified_token(std::string_view tok);

}  // namespace seldiac
