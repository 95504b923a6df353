#include "seldiac/textcore.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "seldiac/error.hpp"

namespace seldiac {
namespace utf8 {

namespace {

// Returns the code point and advances `i`, or nullopt on malformed input.
std::optional<char32_t> next(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return std::nullopt;
  }
  if (i + len > s.size()) return std::nullopt;
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr std::array<char32_t, 5> kMin = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return std::nullopt;
  }
  i += len;
  return cp;
}

}  // namespace

std::optional<std::u32string> decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto cp = next(s, i);
    if (!cp) return std::nullopt;
    out.push_back(*cp);
  }
  return out;
}

std::u32string decode_lossy(std::string_view s) {
  std::u32string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (auto cp = next(s, i)) {
      out.push_back(*cp);
    } else {
      out.push_back(U'�');
      ++i;
    }
  }
  return out;
}

bool valid(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (!next(s, i)) return false;
  }
  return true;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append(out, cp);
  return out;
}

}  // namespace utf8

const std::vector<std::pair<char, char32_t>>& buckwalter_table() {
  static const std::vector<std::pair<char, char32_t>> table = {
      {'\'', U'ء'}, {'|', U'آ'}, {'>', U'أ'}, {'&', U'ؤ'},
      {'<', U'إ'},  {'}', U'ئ'}, {'A', U'ا'}, {'b', U'ب'},
      {'p', U'ة'},  {'t', U'ت'}, {'v', U'ث'}, {'j', U'ج'},
      {'H', U'ح'},  {'x', U'خ'}, {'d', U'د'}, {'*', U'ذ'},
      {'r', U'ر'},  {'z', U'ز'}, {'s', U'س'}, {'$', U'ش'},
      {'S', U'ص'},  {'D', U'ض'}, {'T', U'ط'}, {'Z', U'ظ'},
      {'E', U'ع'},  {'g', U'غ'}, {'_', U'ـ'}, {'f', U'ف'},
      {'q', U'ق'},  {'k', U'ك'}, {'l', U'ل'}, {'m', U'م'},
      {'n', U'ن'},  {'h', U'ه'}, {'w', U'و'}, {'Y', U'ى'},
      {'y', U'ي'},  {'F', U'ً'}, {'N', U'ٌ'}, {'K', U'ٍ'},
      {'a', U'َ'},  {'u', U'ُ'}, {'i', U'ِ'}, {'~', U'ّ'},
      {'o', U'ْ'},  {'`', U'ٰ'}, {'{', U'ٱ'}, {'P', U'پ'},
      {'J', U'چ'},  {'V', U'ڤ'}, {'G', U'گ'},
  };
  return table;
}

namespace {

std::optional<char> to_buckwalter(char32_t cp) {
  for (const auto& [bw, ar] : buckwalter_table()) {
    if (ar == cp) return bw;
  }
  return std::nullopt;
}

std::optional<char32_t> from_buckwalter(char32_t c) {
  for (const auto& [bw, ar] : buckwalter_table()) {
    if (static_cast<char32_t>(static_cast<unsigned char>(bw)) == c) return ar;
  }
  return std::nullopt;
}

std::vector<char32_t> default_marks() {
  std::vector<char32_t> m;
  for (char32_t c = 0x064B; c <= 0x0652; ++c) m.push_back(c);
  m.push_back(kDaggerAlef);
  return m;
}

}  // namespace

DiacriticSet::DiacriticSet() : DiacriticSet(default_marks(), true) {}

DiacriticSet::DiacriticSet(std::vector<char32_t> marks, bool lexical_only)
    : marks_(std::move(marks)), lexical_only_(lexical_only) {
  std::sort(marks_.begin(), marks_.end());
  marks_.erase(std::unique(marks_.begin(), marks_.end()), marks_.end());
  for (char32_t m : marks_) {
    auto bw = to_buckwalter(m);
    if (!bw) {
      throw std::invalid_argument("diacritic without Buckwalter equivalent");
    }
    bw_marks_.push_back(static_cast<unsigned char>(*bw));
    ascii_.set(static_cast<unsigned char>(*bw));
  }
}

bool DiacriticSet::is_mark(char32_t c) const {
  if (c < 128) return ascii_.test(c);
  return std::binary_search(marks_.begin(), marks_.end(), c);
}

const DiacriticSet& default_diacritics() {
  static const DiacriticSet d;
  return d;
}

WordForm WordForm::of(std::string_view surface, const DiacriticSet& d) {
  return {std::string(surface), strip_diacritics(surface, d)};
}

std::string strip_diacritics(std::string_view w, const DiacriticSet& d) {
  std::string out;
  out.reserve(w.size());
  for (char32_t c : utf8::decode_lossy(w)) {
    if (!d.is_mark(c)) utf8::append(out, c);
  }
  return out;
}

std::string to_full_cm(std::string_view w, const DiacriticSet& d) {
  std::u32string cps = utf8::decode_lossy(w);
  std::size_t run_start = cps.size();
  while (run_start > 0 && d.is_mark(cps[run_start - 1])) --run_start;
  std::u32string kept(cps.begin(), cps.begin() + run_start);
  for (std::size_t i = run_start; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (d.is_dagger_alef(c) || (d.lexical_only() && d.is_shadda(c))) {
      kept.push_back(c);
    }
  }
  return utf8::encode(kept);
}

DiacPattern abstract_pattern(std::string_view w, const DiacriticSet& d) {
  DiacPattern p;
  for (char32_t c : utf8::decode_lossy(w)) {
    if (d.is_mark(c)) {
      utf8::append(p.pattern, c);
    } else {
      p.pattern.push_back('C');
    }
  }
  return p;
}

bool has_diacritic(std::string_view w, const DiacriticSet& d) {
  for (char32_t c : utf8::decode_lossy(w)) {
    if (d.is_mark(c)) return true;
  }
  return false;
}

bool ends_in_case_mark(std::string_view w, const DiacriticSet& d) {
  const std::u32string cps = utf8::decode_lossy(w);
  if (cps.empty()) return false;
  const char32_t c = cps.back();
  if (!d.is_mark(c)) return false;
  return !(d.is_dagger_alef(c) || (d.lexical_only() && d.is_shadda(c)));
}

std::string transliterate(std::string_view w, Direction dir, bool strict) {
  const std::u32string cps = utf8::decode_lossy(w);
  std::string out;
  out.reserve(w.size() * 2);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (dir == Direction::kArabicToBuckwalter) {
      if (auto bw = to_buckwalter(c)) {
        out.push_back(*bw);
        continue;
      }
    } else if (auto ar = from_buckwalter(c)) {
      utf8::append(out, *ar);
      continue;
    }
    if (strict) throw UnknownCharacter(i);
    utf8::append(out, c);
  }
  return out;
}

bool is_unified_token(std::string_view tok) {
  return tok == "<URL>" || tok == "<EMAIL>" || tok == "<NUM>" ||
         tok == "<PUNC>" || tok == "<SYM>";
}

}  // namespace seldiac
