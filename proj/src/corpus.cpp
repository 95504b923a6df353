#include "seldiac/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <unordered_map>

#include "seldiac/error.hpp"

namespace seldiac {

std::string SchemeTag::str() const {
  switch (scheme) {
    case Scheme::kNone:
      return "NONE";
    case Scheme::kFull:
      return "FULL";
    case Scheme::kFullCm:
      return "FULL-CM";
    case Scheme::kSelective:
      return "SELECTIVE(" + dict_id + ")";
  }
  return "NONE";
}

SchemeTag SchemeTag::parse(std::string_view s) {
  if (s == "NONE") return {Scheme::kNone, {}};
  if (s == "FULL") return {Scheme::kFull, {}};
  if (s == "FULL-CM") return {Scheme::kFullCm, {}};
  if (s.starts_with("SELECTIVE(") && s.ends_with(")")) {
    return {Scheme::kSelective, std::string(s.substr(10, s.size() - 11))};
  }
  throw Error("unknown scheme tag: " + std::string(s));
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

namespace {

enum class CharClass { kWord, kDigit, kPunct, kSym };

constexpr std::string_view kBuckwalterSpecials = "'|>&<}*$_`~{";
constexpr std::string_view kAsciiPunct = ".,;:!?\"'()[]{}-/";

CharClass classify(char32_t c, const CleanOptions& opts) {
  if (c < 128) {
    const char a = static_cast<char>(c);
    if (a >= '0' && a <= '9') return CharClass::kDigit;
    if ((a >= 'a' && a <= 'z') || (a >= 'A' && a <= 'Z')) {
      return CharClass::kWord;
    }
    if (opts.script == InputScript::kBuckwalter &&
        kBuckwalterSpecials.find(a) != std::string_view::npos) {
      return CharClass::kWord;
    }
    if (kAsciiPunct.find(a) != std::string_view::npos) return CharClass::kPunct;
    return CharClass::kSym;
  }
  if ((c >= 0x0660 && c <= 0x0669) || (c >= 0x06F0 && c <= 0x06F9)) {
    return CharClass::kDigit;
  }
  if (c == 0x060C || c == 0x061B || c == 0x061F || c == 0x06D4 ||
      (c >= 0x066A && c <= 0x066D) || c == 0x00AB || c == 0x00BB ||
      (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E)) {
    return CharClass::kPunct;
  }
  if ((c >= 0x00A1 && c <= 0x00BF) || c == 0x00D7 || c == 0x00F7 ||
      (c >= 0x20A0 && c <= 0x20CF) || (c >= 0x2100 && c <= 0x2BFF)) {
    return CharClass::kSym;
  }
  return CharClass::kWord;
}

const std::regex& email_re() {
  static const std::regex re(R"(^[A-Za-z0-9._%+\-]+@[A-Za-z0-9.\-]+\.[A-Za-z]{2,}$)");
  return re;
}

const std::regex& url_re() {
  static const std::regex re(R"(^(https?://|ftp://|www\.)\S+$)",
                             std::regex::icase);
  return re;
}

}  // namespace

std::vector<std::string> normalize_token(std::string_view token,
                                         const CleanOptions& opts) {
  if (token.empty()) return {};
  if (is_unified_token(token)) return {std::string(token)};
  const std::string tok(token);
  if (std::regex_match(tok, email_re())) return {"<EMAIL>"};
  if (std::regex_match(tok, url_re())) return {"<URL>"};

  std::vector<std::string> out;
  const std::u32string cps = utf8::decode_lossy(token);
  std::size_t i = 0;
  while (i < cps.size()) {
    const CharClass cls = classify(cps[i], opts);
    std::size_t j = i + 1;
    while (j < cps.size() && classify(cps[j], opts) == cls) ++j;
    switch (cls) {
      case CharClass::kWord:
        out.push_back(utf8::encode(std::u32string_view(cps).substr(i, j - i)));
        break;
      case CharClass::kDigit:
        out.emplace_back("<NUM>");
        break;
      case CharClass::kPunct:
        out.emplace_back("<PUNC>");
        break;
      case CharClass::kSym:
        out.emplace_back("<SYM>");
        break;
    }
    i = j;
  }
  return out;
}

std::vector<Sentence> split_long_sentence(const Sentence& s,
                                          std::size_t max_tokens,
                                          std::size_t* overlong) {
  std::vector<Sentence> pieces;
  Sentence cur;
  for (const auto& tok : s) {
    cur.push_back(tok);
    if (tok == "<PUNC>") pieces.push_back(std::move(cur)), cur.clear();
  }
  if (!cur.empty()) pieces.push_back(std::move(cur));

  std::vector<Sentence> out;
  Sentence chunk;
  auto flush = [&] {
    if (chunk.empty()) return;
    if (chunk.size() > max_tokens) {
      if (overlong) ++*overlong;
    } else {
      out.push_back(std::move(chunk));
    }
    chunk.clear();
  };
  for (auto& piece : pieces) {
    if (!chunk.empty() && chunk.size() + piece.size() > max_tokens) flush();
    chunk.insert(chunk.end(), piece.begin(), piece.end());
  }
  flush();
  return out;
}

namespace {

void clean_line(const std::string& line, const CleanOptions& opts,
                CleanResult& res) {
  ++res.report.lines_read;
  if (!utf8::valid(line)) {
    ++res.report.invalid_encoding;
    return;
  }
  Sentence sent;
  for (const auto& raw : split_tokens(line)) {
    for (auto& t : normalize_token(raw, opts)) sent.push_back(std::move(t));
  }
  if (sent.empty()) {
    ++res.report.empty;
    return;
  }
  if (sent.size() <= opts.max_sentence_tokens) {
    res.corpus.sentences.push_back(std::move(sent));
    return;
  }
  ++res.report.split;
  for (auto& piece : split_long_sentence(sent, opts.max_sentence_tokens,
                                         &res.report.dropped)) {
    res.corpus.sentences.push_back(std::move(piece));
  }
}

}  // namespace

CleanResult clean(std::istream& raw_lines, const CleanOptions& opts) {
  CleanResult res;
  res.corpus.scheme = {Scheme::kFull, {}};
  std::string line;
  while (std::getline(raw_lines, line)) clean_line(line, opts, res);
  return res;
}

CleanResult clean(const std::vector<std::string>& raw_lines,
                  const CleanOptions& opts) {
  CleanResult res;
  res.corpus.scheme = {Scheme::kFull, {}};
  for (const auto& line : raw_lines) clean_line(line, opts, res);
  return res;
}

Corpus map_tokens(const Corpus& c, SchemeTag scheme,
                  std::string (*fn)(std::string_view, const DiacriticSet&),
                  const DiacriticSet& d) {
  Corpus out;
  out.scheme = std::move(scheme);
  out.provenance = c.provenance;
  out.sentences.reserve(c.sentences.size());
  for (const auto& s : c.sentences) {
    Sentence m;
    m.reserve(s.size());
    for (const auto& tok : s) {
      m.push_back(is_unified_token(tok) ? tok : fn(tok, d));
    }
    out.sentences.push_back(std::move(m));
  }
  return out;
}

Views derive_views(const Corpus& full, const DiacriticSet& d) {
  return {map_tokens(full, {Scheme::kNone, {}}, &strip_diacritics, d),
          map_tokens(full, {Scheme::kFullCm, {}}, &to_full_cm, d)};
}

void VariantMap::add(std::string_view variant, std::size_t freq,
                     const DiacriticSet& d) {
  if (variant.empty() || is_unified_token(variant)) return;
  groups_[strip_diacritics(variant, d)][std::string(variant)] += freq;
}

void VariantMap::merge(const VariantMap& other) {
  for (const auto& [key, group] : other.groups_) {
    auto& mine = groups_[key];
    for (const auto& [v, f] : group) mine[v] += f;
  }
}

const VariantMap::Group* VariantMap::find(const std::string& key) const {
  auto it = groups_.find(key);
  return it == groups_.end() ? nullptr : &it->second;
}

std::size_t VariantMap::variant_count(const std::string& key) const {
  const Group* g = find(key);
  return g ? g->size() : 0;
}

VariantMap build_variant_map(const Corpus& fullcm, const DiacriticSet& d) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : fullcm.sentences) {
    for (const auto& tok : s) ++counts[tok];
  }
  VariantMap vm;
  for (const auto& [tok, n] : counts) vm.add(tok, n, d);
  return vm;
}

VocabStats vocab_stats(const Corpus& c) {
  VocabStats st;
  for (const auto& s : c.sentences) {
    for (const auto& tok : s) ++st.type_freqs[tok];
    st.tokens += s.size();
  }
  st.types = st.type_freqs.size();
  return st;
}

Corpus filter_min_count(const Corpus& c, std::size_t min_count) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : c.sentences) {
    for (const auto& tok : s) ++counts[tok];
  }
  Corpus out;
  out.scheme = c.scheme;
  out.provenance = c.provenance;
  for (const auto& s : c.sentences) {
    Sentence kept;
    for (const auto& tok : s) {
      if (counts[tok] >= min_count) kept.push_back(tok);
    }
    if (!kept.empty()) out.sentences.push_back(std::move(kept));
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
           c == '\f';
  };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

Corpus read_corpus(std::istream& in, const std::string& source,
                   SchemeTag scheme) {
  Corpus c;
  c.scheme = std::move(scheme);
  c.provenance.push_back(source);
  std::string line;
  while (std::getline(in, line)) {
    auto toks = split_tokens(line);
    if (!toks.empty()) c.sentences.push_back(std::move(toks));
  }
  return c;
}

Corpus read_corpus(const std::string& path, SchemeTag scheme) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_corpus(in, path, std::move(scheme));
}

void write_corpus(std::ostream& out, const Corpus& c) {
  for (const auto& s : c.sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out << ' ';
      out << s[i];
    }
    out << '\n';
  }
}

void write_corpus(const std::string& path, const Corpus& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_corpus(out, c);
}

ParallelCorpus read_parallel(const std::string& source_path,
                             const std::string& target_path,
                             ParallelReadReport* report) {
  std::ifstream src(source_path, std::ios::binary);
  if (!src) throw Error("cannot open " + source_path);
  std::ifstream tgt(target_path, std::ios::binary);
  if (!tgt) throw Error("cannot open " + target_path);
  ParallelCorpus pc;
  std::string ls, lt;
  std::size_t line = 0;
  while (true) {
    const bool has_s = static_cast<bool>(std::getline(src, ls));
    const bool has_t = static_cast<bool>(std::getline(tgt, lt));
    if (!has_s && !has_t) break;
    ++line;
    if (has_s != has_t) {
      throw ParseError(has_s ? target_path : source_path, line,
                       "parallel files differ in line count");
    }
    auto s = split_tokens(ls);
    auto t = split_tokens(lt);
    if (s.empty() || t.empty()) {
      if (report) ++report->skipped_empty;
      continue;
    }
    pc.pairs.emplace_back(std::move(s), std::move(t));
  }
  return pc;
}

}  // namespace seldiac
