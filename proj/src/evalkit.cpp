#include "seldiac/evalkit.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "seldiac/error.hpp"

namespace seldiac {

AmbiguityStats ambiguity_stats(const AmbigDict& d) {
  AmbiguityStats s;
  s.types = d.labels.size();
  s.ambig_count = d.ambiguous_count();
  if (s.types == 0) {
    s.empty_warning = true;
    return s;
  }
  s.ambig_pct = 100.0 * static_cast<double>(s.ambig_count) / static_cast<double>(s.types);
  return s;
}

std::string format_stats_row(const std::string& name, const AmbiguityStats& s) {
  std::string digits = std::to_string(s.types);
  std::string grouped;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) grouped.push_back(',');
    grouped.push_back(digits[i]);
  }
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.2f", s.ambig_pct);
  return name + " " + grouped + " " + pct;
}

PatternReport pattern_report(const VariantMap& vm, const AmbigDict& d,
                             const DiacriticSet& ds) {
  if (d.keying != Keying::kDiac) {
    throw KeyingMismatch("pattern statistics need a DIAC-keyed dictionary");
  }
  const bool either = d.method == Method::kTranslation;
  PatternReport r;
  for (const auto& [key, group] : vm.groups()) {
    std::vector<std::string> vars;
    for (const auto& [v, f] : group) vars.push_back(v);
    for (std::size_t a = 0; a < vars.size(); ++a) {
      for (std::size_t b = a + 1; b < vars.size(); ++b) {
        const bool aa = d.ambiguous(vars[a]);
        const bool ab = d.ambiguous(vars[b]);
        const bool amb = either ? (aa || ab) : (aa && ab);
        auto pa = abstract_pattern(vars[a], ds).pattern;
        auto pb = abstract_pattern(vars[b], ds).pattern;
        if (pb < pa) std::swap(pa, pb);
        ++(amb ? r.ambiguous : r.unambiguous)[{pa, pb}];
      }
    }
  }
  for (const auto& [pair, n] : r.ambiguous) {
    if (!r.unambiguous.count(pair)) r.always_ambiguous.insert(pair);
  }
  return r;
}

SparsityMetrics sparsity_metrics(const Corpus& train, const Corpus& test) {
  SparsityMetrics m;
  const VocabStats tr = vocab_stats(train);
  const VocabStats te = vocab_stats(test);
  m.type_count = tr.types;
  m.token_count = tr.tokens;
  std::size_t oov_types = 0, oov_tokens = 0;
  for (const auto& [w, n] : te.type_freqs) {
    if (!tr.type_freqs.count(w)) {
      ++oov_types;
      oov_tokens += n;
    }
  }
  if (te.types) m.oov_type_rate = static_cast<double>(oov_types) / te.types;
  if (te.tokens) m.oov_token_rate = static_cast<double>(oov_tokens) / te.tokens;
  return m;
}

bool is_homograph(const std::string& token, const VariantMap& vm,
                  const DiacriticSet& ds) {
  if (is_unified_token(token)) return false;
  return vm.variant_count(strip_diacritics(token, ds)) >= 2;
}

Corpus homograph_filter(const Corpus& test, const VariantMap& vm,
                        const DiacriticSet& ds) {
  Corpus out;
  out.scheme = test.scheme;
  out.provenance = test.provenance;
  for (const auto& s : test.sentences) {
    if (std::any_of(s.begin(), s.end(),
                    [&](const std::string& t) { return is_homograph(t, vm, ds); })) {
      out.sentences.push_back(s);
    }
  }
  return out;
}

std::set<std::string> TaggedCorpus::tagset() const {
  std::set<std::string> tags;
  for (const auto& s : sentences) {
    for (const auto& t : s) tags.insert(t.tag);
  }
  return tags;
}

Corpus TaggedCorpus::words() const {
  Corpus c;
  c.scheme = scheme;
  for (const auto& s : sentences) {
    Sentence w;
    for (const auto& t : s) w.push_back(t.word);
    c.sentences.push_back(std::move(w));
  }
  return c;
}

TaggedCorpus read_tagged(std::istream& in, const std::string& source, SchemeTag scheme) {
  TaggedCorpus tc;
  tc.scheme = std::move(scheme);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    TaggedSentence s;
    for (const auto& tok : split_tokens(line)) {
      const auto slash = tok.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == tok.size()) {
        throw ParseError(source, lineno, "expected word/TAG, got " + tok);
      }
      s.push_back({tok.substr(0, slash), tok.substr(slash + 1)});
    }
    if (!s.empty()) tc.sentences.push_back(std::move(s));
  }
  return tc;
}

TaggedCorpus read_tagged(const std::string& path, SchemeTag scheme) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_tagged(in, path, std::move(scheme));
}

void write_tagged(std::ostream& out, const TaggedCorpus& c) {
  for (const auto& s : c.sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out << ' ';
      out << s[i].word << '/' << s[i].tag;
    }
    out << '\n';
  }
}

TaggedCorpus retag_view(const TaggedCorpus& tc, const Corpus& view) {
  if (view.sentences.size() != tc.sentences.size()) {
    throw Error("view has a different number of sentences");
  }
  TaggedCorpus out;
  out.scheme = view.scheme;
  for (std::size_t i = 0; i < tc.sentences.size(); ++i) {
    if (view.sentences[i].size() != tc.sentences[i].size()) {
      throw Error("view changes the length of sentence " + std::to_string(i));
    }
    TaggedSentence s;
    for (std::size_t j = 0; j < tc.sentences[i].size(); ++j) {
      s.push_back({view.sentences[i][j], tc.sentences[i][j].tag});
    }
    out.sentences.push_back(std::move(s));
  }
  return out;
}

TaggerReport evaluate_tagger(const PosTagger& model, const TaggedCorpus& test,
                             const std::set<Slice>& slices, const SliceContext& ctx) {
  if (!(model.scheme() == test.scheme)) {
    throw SchemeMismatch("tagger trained on " + model.scheme().str() +
                         " but test data is " + test.scheme.str());
  }
  const TaggedCorpus& members = ctx.membership_view ? *ctx.membership_view : test;
  if (members.sentences.size() != test.sentences.size()) {
    throw Error("membership view does not match the test data");
  }
  const std::set<std::string>& oov_vocab =
      ctx.reference_vocab ? *ctx.reference_vocab : model.vocabulary();

  TaggerReport r;
  for (std::size_t si = 0; si < test.sentences.size(); ++si) {
    const auto& sent = test.sentences[si];
    std::vector<std::string> words;
    for (const auto& t : sent) words.push_back(t.word);
    const auto pred = model.tag(words);
    for (std::size_t i = 0; i < sent.size(); ++i) {
      const std::string& gold = sent[i].tag;
      const bool ok = pred[i] == gold;
      const std::string& member = members.sentences[si].at(i).word;
      auto count = [&](const std::string& name) {
        auto& s = r.slices[name];
        ++s.total;
        if (ok) ++s.correct;
      };
      ++r.confusion[{gold, pred[i]}];
      if (slices.count(Slice::kAll)) count("all");
      if (slices.count(Slice::kHomographs) && ctx.variants &&
          is_homograph(member, *ctx.variants)) {
        count("homographs");
      }
      if (slices.count(Slice::kOov) && !oov_vocab.count(member)) count("oov");
      if (slices.count(Slice::kPerTag) &&
          std::find(kReportedTags.begin(), kReportedTags.end(), gold) != kReportedTags.end()) {
        count("tag:" + gold);
      }
    }
  }
  return r;
}

void write_metric_lines(std::ostream& out, const TaggerReport& r) {
  char buf[32];
  for (const auto& [name, s] : r.slices) {
    std::snprintf(buf, sizeof buf, "%.6f", s.accuracy());
    out << "accuracy\t" << name << '\t' << buf << '\n';
    out << "tokens\t" << name << '\t' << s.total << '\n';
  }
  for (const auto& [gp, n] : r.confusion) {
    out << "confusion\t" << gp.first << "->" << gp.second << '\t' << n << '\n';
  }
}

void write_report_table(std::ostream& out, const TaggerReport& r) {
  std::size_t width = 5;
  for (const auto& [name, s] : r.slices) width = std::max(width, name.size());
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-*s %10s %10s\n", static_cast<int>(width), "slice",
                "tokens", "accuracy");
  out << buf;
  for (const auto& [name, s] : r.slices) {
    std::snprintf(buf, sizeof buf, "%-*s %10zu %10.4f\n", static_cast<int>(width),
                  name.c_str(), s.total, s.accuracy());
    out << buf;
  }
}

}  // namespace seldiac
