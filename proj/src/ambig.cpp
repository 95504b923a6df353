#include "seldiac/ambig.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "seldiac/error.hpp"

namespace seldiac {

std::string keying_name(Keying k) { return k == Keying::kUndiac ? "UNDIAC" : "DIAC"; }

std::string method_name(Method m) {
  switch (m) {
    case Method::kMulti:
      return "MULTI";
    case Method::kSense:
      return "SENSE";
    case Method::kClBrown:
      return "CL-BR";
    case Method::kClKMeans:
      return "CL-KM";
    case Method::kClGmm:
      return "CL-EM";
    case Method::kTranslation:
      return "TR";
  }
  return "MULTI";
}

Keying parse_keying(const std::string& s) {
  if (s == "UNDIAC") return Keying::kUndiac;
  if (s == "DIAC") return Keying::kDiac;
  throw Error("unknown keying: " + s);
}

Method parse_method(const std::string& s) {
  for (Method m : {Method::kMulti, Method::kSense, Method::kClBrown,
                   Method::kClKMeans, Method::kClGmm, Method::kTranslation}) {
    if (method_name(m) == s) return m;
  }
  throw Error("unknown method: " + s);
}

bool AmbigDict::ambiguous(const std::string& word) const {
  auto it = labels.find(word);
  return it != labels.end() && it->second == Label::kAmbiguous;
}

std::size_t AmbigDict::ambiguous_count() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(),
                    [](const auto& kv) { return kv.second == Label::kAmbiguous; }));
}

std::string AmbigDict::id() const {
  std::string s = method_name(method);
  for (const auto& [k, v] : params) s += "," + k + "=" + v;
  return s;
}

void MorphLexicon::add(const std::string& variant, const DiacriticSet& d) {
  if (variant.empty() || is_unified_token(variant)) return;
  const std::string cm = to_full_cm(variant, d);
  analyses[strip_diacritics(cm, d)].insert(cm);
}

AmbigDict build_multi(const MorphLexicon& lex) {
  AmbigDict d;
  d.keying = Keying::kUndiac;
  d.method = Method::kMulti;
  for (const auto& [word, variants] : lex.analyses) {
    if (variants.empty() || is_unified_token(word)) continue;
    d.labels.emplace(word, variants.size() >= 2 ? Label::kAmbiguous
                                                : Label::kUnambiguous);
  }
  return d;
}

std::vector<std::vector<std::string>> sense_clusters(EgoGraphBuilder& builder,
                                                     const std::string& w,
                                                     const SenseOptions& opts) {
  const SimilarityGraph g = builder.build(w, opts.graph_size, opts.granularity);
  const ClusterAssignment ca = chinese_whispers(g, opts.iterations, opts.seed);
  std::vector<std::vector<std::string>> clusters(ca.k);
  for (const auto& node : g.nodes) clusters[ca.labels.at(node)].push_back(node);
  std::erase_if(clusters, [&](const auto& c) { return c.size() < opts.min_cluster; });
  return clusters;
}

AmbigDict build_sense(const EmbeddingTable& t, const SenseOptions& opts) {
  if (t.trained_on.scheme != Scheme::kNone) {
    throw SchemeMismatch("SENSE needs embeddings trained on undiacritized text, got " +
                         t.trained_on.str());
  }
  AmbigDict d;
  d.keying = Keying::kUndiac;
  d.method = Method::kSense;
  d.params = {{"N", std::to_string(opts.graph_size)},
              {"n", std::to_string(opts.granularity)},
              {"k", std::to_string(opts.min_cluster)},
              {"seed", std::to_string(opts.seed)}};
  EgoGraphBuilder builder(t, opts.space);
  for (const auto& w : t.vocab()) {
    if (is_unified_token(w)) continue;
    if (t.size() < 3) {
      d.labels.emplace(w, Label::kUnambiguous);
      continue;
    }
    const auto clusters = sense_clusters(builder, w, opts);
    d.labels.emplace(w, clusters.size() >= 2 ? Label::kAmbiguous : Label::kUnambiguous);
  }
  return d;
}

AmbigDict build_cl(const VariantMap& vm, const ClusterAssignment& ca,
                   ClReport* report) {
  AmbigDict d;
  d.keying = Keying::kDiac;
  switch (ca.algo) {
    case ClusterAlgo::kBrown:
      d.method = Method::kClBrown;
      break;
    case ClusterAlgo::kKMeans:
      d.method = Method::kClKMeans;
      break;
    case ClusterAlgo::kGmm:
      d.method = Method::kClGmm;
      break;
    case ClusterAlgo::kChineseWhispers:
      throw Error("CL dictionaries take KM, EM or BR clusterings");
  }
  d.params = {{"k", std::to_string(ca.k)}};
  // Uncovered variants get fresh ids past every real cluster.
  std::size_t next_free = ca.k;
  for (const auto& [w, id] : ca.labels) next_free = std::max(next_free, id + 1);
  for (const auto& [key, group] : vm.groups()) {
    std::set<std::size_t> seen;
    for (const auto& [v, f] : group) {
      auto it = ca.labels.find(v);
      if (it != ca.labels.end()) {
        seen.insert(it->second);
      } else {
        seen.insert(next_free++);
        if (report) report->uncovered.push_back(v);
      }
    }
    const Label l = seen.size() >= 2 ? Label::kAmbiguous : Label::kUnambiguous;
    for (const auto& [v, f] : group) d.labels.emplace(v, l);
  }
  return d;
}

AmbigDict build_tr(const VariantMap& vm, const TranslationTable& tt,
                   std::optional<std::size_t> n) {
  AmbigDict d;
  d.keying = Keying::kDiac;
  d.method = Method::kTranslation;
  d.params = {{"N", n ? std::to_string(*n) : "all"}};
  auto translations = [&](const std::string& v) {
    std::set<std::string> out;
    auto it = tt.entries.find(v);
    if (it == tt.entries.end()) return out;
    const std::size_t limit = n ? std::min(*n, it->second.size()) : it->second.size();
    for (std::size_t r = 0; r < limit; ++r) out.insert(it->second[r].first);
    return out;
  };
  for (const auto& [key, group] : vm.groups()) {
    std::vector<std::string> vars;
    std::vector<std::set<std::string>> tr;
    for (const auto& [v, f] : group) {
      vars.push_back(v);
      tr.push_back(translations(v));
    }
    for (std::size_t a = 0; a < vars.size(); ++a) {
      bool shares_with_all = true;
      for (std::size_t b = 0; b < vars.size() && shares_with_all; ++b) {
        if (a == b) continue;
        const bool overlap = std::any_of(tr[a].begin(), tr[a].end(),
                                         [&](const auto& x) { return tr[b].count(x) > 0; });
        shares_with_all = overlap;
      }
      d.labels.emplace(vars[a], shares_with_all ? Label::kUnambiguous : Label::kAmbiguous);
    }
  }
  return d;
}

Corpus apply_selective(const Corpus& fullcm, const AmbigDict& d,
                       const DiacriticSet& ds) {
  Corpus out;
  out.scheme = {Scheme::kSelective, d.id()};
  out.provenance = fullcm.provenance;
  out.sentences.reserve(fullcm.sentences.size());
  for (const auto& s : fullcm.sentences) {
    Sentence m;
    m.reserve(s.size());
    for (const auto& tok : s) {
      if (is_unified_token(tok)) {
        m.push_back(tok);
        continue;
      }
      std::string stripped = strip_diacritics(tok, ds);
      const std::string& key = d.keying == Keying::kDiac ? tok : stripped;
      m.push_back(d.ambiguous(key) ? tok : std::move(stripped));
    }
    out.sentences.push_back(std::move(m));
  }
  return out;
}

MorphLexicon read_lexicon(std::istream& in, const std::string& source) {
  MorphLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  const DiacriticSet& d = default_diacritics();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(source, lineno, "expected <undiac_word>\\t<variant>|...");
    }
    const std::string key = line.substr(0, tab);
    if (has_diacritic(key, d)) throw ParseError(source, lineno, "key carries diacritics: " + key);
    std::size_t start = tab + 1;
    bool any = false;
    while (start <= line.size()) {
      std::size_t bar = line.find('|', start);
      if (bar == std::string::npos) bar = line.size();
      const std::string v = line.substr(start, bar - start);
      if (!v.empty()) {
        const std::string cm = to_full_cm(v, d);
        if (strip_diacritics(cm, d) != key) {
          throw ParseError(source, lineno, "variant " + v + " does not strip to " + key);
        }
        lex.analyses[key].insert(cm);
        any = true;
      }
      start = bar + 1;
    }
    if (!any) throw ParseError(source, lineno, "no variants for " + key);
  }
  return lex;
}

MorphLexicon read_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_lexicon(in, path);
}

void write_lexicon(std::ostream& out, const MorphLexicon& lex) {
  for (const auto& [key, vars] : lex.analyses) {
    out << key << '\t';
    bool first = true;
    for (const auto& v : vars) {
      if (!first) out << '|';
      out << v;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace seldiac
