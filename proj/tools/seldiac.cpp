#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seldiac/align.hpp"
#include "seldiac/ambig.hpp"
#include "seldiac/clustering.hpp"
#include "seldiac/corpus.hpp"
#include "seldiac/embeddings.hpp"
#include "seldiac/error.hpp"
#include "seldiac/evalkit.hpp"

namespace {

using namespace seldiac;

// Signals a bad flag combination detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  bool deterministic = false;
};

using Settings = std::vector<std::pair<std::string, std::string>>;

std::string join_settings(const Settings& s) {
  std::string out;
  for (const auto& [k, v] : s) out += (out.empty() ? "" : " ") + k + "=" + v;
  return out;
}

void echo_config(const std::string& stage, const Settings& s) {
  std::cerr << stage << ": config " << join_settings(s) << '\n';
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::uint64_t resolve_seed(const Global& g, const std::string& stage) {
  if (g.seed) return *g.seed;
  if (g.deterministic) throw UsageError("--seed is required with --deterministic (" + stage + ")");
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << stage << ": no --seed given, using seed " << s << '\n';
  return s;
}

std::size_t worker_count(const Global& g) { return g.deterministic ? 1 : std::max<std::size_t>(1, g.threads); }

VectorSpace parse_space(const std::string& s) {
  if (s == "word") return VectorSpace::kWord;
  if (s == "context") return VectorSpace::kContext;
  return VectorSpace::kCombined;
}

SchemeTag parse_scheme_flag(const std::string& s) {
  if (s == "none") return {Scheme::kNone, {}};
  if (s == "full") return {Scheme::kFull, {}};
  if (s == "fullcm") return {Scheme::kFullCm, {}};
  return SchemeTag::parse(s);
}

// Embedding files cannot carry the training scheme, so it lives next to them.
void write_meta(const std::string& path, const Settings& s) {
  std::ofstream out(path + ".meta", std::ios::binary);
  if (!out) throw Error("cannot write " + path + ".meta");
  for (const auto& [k, v] : s) out << k << '=' << v << '\n';
}

EmbeddingTable load_table(const std::string& path) {
  EmbeddingTable t = load_embeddings(path);
  std::ifstream meta(path + ".meta");
  std::string line;
  while (std::getline(meta, line)) {
    if (line.starts_with("scheme=")) t.trained_on = SchemeTag::parse(line.substr(7));
  }
  return t;
}

VariantMap variants_for(const std::string& corpus_path, const std::string& lexicon_path) {
  VariantMap vm;
  if (!corpus_path.empty()) vm = build_variant_map(read_corpus(corpus_path, {Scheme::kFullCm, {}}));
  if (!lexicon_path.empty()) {
    for (const auto& [key, vs] : read_lexicon(lexicon_path).analyses) {
      for (const auto& v : vs) vm.add(v, 0);
    }
  }
  return vm;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  fn(out);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective diacritization toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with flag defaults")->check(CLI::ExistingFile);
  app.allow_config_extras(CLI::config_extras_mode::error);

  Global g;
  app.add_option("--seed", g.seed, "Seed for randomized stages");
  app.add_option("--threads", g.threads, "Worker threads")
      ->envname("SELDIAC_THREADS")
      ->check(CLI::Range(1, 256));
  app.add_flag("--deterministic", g.deterministic, "Single-threaded, reproducible numerics");

  // clean
  auto* c_clean = app.add_subcommand("clean", "Normalize raw text into a corpus");
  std::string clean_in, clean_out, clean_script = "buckwalter";
  std::size_t clean_max = 150;
  c_clean->add_option("--in", clean_in)->required()->check(CLI::ExistingFile);
  c_clean->add_option("--out", clean_out)->required();
  c_clean->add_option("--script", clean_script)->check(CLI::IsMember({"buckwalter", "unicode"}));
  c_clean->add_option("--max-len", clean_max)->check(CLI::Range(1, 100000));

  // views
  auto* c_views = app.add_subcommand("views", "Derive NONE and FULL-CM views of a FULL corpus");
  std::string views_in, views_none, views_fullcm;
  c_views->add_option("--in", views_in)->required()->check(CLI::ExistingFile);
  c_views->add_option("--none", views_none)->required();
  c_views->add_option("--fullcm", views_fullcm)->required();

  // embed
  auto* c_embed = app.add_subcommand("embed", "Train skip-gram embeddings");
  std::string embed_in, embed_out, embed_scheme = "none";
  SgnsOptions sg;
  c_embed->add_option("--in", embed_in)->required()->check(CLI::ExistingFile);
  c_embed->add_option("--out", embed_out)->required();
  c_embed->add_option("--scheme", embed_scheme, "Scheme of the input corpus")
      ->check(CLI::IsMember({"none", "fullcm", "full"}));
  c_embed->add_option("--dim", sg.dim)->check(CLI::Range(2, 4096));
  c_embed->add_option("--window", sg.window)->check(CLI::Range(1, 100));
  c_embed->add_option("--negatives", sg.negatives)->check(CLI::Range(1, 100));
  c_embed->add_option("--epochs", sg.epochs)->check(CLI::Range(1, 1000));
  c_embed->add_option("--min-count", sg.min_count)->check(CLI::Range(1, 1000000));
  c_embed->add_option("--subsample", sg.subsample)->check(CLI::Range(0.0, 1.0));
  c_embed->add_option("--alpha", sg.alpha)->check(CLI::Range(1e-6, 1.0));

  // cluster
  auto* c_cluster = app.add_subcommand("cluster", "Cluster words");
  std::string cl_algo, cl_embeddings, cl_corpus, cl_out, cl_space = "word", cl_word;
  std::size_t cl_k = 500, cl_n_init = 1, cl_max_iter = 0, cl_min_count = 1;
  std::size_t cl_graph = 200, cl_gran = 400, cl_iter = 20;
  double cl_tol = -1;
  c_cluster->add_option("--algo", cl_algo)->required()->check(CLI::IsMember({"km", "em", "br", "cw"}));
  c_cluster->add_option("--embeddings", cl_embeddings)->check(CLI::ExistingFile);
  c_cluster->add_option("--corpus", cl_corpus, "Corpus for Brown clustering")->check(CLI::ExistingFile);
  c_cluster->add_option("--out", cl_out)->required();
  c_cluster->add_option("--space", cl_space)->check(CLI::IsMember({"word", "context", "combined"}));
  c_cluster->add_option("--k", cl_k)->check(CLI::Range(1, 1000000));
  c_cluster->add_option("--n-init", cl_n_init)->check(CLI::Range(1, 1000));
  c_cluster->add_option("--max-iter", cl_max_iter)->check(CLI::Range(1, 100000));
  c_cluster->add_option("--tol", cl_tol)->check(CLI::Range(0.0, 1e6));
  c_cluster->add_option("--min-count", cl_min_count)->check(CLI::Range(1, 1000000));
  c_cluster->add_option("--word", cl_word, "Ego word for Chinese Whispers");
  c_cluster->add_option("--N", cl_graph)->check(CLI::Range(1, 100000));
  c_cluster->add_option("--n", cl_gran)->check(CLI::Range(1, 100000));
  c_cluster->add_option("--iterations", cl_iter)->check(CLI::Range(1, 10000));

  // align
  auto* c_align = app.add_subcommand("align", "Train IBM Model 2 and extract translations");
  std::string al_src, al_tgt, al_ttable, al_links;
  AlignOptions ao;
  std::size_t al_top = 0;
  bool al_fixed = false;
  c_align->add_option("--src", al_src)->required()->check(CLI::ExistingFile);
  c_align->add_option("--tgt", al_tgt)->required()->check(CLI::ExistingFile);
  c_align->add_option("--ttable", al_ttable)->required();
  c_align->add_option("--links", al_links);
  c_align->add_option("--iterations", ao.iterations)->check(CLI::Range(1, 1000));
  c_align->add_option("--lambda0", ao.lambda0)->check(CLI::Range(0.0, kMaxTension));
  c_align->add_option("--p-null", ao.p_null)->check(CLI::Range(0.0, 0.999));
  c_align->add_flag("--fixed-tension", al_fixed);
  c_align->add_option("--top-n", al_top, "Translations kept per source word (0 = all)");

  // build-dict
  auto* c_build = app.add_subcommand("build-dict", "Build an ambiguity dictionary");
  std::string bd_method, bd_out, bd_lexicon, bd_embeddings, bd_clusters, bd_corpus, bd_ttable;
  std::string bd_space = "combined";
  SenseOptions so;
  std::size_t bd_top = 0;
  c_build->add_option("--method", bd_method)->required()->check(CLI::IsMember({"multi", "sense", "cl", "tr"}));
  c_build->add_option("--out", bd_out)->required();
  c_build->add_option("--lexicon", bd_lexicon)->check(CLI::ExistingFile);
  c_build->add_option("--embeddings", bd_embeddings)->check(CLI::ExistingFile);
  c_build->add_option("--clusters", bd_clusters)->check(CLI::ExistingFile);
  c_build->add_option("--corpus", bd_corpus, "FULL-CM corpus for variant groups")->check(CLI::ExistingFile);
  c_build->add_option("--ttable", bd_ttable)->check(CLI::ExistingFile);
  c_build->add_option("--top-n", bd_top, "Translations compared per variant (0 = all)");
  c_build->add_option("--N", so.graph_size)->check(CLI::Range(1, 100000));
  c_build->add_option("--n", so.granularity)->check(CLI::Range(1, 100000));
  c_build->add_option("--min-cluster", so.min_cluster)->check(CLI::Range(1, 100000));
  c_build->add_option("--iterations", so.iterations)->check(CLI::Range(1, 10000));
  c_build->add_option("--space", bd_space)->check(CLI::IsMember({"word", "context", "combined"}));

  // apply
  auto* c_apply = app.add_subcommand("apply", "Selectively diacritize a FULL-CM corpus");
  std::string ap_dict, ap_in, ap_out;
  c_apply->add_option("--dict", ap_dict)->required()->check(CLI::ExistingFile);
  c_apply->add_option("--in", ap_in)->required()->check(CLI::ExistingFile);
  c_apply->add_option("--out", ap_out, "Output path (default stdout)");

  // stats
  auto* c_stats = app.add_subcommand("stats", "Dictionary size and ambiguity rate");
  std::vector<std::string> st_dicts;
  c_stats->add_option("dicts", st_dicts)->required()->check(CLI::ExistingFile);

  // patterns
  auto* c_pat = app.add_subcommand("patterns", "Diacritic pattern pairs of variant groups");
  std::string pt_dict, pt_corpus, pt_lexicon;
  std::size_t pt_top = 20;
  c_pat->add_option("--dict", pt_dict)->required()->check(CLI::ExistingFile);
  c_pat->add_option("--corpus", pt_corpus)->check(CLI::ExistingFile);
  c_pat->add_option("--lexicon", pt_lexicon)->check(CLI::ExistingFile);
  c_pat->add_option("--top", pt_top);

  // eval-pos
  auto* c_eval = app.add_subcommand("eval-pos", "Train and evaluate the POS tagger under one scheme");
  std::string ev_train, ev_test, ev_scheme = "none", ev_dict, ev_lexicon, ev_metrics, ev_scores;
  std::size_t ev_epochs = 5;
  c_eval->add_option("--train", ev_train)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--test", ev_test)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--scheme", ev_scheme)->check(CLI::IsMember({"none", "fullcm", "selective"}));
  c_eval->add_option("--dict", ev_dict)->check(CLI::ExistingFile);
  c_eval->add_option("--lexicon", ev_lexicon)->check(CLI::ExistingFile);
  c_eval->add_option("--epochs", ev_epochs)->check(CLI::Range(1, 1000));
  c_eval->add_option("--metrics", ev_metrics, "Write metric<TAB>slice<TAB>value lines here");
  c_eval->add_option("--sentence-scores", ev_scores, "Write per-sentence accuracy here");

  // bootstrap
  auto* c_boot = app.add_subcommand("bootstrap", "Paired bootstrap test over per-sentence scores");
  std::string bs_a, bs_b;
  std::size_t bs_resamples = 1000;
  c_boot->add_option("--a", bs_a)->required()->check(CLI::ExistingFile);
  c_boot->add_option("--b", bs_b)->required()->check(CLI::ExistingFile);
  c_boot->add_option("--resamples", bs_resamples)->check(CLI::Range(1, 10000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*c_clean) {
      CleanOptions co;
      co.max_sentence_tokens = clean_max;
      co.script = clean_script == "unicode" ? InputScript::kUnicode : InputScript::kBuckwalter;
      echo_config("clean", {{"script", clean_script}, {"max_len", std::to_string(clean_max)}});
      std::ifstream in(clean_in, std::ios::binary);
      auto res = clean(in, co);
      write_corpus(clean_out, res.corpus);
      const auto& r = res.report;
      std::cerr << "clean: lines=" << r.lines_read << " sentences=" << res.corpus.sentences.size()
                << " tokens=" << res.corpus.token_count() << " invalid=" << r.invalid_encoding
                << " empty=" << r.empty << " split=" << r.split << " dropped=" << r.dropped << '\n';
    } else if (*c_views) {
      const Corpus full = read_corpus(views_in, {Scheme::kFull, {}});
      const Views v = derive_views(full);
      write_corpus(views_none, v.none);
      write_corpus(views_fullcm, v.fullcm);
      std::cerr << "views: sentences=" << full.sentences.size()
                << " types_none=" << vocab_stats(v.none).types
                << " types_fullcm=" << vocab_stats(v.fullcm).types << '\n';
    } else if (*c_embed) {
      sg.seed = resolve_seed(g, "embed");
      sg.threads = worker_count(g);
      const SchemeTag scheme = parse_scheme_flag(embed_scheme);
      const Settings cfg = {{"scheme", scheme.str()},
                            {"dim", std::to_string(sg.dim)},
                            {"window", std::to_string(sg.window)},
                            {"negatives", std::to_string(sg.negatives)},
                            {"epochs", std::to_string(sg.epochs)},
                            {"min_count", std::to_string(sg.min_count)},
                            {"subsample", fmt_double(sg.subsample)},
                            {"alpha", fmt_double(sg.alpha)},
                            {"seed", std::to_string(sg.seed)},
                            {"threads", std::to_string(sg.threads)}};
      echo_config("embed", cfg);
      const auto res = train_sgns(read_corpus(embed_in, scheme), sg);
      save_embeddings(embed_out, res.table);
      write_meta(embed_out, cfg);
      std::cerr << "embed: vocab=" << res.table.size() << " dim=" << res.table.dim()
                << " final_loss=" << fmt_double(res.epoch_loss.empty() ? 0 : res.epoch_loss.back())
                << '\n';
    } else if (*c_cluster) {
      ClusterAssignment ca;
      Settings cfg = {{"algo", cl_algo}, {"k", std::to_string(cl_k)}};
      if (cl_algo == "br") {
        if (cl_corpus.empty()) throw UsageError("--corpus is required for --algo br");
        echo_config("cluster", cfg);
        ca = brown(read_corpus(cl_corpus), {cl_k, cl_min_count});
      } else {
        if (cl_embeddings.empty()) throw UsageError("--embeddings is required for --algo " + cl_algo);
        const EmbeddingTable t = load_table(cl_embeddings);
        const std::uint64_t seed = resolve_seed(g, "cluster");
        cfg.emplace_back("seed", std::to_string(seed));
        cfg.emplace_back("space", cl_space);
        if (cl_algo == "km") {
          KMeansOptions ko;
          ko.k = cl_k;
          ko.n_init = cl_n_init;
          ko.seed = seed;
          if (cl_max_iter) ko.max_iter = cl_max_iter;
          if (cl_tol >= 0) ko.tol = cl_tol;
          echo_config("cluster", cfg);
          ca = kmeans(vectors_from(t, parse_space(cl_space)), ko);
        } else if (cl_algo == "em") {
          GmmOptions go;
          go.k = cl_k;
          go.seed = seed;
          if (cl_max_iter) go.max_iter = cl_max_iter;
          if (cl_tol >= 0) go.tol = cl_tol;
          echo_config("cluster", cfg);
          ca = gmm_em(vectors_from(t, parse_space(cl_space)), go);
        } else {
          if (cl_word.empty()) throw UsageError("--word is required for --algo cw");
          cfg.erase(cfg.begin() + 1);
          cfg.emplace_back("word", cl_word);
          cfg.emplace_back("N", std::to_string(cl_graph));
          cfg.emplace_back("n", std::to_string(cl_gran));
          cfg.emplace_back("iterations", std::to_string(cl_iter));
          echo_config("cluster", cfg);
          const auto graph = build_ego_graph(t, cl_word, cl_graph, cl_gran, parse_space(cl_space));
          ca = chinese_whispers(graph, cl_iter, seed);
        }
      }
      write_clusters(cl_out, ca);
      std::cerr << "cluster: algo=" << algo_code(ca.algo) << " words=" << ca.labels.size()
                << " k=" << ca.k << " objective=" << fmt_double(ca.objective)
                << " converged=" << (ca.converged ? "yes" : "no") << '\n';
    } else if (*c_align) {
      ao.optimize_tension = !al_fixed;
      ao.threads = worker_count(g);
      echo_config("align", {{"iterations", std::to_string(ao.iterations)},
                            {"lambda0", fmt_double(ao.lambda0)},
                            {"p_null", fmt_double(ao.p_null)},
                            {"optimize_tension", ao.optimize_tension ? "1" : "0"},
                            {"top_n", std::to_string(al_top)}});
      ParallelReadReport rep;
      const ParallelCorpus pc = read_parallel(al_src, al_tgt, &rep);
      const AlignmentModel m = train_ibm2(pc, ao);
      const std::optional<std::size_t> n = al_top ? std::optional<std::size_t>(al_top) : std::nullopt;
      write_ttable(al_ttable, top_n_translations(m, n));
      if (!al_links.empty()) {
        with_output(al_links, [&](std::ostream& out) {
          for (const auto& [s, t] : pc.pairs) out << format_links(viterbi_align(m, s, t)) << '\n';
        });
      }
      std::cerr << "align: pairs=" << pc.pairs.size() << " skipped=" << rep.skipped_empty
                << " lambda=" << fmt_double(m.lambda) << " log_likelihood="
                << fmt_double(m.log_likelihood.empty() ? 0 : m.log_likelihood.back()) << '\n';
    } else if (*c_build) {
      AmbigDict d;
      std::string extra;
      if (bd_method == "multi") {
        if (bd_lexicon.empty()) throw UsageError("--lexicon is required for --method multi");
        d = build_multi(read_lexicon(bd_lexicon));
      } else if (bd_method == "sense") {
        if (bd_embeddings.empty()) throw UsageError("--embeddings is required for --method sense");
        so.seed = resolve_seed(g, "build-dict");
        so.space = parse_space(bd_space);
        d = build_sense(load_table(bd_embeddings), so);
        d.params["space"] = bd_space;
      } else if (bd_method == "cl") {
        if (bd_clusters.empty()) throw UsageError("--clusters is required for --method cl");
        if (bd_corpus.empty() && bd_lexicon.empty()) {
          throw UsageError("--corpus or --lexicon is required for --method cl");
        }
        ClReport rep;
        d = build_cl(variants_for(bd_corpus, bd_lexicon), read_clusters(bd_clusters), &rep);
        extra = " uncovered=" + std::to_string(rep.uncovered.size());
      } else {
        if (bd_ttable.empty()) throw UsageError("--ttable is required for --method tr");
        if (bd_corpus.empty() && bd_lexicon.empty()) {
          throw UsageError("--corpus or --lexicon is required for --method tr");
        }
        const std::optional<std::size_t> n = bd_top ? std::optional<std::size_t>(bd_top) : std::nullopt;
        d = build_tr(variants_for(bd_corpus, bd_lexicon), read_ttable(bd_ttable), n);
      }
      echo_config("build-dict", {d.params.begin(), d.params.end()});
      write_dict(bd_out, d);
      const auto s = ambiguity_stats(d);
      std::cerr << "build-dict: " << format_stats_row(method_name(d.method), s)
                << " keying=" << keying_name(d.keying) << extra << '\n';
    } else if (*c_apply) {
      const AmbigDict d = read_dict(ap_dict);
      const Corpus in = read_corpus(ap_in, {Scheme::kFullCm, {}});
      const Corpus out = apply_selective(in, d);
      with_output(ap_out, [&](std::ostream& os) { write_corpus(os, out); });
      std::cerr << "apply: scheme=" << out.scheme.str() << " sentences=" << out.sentences.size()
                << " types=" << vocab_stats(out).types << '\n';
    } else if (*c_stats) {
      for (const auto& path : st_dicts) {
        const AmbigDict d = read_dict(path);
        const auto s = ambiguity_stats(d);
        if (s.empty_warning) std::cerr << "stats: warning: " << path << " has no entries\n";
        std::cout << format_stats_row(method_name(d.method), s) << '\n';
      }
    } else if (*c_pat) {
      if (pt_corpus.empty() && pt_lexicon.empty()) {
        throw UsageError("--corpus or --lexicon is required");
      }
      const AmbigDict d = read_dict(pt_dict);
      const PatternReport r = pattern_report(variants_for(pt_corpus, pt_lexicon), d);
      auto dump = [&](const char* label, const std::map<PatternPair, std::size_t>& m) {
        std::vector<std::pair<std::size_t, PatternPair>> rows;
        for (const auto& [p, n] : m) rows.emplace_back(n, p);
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::size_t i = 0; i < rows.size() && i < pt_top; ++i) {
          std::cout << label << '\t' << rows[i].second.first << '\t' << rows[i].second.second
                    << '\t' << rows[i].first << '\n';
        }
      };
      dump("ambiguous", r.ambiguous);
      dump("unambiguous", r.unambiguous);
      for (const auto& p : r.always_ambiguous) {
        std::cout << "always_ambiguous\t" << p.first << '\t' << p.second << '\n';
      }
      std::cerr << "patterns: ambiguous_pairs=" << r.ambiguous.size()
                << " unambiguous_pairs=" << r.unambiguous.size()
                << " always_ambiguous=" << r.always_ambiguous.size() << '\n';
    } else if (*c_eval) {
      const std::uint64_t seed = resolve_seed(g, "eval-pos");
      if (ev_scheme == "selective" && ev_dict.empty()) {
        throw UsageError("--dict is required for --scheme selective");
      }
      const TaggedCorpus train = read_tagged(ev_train, {Scheme::kFull, {}});
      const TaggedCorpus test = read_tagged(ev_test, {Scheme::kFull, {}});
      const Views vtr = derive_views(train.words());
      const Views vte = derive_views(test.words());
      auto view_of = [&](const Views& v) {
        if (ev_scheme == "none") return v.none;
        if (ev_scheme == "fullcm") return v.fullcm;
        return apply_selective(v.fullcm, read_dict(ev_dict));
      };
      const TaggedCorpus tr = retag_view(train, view_of(vtr));
      const TaggedCorpus te = retag_view(test, view_of(vte));
      echo_config("eval-pos", {{"scheme", tr.scheme.str()},
                               {"epochs", std::to_string(ev_epochs)},
                               {"seed", std::to_string(seed)}});
      const PosTagger model = PosTagger::train(tr, ev_epochs, seed);

      VariantMap vm = variants_for("", ev_lexicon);
      vm.merge(build_variant_map(vtr.fullcm));
      const Corpus& ref = vtr.fullcm;
      std::set<std::string> ref_vocab;
      for (const auto& s : ref.sentences) ref_vocab.insert(s.begin(), s.end());
      const TaggedCorpus members = retag_view(test, vte.fullcm);
      const SliceContext ctx{&vm, &ref_vocab, &members};
      const TaggerReport rep = evaluate_tagger(
          model, te, {Slice::kAll, Slice::kHomographs, Slice::kOov, Slice::kPerTag}, ctx);
      write_report_table(std::cout, rep);
      if (!ev_metrics.empty()) with_output(ev_metrics, [&](std::ostream& o) { write_metric_lines(o, rep); });
      if (!ev_scores.empty()) {
        with_output(ev_scores, [&](std::ostream& o) {
          char buf[32];
          for (const auto& s : te.sentences) {
            std::vector<std::string> words;
            for (const auto& t : s) words.push_back(t.word);
            const auto pred = model.tag(words);
            std::size_t ok = 0;
            for (std::size_t i = 0; i < s.size(); ++i) ok += pred[i] == s[i].tag;
            std::snprintf(buf, sizeof buf, "%.6f", s.empty() ? 0.0 : static_cast<double>(ok) / s.size());
            o << buf << '\n';
          }
        });
      }
      const auto all = rep.slices.count("all") ? rep.slices.at("all") : SliceAccuracy{};
      std::cerr << "eval-pos: scheme=" << tr.scheme.str() << " tokens=" << all.total
                << " accuracy=" << fmt_double(all.accuracy()) << '\n';
    } else if (*c_boot) {
      const std::uint64_t seed = resolve_seed(g, "bootstrap");
      auto load = [](const std::string& path) {
        std::ifstream in(path);
        std::vector<double> v;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
          ++lineno;
          if (line.empty()) continue;
          try {
            std::size_t used = 0;
            v.push_back(std::stod(line, &used));
            if (used != line.size()) throw std::invalid_argument(line);
          } catch (const std::exception&) {
            throw ParseError(path, lineno, "expected a number, got \"" + line + "\"");
          }
        }
        return v;
      };
      const auto a = load(bs_a);
      const auto b = load(bs_b);
      double ma = 0, mb = 0;
      for (double x : a) ma += x;
      for (double x : b) mb += x;
      const double p = paired_bootstrap(a, b, bs_resamples, seed);
      std::cout << "mean_a\t" << fmt_double(a.empty() ? 0 : ma / a.size()) << '\n'
                << "mean_b\t" << fmt_double(b.empty() ? 0 : mb / b.size()) << '\n'
                << "p_value\t" << fmt_double(p) << '\n';
      std::cerr << "bootstrap: items=" << a.size() << " resamples=" << bs_resamples
                << " seed=" << seed << " p=" << fmt_double(p) << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
