#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "seldiac/ambig.hpp"
#include "seldiac/evalkit.hpp"
#include "seldiac/synth.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Write the synthetic toy dataset"};
  std::string out_dir = "data/toy";
  seldiac::synth::ToyOptions opts;
  double test_share = 0.2;
  app.add_option("--out", out_dir);
  app.add_option("--sentences", opts.sentences)->check(CLI::Range(10, 10000000));
  app.add_option("--roots", opts.roots)->check(CLI::Range(10, 5000));
  app.add_option("--seed", opts.seed);
  app.add_option("--test-share", test_share)->check(CLI::Range(0.01, 0.9));
  CLI11_PARSE(app, argc, argv);

  const auto data = seldiac::synth::make_toy(opts);
  fs::create_directories(out_dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + name);
    return out;
  };

  {
    auto raw = open("full_raw.txt");
    for (const auto& l : data.raw_lines) raw << l << '\n';
    auto tgt = open("target.txt");
    for (const auto& s : data.glosses) {
      for (std::size_t i = 0; i < s.size(); ++i) tgt << (i ? " " : "") << s[i];
      tgt << '\n';
    }
    auto lex = open("lexicon.tsv");
    seldiac::write_lexicon(lex, data.lexicon);
    auto oracle = open("oracle_dict.tsv");
    seldiac::write_dict(oracle, data.oracle);
  }

  const std::size_t n = data.tagged.sentences.size();
  const std::size_t n_test = static_cast<std::size_t>(static_cast<double>(n) * test_share);
  seldiac::TaggedCorpus train, test;
  for (std::size_t i = 0; i < n; ++i) {
    (i < n - n_test ? train : test).sentences.push_back(data.tagged.sentences[i]);
  }
  {
    auto tr = open("train.tagged");
    seldiac::write_tagged(tr, train);
    auto te = open("test.tagged");
    seldiac::write_tagged(te, test);
  }
  std::cerr << "make_toy_data: sentences=" << n << " train=" << train.sentences.size()
            << " test=" << test.sentences.size() << " lemmas=" << data.lemmas.size()
            << " lexicon_keys=" << data.lexicon.analyses.size() << " -> " << out_dir << '\n';
  return 0;
}
