#include <doctest.h>

#include <chrono>
#include <regex>
#include <set>

#include "pipeline.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = SELDIAC_BIN;
const fs::path kData = fs::path(SELDIAC_SOURCE_DIR) / "data" / "toy";
const fs::path kWork = fs::path(SELDIAC_WORK_DIR) / "cli_work";

int cli(const std::string& args, const fs::path& cwd = kWork) {
  return pipeline::run("cd '" + cwd.string() + "' && '" + kBin + "' " + args + " > out.txt 2> err.txt");
}

std::string out_text() { return pipeline::slurp(kWork / "out.txt"); }
std::string err_text() { return pipeline::slurp(kWork / "err.txt"); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// Runs the pipeline once per process; later cases reuse its outputs.
const std::string& pipeline_result() {
  static const std::string failed = pipeline::run_all(kBin, kData, kWork);
  return failed;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("every stage runs on the toy data") {
    const auto t0 = std::chrono::steady_clock::now();
    CHECK(pipeline_result().empty());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 120.0);
    for (const auto& o : pipeline::kOutputs) {
      INFO(o);
      CHECK(fs::exists(kWork / o));
      CHECK(fs::file_size(kWork / o) > 0);
    }
  }

  TEST_CASE("stats rows") {
    REQUIRE(pipeline_result().empty());
    const std::string stats = pipeline::slurp(kWork / "stats.txt");
    const std::regex row(R"(^(MULTI|SENSE|CL-KM|CL-EM|CL-BR|TR) \d{1,3}(,\d{3})* \d+\.\d\d$)");
    std::istringstream in(stats);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      INFO(line);
      CHECK(std::regex_match(line, row));
      ++n;
    }
    CHECK(n == 4);
    CHECK(stats.rfind("MULTI 1,506 ", 0) == 0);
  }

  TEST_CASE("all-ambiguous and empty dictionaries reproduce the views") {
    REQUIRE(pipeline_result().empty());
    std::set<std::string> types;
    {
      std::istringstream in(pipeline::slurp(kWork / "fullcm.txt"));
      std::string w;
      while (in >> w) {
        if (w.front() != '<') types.insert(w);
      }
    }
    std::string all = "#keying=DIAC method=MULTI params=\n";
    for (const auto& t : types) all += t + "\tA\n";
    write(kWork / "all.dict", all);
    write(kWork / "empty.dict", "#keying=UNDIAC method=MULTI params=\n");
    REQUIRE(cli("apply --dict all.dict --in fullcm.txt --out sel_all.txt") == 0);
    CHECK(pipeline::slurp(kWork / "sel_all.txt") == pipeline::slurp(kWork / "fullcm.txt"));
    REQUIRE(cli("apply --dict empty.dict --in fullcm.txt") == 0);
    CHECK(out_text() == pipeline::slurp(kWork / "none.txt"));
  }

  TEST_CASE("eval-pos writes metric lines") {
    REQUIRE(pipeline_result().empty());
    const std::string m = pipeline::slurp(kWork / "metrics_sel.txt");
    CHECK(m.find("accuracy\tall\t") != std::string::npos);
    CHECK(m.find("accuracy\thomographs\t") != std::string::npos);
    CHECK(m.find("accuracy\toov\t") != std::string::npos);
    CHECK(pipeline::slurp(kWork / "bootstrap.txt").find("p_value\t") != std::string::npos);
  }

  TEST_CASE("usage errors exit with 1") {
    fs::create_directories(kWork);
    CHECK(cli("") == 1);
    CHECK(cli("no-such-stage") == 1);
    CHECK(cli("apply --dict missing.dict --in missing.txt") == 1);
    write(kWork / "tiny.txt", "a b c\nb c a\n");
    CHECK(cli("--deterministic embed --in tiny.txt --out e.txt --min-count 1 --dim 4") == 1);
    CHECK(err_text().find("--seed") != std::string::npos);
    CHECK(cli("cluster --algo br --out x.tsv") == 1);
    CHECK(cli("eval-pos --train tiny.txt --test tiny.txt --scheme selective --seed 1") == 1);
  }

  TEST_CASE("data errors exit with 2") {
    fs::create_directories(kWork);
    write(kWork / "bad.dict", "no header\n");
    write(kWork / "c.txt", "ktb\n");
    CHECK(cli("apply --dict bad.dict --in c.txt") == 2);
    CHECK(err_text().find("error") != std::string::npos);
    write(kWork / "s.txt", "0.5\nnope\n");
    CHECK(cli("--seed 1 bootstrap --a s.txt --b s.txt") == 2);
    write(kWork / "one.txt", "x\n");
    CHECK(cli("--seed 1 cluster --algo km --embeddings one.txt --out k.tsv") == 2);
  }

  TEST_CASE("config files supply defaults and reject unknown keys") {
    fs::create_directories(kWork);
    write(kWork / "tiny.txt", "a b c\nb c a\na c b\n");
    write(kWork / "good.ini", "seed=5\ndeterministic=true\n");
    CHECK(cli("--config good.ini embed --in tiny.txt --out e.txt --min-count 1 --dim 4") == 0);
    CHECK(err_text().find("seed=5") != std::string::npos);
    write(kWork / "bad.ini", "seed=5\nbogus=1\n");
    CHECK(cli("--config bad.ini embed --in tiny.txt --out e.txt --min-count 1 --dim 4") == 1);
  }

  TEST_CASE("flags override config values") {
    fs::create_directories(kWork);
    write(kWork / "tiny.txt", "a b c\nb c a\na c b\n");
    write(kWork / "good.ini", "seed=5\n");
    CHECK(cli("--config good.ini --seed 9 embed --in tiny.txt --out e.txt --min-count 1 --dim 4") == 0);
    CHECK(err_text().find("seed=9") != std::string::npos);
  }

  TEST_CASE("stages leave their inputs untouched") {
    REQUIRE(pipeline_result().empty());
    const fs::path copy = kWork.parent_path() / "cli_inputs";
    fs::remove_all(copy);
    fs::create_directories(copy);
    for (const auto& f : fs::directory_iterator(kData)) fs::copy_file(f.path(), copy / f.path().filename());
    const fs::path rerun = kWork.parent_path() / "cli_rerun";
    CHECK(pipeline::run_all(kBin, copy, rerun).empty());
    for (const auto& f : fs::directory_iterator(kData)) {
      CHECK(pipeline::slurp(copy / f.path().filename()) == pipeline::slurp(f.path()));
    }
    // Intermediate files read by later stages are unchanged as well.
    const fs::path again = kWork.parent_path() / "cli_rerun2";
    CHECK(pipeline::run_all(kBin, copy, again).empty());
    CHECK(pipeline::slurp(again / "fullcm.txt") == pipeline::slurp(rerun / "fullcm.txt"));
  }

  TEST_CASE("thread count comes from the environment") {
    fs::create_directories(kWork);
    write(kWork / "tiny.txt", "a b c\nb c a\na c b\n");
    CHECK(cli("--seed 3 embed --in tiny.txt --out e.txt --min-count 1 --dim 4") == 0);
    const int rc = pipeline::run("cd '" + kWork.string() + "' && SELDIAC_THREADS=2 '" + kBin +
                                 "' --seed 3 embed --in tiny.txt --out e.txt --min-count 1 --dim 4 2> err.txt");
    CHECK(rc == 0);
    CHECK(err_text().find("threads=2") != std::string::npos);
  }

  TEST_CASE("a missing seed is chosen and reported") {
    fs::create_directories(kWork);
    write(kWork / "tiny.txt", "a b c\nb c a\na c b\n");
    CHECK(cli("embed --in tiny.txt --out e.txt --min-count 1 --dim 4") == 0);
    CHECK(err_text().find("using seed") != std::string::npos);
  }
}
