#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "pathrules/cli/commands.hpp"
#include "pathrules/cli/experiment.hpp"
#include "pathrules/dataset.hpp"
#include "pathrules/fsa_io.hpp"
#include "pathrules/regex.hpp"
#include "pathrules/targets.hpp"

using namespace pathrules;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int status;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("pathrules-test-" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  CHECK(invoke({}).status == 2);
  CHECK(invoke({"frobnicate"}).status == 2);
  CHECK(invoke({"gen"}).status == 2);
  CHECK(invoke({"gen", "--count", "abc", "--out", "x"}).status == 2);
  CHECK(invoke({"train", "--train", "/nonexistent/file"}).status == 2);
  TempDir dir("usage");
  CHECK(invoke({"gen", "--count", "0", "--out", dir.path.string()}).status == 2);
  CHECK(invoke({"--help"}).status == 0);
}

TEST_CASE("gen is reproducible") {
  TempDir a("gen-a");
  TempDir b("gen-b");
  const std::vector<std::string> common{"--count", "100", "--test-count", "300", "--seed", "4"};
  auto args_a = common;
  args_a.insert(args_a.begin(), "gen");
  args_a.insert(args_a.end(), {"--out", a.path.string()});
  auto args_b = common;
  args_b.insert(args_b.begin(), "gen");
  args_b.insert(args_b.end(), {"--out", b.path.string()});
  REQUIRE(invoke(args_a).status == 0);
  REQUIRE(invoke(args_b).status == 0);
  CHECK(read_text_file(a / "train.txt") == read_text_file(b / "train.txt"));
  CHECK(read_text_file(a / "test.txt") == read_text_file(b / "test.txt"));
  CHECK(read_text_file(a / "gen.meta") == read_text_file(b / "gen.meta"));
  const Dataset train = load_dataset(a / "train.txt");
  const Dataset test = load_dataset(a / "test.txt");
  CHECK(train.size() == 100);
  CHECK(train.positives() == 50);
  CHECK(test.size() == 300);
  const auto words = train.words();
  for (const auto& e : test.examples) CHECK(words.count(e.word) == 0);
}

TEST_CASE("gen, train, extract and compare end to end") {
  TempDir dir("pipeline");
  REQUIRE(invoke({"gen", "--count", "200", "--test-count", "200", "--out", dir.path.string()}).status == 0);
  const auto trained = invoke({"train", "--train", dir / "train.txt", "--test", dir / "test.txt", "--epochs", "50",
                               "--out", dir / "model.txt", "--loss-csv", dir / "loss.csv"});
  REQUIRE(trained.status == 0);
  CHECK(fs::exists(dir / "model.txt"));
  CHECK(line_count(read_text_file(dir / "loss.csv")) == 51);
  const auto extracted = invoke({"extract", "--model", dir / "model.txt", "--data", dir / "train.txt", "--forced",
                                 "--out", dir / "machine.fsa"});
  CHECK(extracted.status == 0);
  CHECK(fs::exists(dir / "machine.fsa"));
  CHECK(fs::exists(dir / "machine.dot"));
  CHECK(fs::exists(dir / "machine.meta"));
  const auto compared = invoke({"compare", dir / "machine.fsa", "--samples", "200", "--csv", dir / "cmp.csv"});
  CHECK(compared.status == 0);
  CHECK(compared.out.find("Delta") != std::string::npos);
  CHECK(read_text_file(dir / "cmp.csv").rfind("a,b," + report_csv_header(), 0) == 0);
}

TEST_CASE("compare reports zero against the target itself") {
  TempDir dir("compare");
  save_fsa(dir.path / "target.fsa", security_target());
  const auto r = invoke({"compare", dir / "target.fsa", "--samples", "300", "--csv", dir / "row.csv"});
  CHECK(r.status == 0);
  const std::string csv = read_text_file(dir / "row.csv");
  CHECK(csv.find(",target,0.000000,0.000000,0.000000,") != std::string::npos);
}

TEST_CASE("select picks the machine the others agree on") {
  TempDir dir("select");
  save_fsa(dir.path / "a.fsa", regex_to_fsa("t*", Alphabet("tps")));
  save_fsa(dir.path / "b.fsa", security_target());
  save_fsa(dir.path / "c.fsa", security_target());
  const auto r = invoke({"select", dir / "a.fsa", dir / "b.fsa", dir / "c.fsa", "--samples", "300", "--matrix-csv",
                         dir / "matrix.csv"});
  CHECK(r.status == 0);
  CHECK(r.out.find("selected: 1 ") != std::string::npos);
  CHECK(fs::exists(dir / "matrix.csv"));
  CHECK(invoke({"select", dir / "a.fsa"}).status == 2);
}

TEST_CASE("trace and markov subcommands") {
  TempDir dir("trace");
  const std::string asm_file = std::string(PATHRULES_DATA_DIR) + "/asm/insecure.asm";
  const auto r = invoke({"trace", "--asm", asm_file, "--k", "2", "--keep-all", "--out", dir / "traced.txt"});
  REQUIRE(r.status == 0);
  const Dataset d = load_dataset(dir / "traced.txt");
  CHECK(d.size() == 2);
  const auto m = invoke({"markov", "--data", dir / "traced.txt"});
  CHECK(m.status == 0);
  CHECK(m.out.find("state 0:") != std::string::npos);
}

TEST_CASE("experiment spec parsing") {
  const auto spec = cli::parse_spec(
      "# grid\ncells: gru, lstm\nhidden: 4,8\ncheckpoints: 10, 20\ndropout: 0, 0.01\nseeds: 1,2,3\n"
      "train: 400, 1000\ntest: 500\n");
  CHECK(spec.cells.size() == 2);
  CHECK(spec.hidden_sizes == std::vector<std::size_t>{4, 8});
  CHECK(spec.checkpoints == std::vector<std::size_t>{10, 20});
  CHECK(spec.train_sizes == std::vector<std::size_t>{400, 1000});
  CHECK(cli::expand(spec).size() == 3 * 2 * 2 * 2 * 2);
  CHECK(cli::expand(spec).front().name() == "gru-n4-d0.00-t400-s1");
  const auto back = cli::parse_spec(cli::write_spec(spec));
  CHECK(cli::write_spec(back) == cli::write_spec(spec));
  CHECK_THROWS_AS(cli::parse_spec("colour: blue\n"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_spec("cells:\n").validate(), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_spec("dropout: 0.5\n").validate(), cli::UsageError);
}

TEST_CASE("grid writes one summary row per cell and checkpoint") {
  TempDir dir("grid");
  const auto r = invoke({"grid", "--cells", "gru,lstm", "--hidden", "2", "--checkpoints", "5,10", "--train", "40",
                         "--test", "60", "--seeds", "1", "--delta-samples", "50", "--max-iterations", "20",
                         "--quiet", "--jobs", "2", "--output", dir.path.string()});
  CHECK(r.status == 0);
  const std::string summary = read_text_file(dir / "summary.csv");
  CHECK(summary.rfind(std::string(cli::summary_columns()), 0) == 0);
  CHECK(line_count(summary) == 1 + 2 * 2);
  CHECK(fs::exists(dir / "comparison.csv"));
  CHECK(fs::exists(dir / "spec.txt"));
  CHECK(fs::exists(dir.path / "cells" / "gru-n2-d0.00-t40-s1" / "ep10" / "machine.fsa"));
  CHECK(fs::exists(dir.path / "cells" / "lstm-n2-d0.00-t40-s1" / "ep5" / "model.txt"));
}
