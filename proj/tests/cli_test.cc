#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "scriptforge/report.h"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string err;
};

class Workspace {
 public:
  Workspace() : dir_(fs::temp_directory_path() / ("scriptforge_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  fs::path Path(const std::string& name) const { return dir_ / name; }

  void Write(const std::string& name, const std::string& text) const {
    std::ofstream(Path(name)) << text;
  }

  std::string Read(const std::string& name) const {
    std::ifstream in(Path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Outcome Run(const std::string& args) const {
    const auto err = Path("stderr.txt");
    const std::string cmd = std::string(SCRIPTFORGE_CLI) + " " + args + " > /dev/null 2> " +
                            err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, Read("stderr.txt")};
  }

 private:
  fs::path dir_;
};

const char* kCorpus =
    "qokeedy chedy daiin\n"
    "shol qokain chol dar\n"
    "otedy qokedy shedy\n"
    "daiin chol shol qoteedy\n"
    "okaiin chedy qokeey dal\n";

std::string Deterministic(const Workspace& w, const std::string& name) {
  return scriptforge::DeterministicSection(nlohmann::json::parse(w.Read(name)));
}

}  // namespace

TEST_CASE("analyze writes a report and is reproducible") {
  Workspace w;
  w.Write("c.txt", kCorpus);
  const std::string base = "analyze --corpus " + w.Path("c.txt").string() +
                           " --scheme eva --n 2-3 --bootstrap 100 --seed 7 --out ";
  REQUIRE(w.Run(base + w.Path("a.json").string()).code == 0);
  REQUIRE(w.Run(base + w.Path("b.json").string()).code == 0);
  CHECK(Deterministic(w, "a.json") == Deterministic(w, "b.json"));
  const auto doc = nlohmann::json::parse(w.Read("a.json"));
  CHECK(doc["command"] == "analyze");
  CHECK(doc["results"]["delta_char"].size() == 2);
  CHECK(doc["meta"].contains("written_at"));
  CHECK(fs::exists(w.Path("a.rank_frequency.csv")));
  CHECK(w.Read("c.txt") == kCorpus);
}

TEST_CASE("Seed falls back to the environment") {
  Workspace w;
  w.Write("c.txt", kCorpus);
  const std::string base = "analyze --corpus " + w.Path("c.txt").string() +
                           " --scheme eva --n 2 --bootstrap 100 --out ";
  REQUIRE(w.Run("--seed 5 " + base + w.Path("a.json").string()).code == 0);
  ::unsetenv("SCRIPTFORGE_SEED");
  REQUIRE(w.Run(base + w.Path("b.json").string()).code == 0);
  ::setenv("SCRIPTFORGE_SEED", "5", 1);
  REQUIRE(w.Run(base + w.Path("c.json").string()).code == 0);
  ::unsetenv("SCRIPTFORGE_SEED");
  CHECK(Deterministic(w, "a.json") == Deterministic(w, "c.json"));
  CHECK(nlohmann::json::parse(w.Read("b.json"))["config"]["seed"] == 0);
}

TEST_CASE("Exit codes") {
  Workspace w;
  w.Write("empty.txt", "\n\n");
  CHECK(w.Run("").code == 1);
  CHECK(w.Run("analyze").code == 1);
  CHECK(w.Run("frobnicate --out x").code == 1);
  w.Write("c.txt", kCorpus);
  for (const char* bad : {"2-x", "9"}) {
    CHECK(w.Run("analyze --corpus " + w.Path("c.txt").string() + " --scheme eva --n " + bad +
                " --out " + w.Path("o.json").string())
              .code == 1);
  }

  const auto empty = w.Run("analyze --corpus " + w.Path("empty.txt").string() + " --out " +
                           w.Path("o.json").string());
  CHECK(empty.code == 2);
  CHECK(empty.err.find("EmptyCorpus") != std::string::npos);

  CHECK(w.Run("analyze --corpus " + w.Path("missing.txt").string() + " --out " +
              w.Path("o.json").string())
            .code == 2);

  w.Write("bad.conf", "generator = slot\nnot_a_key = 1\n");
  const auto bad = w.Run("generate --config " + w.Path("bad.conf").string() + " --words 10 --out " +
                         w.Path("g.txt").string());
  CHECK(bad.code == 2);
  CHECK(bad.err.find("not_a_key") != std::string::npos);

  w.Write("slot.conf", "generator = slot\n");
  CHECK(w.Run("generate --config " + w.Path("slot.conf").string() + " --words 0 --out " +
              w.Path("g.txt").string())
            .code == 1);
}

TEST_CASE("generate is reproducible from its provenance") {
  Workspace w;
  w.Write("slot.conf", "generator = slot\n");
  const std::string base = "generate --config " + w.Path("slot.conf").string() +
                           " --words 2000 --seed 3 --out ";
  REQUIRE(w.Run(base + w.Path("a.txt").string()).code == 0);
  REQUIRE(w.Run(base + w.Path("b.txt").string()).code == 0);
  CHECK(w.Read("a.txt") == w.Read("b.txt"));

  const auto prov = nlohmann::json::parse(w.Read("a.txt.provenance.json"));
  CHECK(prov["results"]["words"] == 2000);
  REQUIRE(w.Run("generate --config " + w.Path("a.txt.provenance.json").string() +
                " --words 2000 --seed 3 --out " + w.Path("c.txt").string())
              .code == 0);
  CHECK(w.Read("c.txt") == w.Read("a.txt"));
}

TEST_CASE("simulate, evaluate and sweep") {
  Workspace w;
  w.Write("c.txt", kCorpus);
  REQUIRE(w.Run("simulate --corpus " + w.Path("c.txt").string() +
                " --scheme eva --k 1 --runs 2 --seed 1 --out " + w.Path("s.json").string())
              .code == 0);
  CHECK(nlohmann::json::parse(w.Read("s.json"))["results"]["runs"].size() == 2);
  CHECK(w.Run("simulate --corpus " + w.Path("c.txt").string() + " --k 3 --out " +
              w.Path("s.json").string())
            .code == 1);

  REQUIRE(w.Run("evaluate --corpus " + w.Path("c.txt").string() + " --scheme eva --out " +
                w.Path("e.json").string())
              .code == 0);
  CHECK(nlohmann::json::parse(w.Read("e.json"))["results"].contains("joint_score"));

  w.Write("grille.conf", "generator = grille\n");
  REQUIRE(w.Run("evaluate --config " + w.Path("grille.conf").string() +
                " --runs 2 --words 2000 --bootstrap 100 --out " + w.Path("b.json").string())
              .code == 0);
  CHECK(fs::exists(w.Path("b.matrix.csv")));

  REQUIRE(w.Run("sweep --config " + w.Path("grille.conf").string() +
                " --param column_skew_alpha --values 0,2 --runs 2 --words 2000 --bootstrap 100 "
                "--out " +
                w.Path("sw.json").string())
              .code == 0);
  const auto csv = w.Read("sw.sweep.csv");
  CHECK(csv.rfind("column_skew_alpha,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
