// scriptforge: command-line front end.
//
//   scriptforge analyze  --corpus FILE [--scheme eva|chars] [--n 2-4] --out R.json
//   scriptforge simulate --corpus FILE [--k 1] [--runs 10] --out R.json
//   scriptforge generate --config G.conf --words N --out CORPUS.txt
//   scriptforge evaluate (--config G.conf | --corpus FILE) --out R.json
//   scriptforge sweep    --config G.conf --param KEY --values a,b,c --out R.json
//
// Exit status: 0 success, 1 usage, 2 data or configuration error, 3 internal.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scriptforge/config_file.h"
#include "scriptforge/corpus.h"
#include "scriptforge/errors.h"
#include "scriptforge/evaluate.h"
#include "scriptforge/generated.h"
#include "scriptforge/generator.h"
#include "scriptforge/markov.h"
#include "scriptforge/parallel.h"
#include "scriptforge/report.h"

namespace sf = scriptforge;
namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;
constexpr int kInternal = 3;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus;
  std::string scheme = "chars";
  std::string inventory;
  std::string orders = "2-4";
  int bootstrap = 1000;
  std::optional<std::uint64_t> seed;
  int runs = 0;
  std::size_t words = 37000;
  std::string config;
  std::string out;
  unsigned jobs = 0;
  std::string thresholds;
  std::string reference;
  int k = 1;
  std::string param;
  std::string values;
};

std::uint64_t Seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("SCRIPTFORGE_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (*end != '\0') throw UsageError("SCRIPTFORGE_SEED is not an unsigned integer");
    return value;
  }
  return 0;
}

std::vector<int> ParseOrders(const std::string& text) {
  std::vector<int> out;
  try {
    if (auto dash = text.find('-'); dash != std::string::npos) {
      const int lo = std::stoi(text.substr(0, dash));
      const int hi = std::stoi(text.substr(dash + 1));
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      std::stringstream in(text);
      std::string item;
      while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
    }
  } catch (const std::logic_error&) {
    throw UsageError("--n expects N, N-M or a comma list, got " + text);
  }
  if (out.empty()) throw UsageError("--n selects no orders");
  for (int n : out) {
    if (n < 2 || n > sf::kMaxNGramOrder) throw UsageError("--n orders must lie in 2..5");
  }
  return out;
}

sf::Corpus ReadCorpus(const Options& o, std::size_t* dropped) {
  sf::LoadOptions load;
  std::optional<sf::GraphemeInventory> inventory;
  if (o.scheme == "eva") {
    load.scheme = sf::Tokenization::kEvaLongestMatch;
    if (!o.inventory.empty()) {
      inventory = sf::GraphemeInventory::Load(o.inventory);
      load.inventory = &*inventory;
    } else {
      load.inventory = &sf::DefaultEvaInventory();
    }
  }
  auto result = sf::LoadCorpus(o.corpus, load);
  if (result.dropped_words > 0) {
    std::cerr << "note: dropped " << result.dropped_words << " untokenizable words\n";
  }
  *dropped = result.dropped_words;
  return std::move(result.corpus);
}

sf::Json CorpusFlags(const Options& o) {
  return {{"corpus", o.corpus}, {"scheme", o.scheme}, {"inventory", o.inventory}};
}

sf::SignatureThresholds Thresholds(const Options& o) {
  if (o.thresholds.empty()) return {};
  return sf::ThresholdsFromFile(sf::ConfigFile::Load(o.thresholds));
}

sf::Json ThresholdsJson(const sf::SignatureThresholds& t) {
  return {{"sig1_low", t.sig1_low},       {"sig1_high", t.sig1_high},
          {"sig2_run_fraction", t.sig2_run_fraction},
          {"sig3_min_mi", t.sig3_min_mi}, {"sig4_r2", t.sig4.min_r_squared},
          {"sig4_cv", t.sig4.min_cv}};
}

// Generator configs are key-value files, or any JSON output of this tool
// whose "config" carries the effective generator configuration.
sf::ConfigFile LoadConfig(const std::string& path) {
  if (fs::path(path).extension() != ".json") return sf::ConfigFile::Load(path);
  std::ifstream in(path);
  if (!in) throw sf::Error(sf::ErrorCode::kIoFailure, "cannot open config " + path);
  sf::Json doc;
  try {
    doc = sf::Json::parse(in);
  } catch (const sf::Json::exception& e) {
    throw sf::Error(sf::ErrorCode::kInvalidConfig, path + ": " + e.what());
  }
  const sf::Json* generator = &doc;
  if (doc.contains("config")) generator = &doc["config"];
  if (generator->contains("generator") && (*generator)["generator"].is_object()) {
    generator = &(*generator)["generator"];
  }
  sf::ConfigFile file = sf::ConfigFile::Parse("", path);
  for (const auto& [key, value] : generator->items()) {
    if (!value.is_string()) {
      throw sf::Error(sf::ErrorCode::kInvalidConfig, path + ": `" + key + "` is not a string");
    }
    file.Set(key, value.get<std::string>());
  }
  return file;
}

sf::GeneratorSpec Generator(const Options& o, const sf::ConfigFile& file) {
  return sf::LoadGenerator(file, fs::path(o.config).parent_path());
}

fs::path Sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return p.string() + suffix;
}

void Analyze(const Options& o) {
  std::size_t dropped = 0;
  const sf::Corpus corpus = ReadCorpus(o, &dropped);
  sf::AnalyzeOptions a;
  a.orders = ParseOrders(o.orders);
  a.bootstrap = o.bootstrap;
  a.seed = Seed(o);
  sf::Json results = sf::AnalyzeCorpus(corpus, a);
  results["corpus"]["dropped_words"] = dropped;
  sf::Json config = CorpusFlags(o);
  config["n"] = a.orders;
  config["bootstrap"] = a.bootstrap;
  config["seed"] = a.seed;
  sf::WriteText(Sibling(o.out, ".rank_frequency.csv"),
                sf::RankFrequencyCsv(sf::BoundaryDistributionOf(corpus)));
  sf::WriteDocument(o.out, sf::MakeDocument("analyze", std::move(config), std::move(results)));
}

void Simulate(const Options& o) {
  std::size_t dropped = 0;
  const sf::Corpus corpus = ReadCorpus(o, &dropped);
  const int runs = o.runs > 0 ? o.runs : 10;
  const auto seed = Seed(o);
  const auto report = sf::DissociationExperiment(corpus, o.k, runs, seed);
  sf::Json config = CorpusFlags(o);
  config["k"] = o.k;
  config["runs"] = runs;
  config["seed"] = seed;
  sf::WriteDocument(o.out, sf::MakeDocument("simulate", std::move(config), sf::ToJson(report)));
}

void Generate(const Options& o) {
  if (o.words == 0) throw UsageError("--words must be positive");
  const auto file = LoadConfig(o.config);
  const auto spec = Generator(o, file);
  const auto seed = Seed(o);
  const auto generated = spec.generate(o.words, seed);
  sf::WriteText(o.out, sf::FormatCorpus(generated.corpus));
  sf::Json config = {{"generator", spec.config}, {"words", o.words}, {"seed", seed}};
  sf::Json results = {{"sentences", generated.corpus.sentences.size()},
                      {"words", generated.corpus.WordCount()},
                      {"dropped_words", generated.dropped_words}};
  sf::WriteDocument(o.out + ".provenance.json",
                    sf::MakeDocument("generate", std::move(config), std::move(results)));
}

sf::BatteryOptions Battery(const Options& o) {
  sf::BatteryOptions b;
  b.n_runs = o.runs > 0 ? o.runs : 20;
  b.words_per_run = o.words;
  b.seed = Seed(o);
  b.bootstrap_replicates = o.bootstrap;
  return b;
}

sf::Json BatteryConfig(const Options& o, const sf::BatteryOptions& b,
                       const sf::SignatureThresholds& t) {
  return {{"runs", b.n_runs},          {"words", b.words_per_run},
          {"seed", b.seed},            {"bootstrap", b.bootstrap_replicates},
          {"reference", o.reference},  {"thresholds", ThresholdsJson(t)}};
}

void Evaluate(const Options& o) {
  if (o.config.empty() == o.corpus.empty()) {
    throw UsageError("evaluate needs exactly one of --config and --corpus");
  }
  const auto thresholds = Thresholds(o);
  if (!o.corpus.empty()) {
    std::size_t dropped = 0;
    const sf::Corpus corpus = ReadCorpus(o, &dropped);
    sf::Json config = CorpusFlags(o);
    config["thresholds"] = ThresholdsJson(thresholds);
    sf::WriteDocument(o.out, sf::MakeDocument("evaluate", std::move(config),
                                              sf::ToJson(sf::EvaluateCorpus(corpus, thresholds))));
    return;
  }
  const auto file = LoadConfig(o.config);
  const auto spec = Generator(o, file);
  const auto options = Battery(o);
  const auto reference = o.reference.empty() ? sf::ReferenceValues{} : sf::LoadReference(o.reference);
  auto generate = spec.generate;
  const auto battery = sf::RunBattery(
      spec.kind, [generate](std::size_t n, std::uint64_t s) { return generate(n, s).corpus; },
      options, thresholds, reference);
  sf::Json config = BatteryConfig(o, options, thresholds);
  config["generator"] = spec.config;
  sf::WriteText(Sibling(o.out, ".matrix.csv"), sf::InterpretationMatrixCsv({battery}));
  sf::WriteDocument(o.out, sf::MakeDocument("evaluate", std::move(config), sf::ToJson(battery)));
}

void Sweep(const Options& o) {
  const auto base = LoadConfig(o.config);
  std::vector<std::string> values;
  {
    sf::ConfigFile holder;
    holder.Set("v", o.values);
    values = holder.GetList("v");
  }
  if (values.empty()) throw UsageError("--values lists no grid points");
  std::vector<sf::SweepPoint> grid;
  sf::Json points = sf::Json::array();
  for (const auto& value : values) {
    sf::ConfigFile file = base;
    file.Set(o.param, value);
    const auto spec = Generator(o, file);
    auto generate = spec.generate;
    grid.push_back({o.param + "=" + value,
                    [generate](std::size_t n, std::uint64_t s) { return generate(n, s).corpus; }});
    points.push_back(spec.config);
  }
  const auto thresholds = Thresholds(o);
  const auto options = Battery(o);
  const auto reference = o.reference.empty() ? sf::ReferenceValues{} : sf::LoadReference(o.reference);
  const auto results = sf::Sweep(grid, options, thresholds, reference);
  sf::Json config = BatteryConfig(o, options, thresholds);
  config["param"] = o.param;
  config["values"] = values;
  config["points"] = std::move(points);
  sf::Json batteries = sf::Json::array();
  for (const auto& b : results) batteries.push_back(sf::ToJson(b));
  sf::WriteText(Sibling(o.out, ".matrix.csv"), sf::InterpretationMatrixCsv(results));
  sf::WriteText(Sibling(o.out, ".sweep.csv"), sf::SweepCsv(o.param, values, results));
  sf::WriteDocument(o.out, sf::MakeDocument("sweep", std::move(config), std::move(batteries)));
}

void AddCorpusFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--corpus", o.corpus, "Corpus file, one sentence per line");
  cmd->add_option("--scheme", o.scheme, "Tokenization scheme")
      ->check(CLI::IsMember({"eva", "chars"}));
  cmd->add_option("--inventory", o.inventory, "EVA grapheme inventory (default: bundled)");
}

void AddBatteryFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Generator config file")->required();
  cmd->add_option("--runs", o.runs, "Runs per battery (default 20)");
  cmd->add_option("--words", o.words, "Words per run");
  cmd->add_option("--bootstrap", o.bootstrap, "Bootstrap replicates");
  cmd->add_option("--thresholds", o.thresholds, "Signature thresholds file");
  cmd->add_option("--reference", o.reference, "Reference signatures (JSON) for Cohen's d");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional and positional structure in tokenized text"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Master seed (default: SCRIPTFORGE_SEED or 0)");
  app.add_option("--jobs", o.jobs, "Worker threads (default: all cores)");

  auto* analyze = app.add_subcommand("analyze", "Directional and positional analysis of a corpus");
  AddCorpusFlags(analyze, o);
  analyze->get_option("--corpus")->required();
  analyze->add_option("--n", o.orders, "Character n-gram orders: N, N-M or a list");
  analyze->add_option("--bootstrap", o.bootstrap, "Bootstrap replicates")->check(CLI::Range(100, 1000000));

  auto* simulate = app.add_subcommand("simulate", "Word-level Markov dissociation experiment");
  AddCorpusFlags(simulate, o);
  simulate->get_option("--corpus")->required();
  simulate->add_option("--k", o.k, "Chain order")->check(CLI::IsMember({1, 2}));
  simulate->add_option("--runs", o.runs, "Synthetic corpora (default 10)");

  auto* generate = app.add_subcommand("generate", "Write one generated corpus");
  generate->add_option("--config", o.config, "Generator config file")->required();
  generate->add_option("--words", o.words, "Words to generate");

  auto* evaluate = app.add_subcommand("evaluate", "Four-signature evaluation");
  AddCorpusFlags(evaluate, o);
  AddBatteryFlags(evaluate, o);
  evaluate->get_option("--config")->required(false);

  auto* sweep = app.add_subcommand("sweep", "Batteries over a grid of one config key");
  AddBatteryFlags(sweep, o);
  sweep->add_option("--param", o.param, "Config key to vary")->required();
  sweep->add_option("--values", o.values, "Comma-separated values")->required();

  for (auto* cmd : {analyze, simulate, generate, evaluate, sweep}) {
    cmd->add_option("--out", o.out, "Output file")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    sf::SetMaxJobs(o.jobs);
    if (*analyze) Analyze(o);
    if (*simulate) Simulate(o);
    if (*generate) Generate(o);
    if (*evaluate) Evaluate(o);
    if (*sweep) Sweep(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const sf::Error& e) {
    std::cerr << "error [" << sf::ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return 0;
}
