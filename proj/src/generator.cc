#include "scriptforge/generator.h"

#include <fstream>
#include <memory>
#include <sstream>

#include "scriptforge/errors.h"
#include "scriptforge/grille.h"
#include "scriptforge/length_model.h"
#include "scriptforge/naibbe.h"
#include "scriptforge/random.h"
#include "scriptforge/slot_generator.h"

namespace scriptforge {
namespace {

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open plaintext " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

GeneratorSpec NaibbeSpec(const ConfigFile& file, const std::filesystem::path& base_dir) {
  auto config = std::make_shared<const NaibbeConfig>(NaibbeConfigFromFile(file, base_dir));
  const std::string source = file.GetString("plaintext", "synthetic");
  GeneratorSpec spec;
  spec.kind = "naibbe";
  spec.config = DescribeNaibbeConfig(*config);
  spec.config["plaintext"] = source;
  std::string letters;
  if (source == "synthetic") {
    const auto n = file.GetInt("plaintext_letters", 200000);
    const auto seed = file.GetInt("plaintext_seed", 1);
    if (n < 1 || seed < 0) {
      throw Error(ErrorCode::kInvalidConfig,
                  file.source() + ": plaintext_letters must be positive and plaintext_seed non-negative");
    }
    letters = SyntheticPlaintext(static_cast<std::size_t>(n), static_cast<std::uint64_t>(seed));
    spec.config["plaintext_letters"] = std::to_string(n);
    spec.config["plaintext_seed"] = std::to_string(seed);
  } else {
    std::filesystem::path path = source;
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    letters = PlaintextLetters(ReadText(path));
    spec.config["plaintext"] = std::filesystem::absolute(path).string();
  }
  auto text = std::make_shared<const std::string>(std::move(letters));
  spec.generate = [config, text](std::size_t n_words, std::uint64_t seed) {
    auto tokens = RespacePlaintext(*text, *config, DeriveSeed(seed, 0x7e5));
    if (tokens.size() < n_words) {
      throw Error(ErrorCode::kInvalidConfig,
                  "plaintext yields " + std::to_string(tokens.size()) +
                      " tokens, fewer than the " + std::to_string(n_words) + " words requested");
    }
    tokens.resize(n_words);
    return EncryptNaibbe(tokens, *config, seed, LengthModel::Default(), DefaultEvaInventory());
  };
  return spec;
}

}  // namespace

GeneratorSpec LoadGenerator(const ConfigFile& file, const std::filesystem::path& base_dir) {
  const std::string kind = file.GetString("generator", "");
  if (kind == "slot") {
    auto config = std::make_shared<const SlotConfig>(SlotConfigFromFile(file));
    GeneratorSpec spec{kind, DescribeSlotConfig(*config), {}};
    spec.generate = [config](std::size_t n_words, std::uint64_t seed) {
      return GenerateSlotCorpus(*config, n_words, seed, LengthModel::Default(),
                                DefaultEvaInventory());
    };
    return spec;
  }
  if (kind == "grille") {
    auto config = std::make_shared<const GrilleConfig>(GrilleConfigFromFile(file, base_dir));
    GeneratorSpec spec{kind, DescribeGrilleConfig(*config), {}};
    for (const char* key : {"source_scheme", "source_words", "source_seed"}) {
      if (auto value = file.Find(key)) spec.config[key] = *value;
    }
    if (auto source = file.Find("source"); source && *source != "random") {
      std::filesystem::path path = *source;
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      spec.config["source"] = std::filesystem::absolute(path).string();
    }
    spec.generate = [config](std::size_t n_words, std::uint64_t seed) {
      return GenerateGrilleCorpus(*config, n_words, seed, LengthModel::Default(),
                                  DefaultEvaInventory());
    };
    return spec;
  }
  if (kind == "naibbe") return NaibbeSpec(file, base_dir);
  throw Error(ErrorCode::kInvalidConfig,
              file.source() + ": `generator` must be slot, grille or naibbe");
}

}  // namespace scriptforge
