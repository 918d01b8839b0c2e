#include "scriptforge/naibbe.h"

#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "scriptforge/errors.h"
#include "scriptforge/random.h"

namespace scriptforge {
namespace {

constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyz";

const std::string& Pick(const std::vector<std::string>& pool, Rng& rng) {
  return pool[rng.UniformIndex(pool.size())];
}

// Draws distinct strings per letter from `make` until each letter has
// `per_letter` of them; `taken` is shared so no string serves two letters.
NaibbeTable FillTable(int per_letter, std::unordered_set<std::string>& taken,
                      Rng& rng, const std::function<std::string(Rng&)>& make) {
  NaibbeTable table;
  for (char letter : kLetters) {
    auto& alternatives = table[letter];
    while (static_cast<int>(alternatives.size()) < per_letter) {
      std::string glyphs = make(rng);
      if (taken.insert(glyphs).second) alternatives.push_back({glyphs, 1.0});
    }
  }
  return table;
}

std::string FormatAlternatives(const std::vector<NaibbeAlternative>& alternatives) {
  std::vector<std::string> items;
  for (const auto& a : alternatives) {
    items.push_back(a.glyphs + ":" + FormatNumber(a.weight));
  }
  return JoinList(items);
}

std::vector<NaibbeAlternative> ParseAlternatives(const ConfigFile& file,
                                                 const std::string& key) {
  std::vector<NaibbeAlternative> out;
  for (const auto& item : file.GetList(key)) {
    NaibbeAlternative a;
    const auto colon = item.find(':');
    a.glyphs = item.substr(0, colon);
    if (colon != std::string::npos) {
      ConfigFile weight = ConfigFile::Parse("w = " + item.substr(colon + 1), file.source());
      a.weight = weight.GetDouble("w", 0.0);
    }
    if (a.glyphs.empty() || !(a.weight > 0)) {
      throw Error(ErrorCode::kInvalidConfig,
                  file.source() + ": `" + key + "` has an empty glyph string or a non-positive weight");
    }
    out.push_back(std::move(a));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kInvalidConfig, file.source() + ": `" + key + "` is empty");
  }
  return out;
}

// Replaces table rows named in `file`; returns false for keys it does not own.
bool ApplyTableKey(const ConfigFile& file, const std::string& key, NaibbeConfig& config) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || key.size() != dot + 2) return false;
  const std::string kind = key.substr(0, dot);
  const char letter = key[dot + 1];
  if (kLetters.find(letter) == std::string_view::npos) return false;
  NaibbeTable* table = kind == "unigram"  ? &config.unigram_table
                       : kind == "prefix" ? &config.bigram_prefix_pool
                       : kind == "suffix" ? &config.bigram_suffix_pool
                                          : nullptr;
  if (table == nullptr) return false;
  (*table)[letter] = ParseAlternatives(file, key);
  return true;
}

void Validate(const NaibbeConfig& config) {
  if (!(config.bigram_prob >= 0 && config.bigram_prob <= 1)) {
    throw Error(ErrorCode::kInvalidConfig, "bigram_prob must lie in [0, 1]");
  }
  if (config.max_redraws < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_redraws must be at least 1");
  }
  std::set<std::string> prefixes;
  for (const auto& [letter, alternatives] : config.bigram_prefix_pool) {
    for (const auto& a : alternatives) prefixes.insert(a.glyphs);
  }
  for (const auto& [letter, alternatives] : config.bigram_suffix_pool) {
    for (const auto& a : alternatives) {
      if (prefixes.contains(a.glyphs)) {
        throw Error(ErrorCode::kInvalidConfig,
                    "`" + a.glyphs + "` is in both the prefix and the suffix pool");
      }
    }
  }
}

class Reader {
 public:
  Reader(const NaibbeConfig& config, const GraphemeInventory& inventory)
      : inventory_(inventory) {
    for (const auto& [letter, alternatives] : config.unigram_table) {
      for (const auto& a : alternatives) unigrams_.insert(a.glyphs);
    }
    for (const auto& [letter, alternatives] : config.bigram_prefix_pool) {
      for (const auto& a : alternatives) prefixes_.insert(a.glyphs);
    }
    for (const auto& [letter, alternatives] : config.bigram_suffix_pool) {
      for (const auto& a : alternatives) suffixes_.insert(a.glyphs);
    }
  }

  bool Ambiguous(const std::string& prefix, const std::string& suffix) const {
    const std::string word = prefix + suffix;
    if (unigrams_.contains(word)) return true;
    int splits = 0;
    for (std::size_t k = 1; k < word.size(); ++k) {
      if (prefixes_.contains(word.substr(0, k)) && suffixes_.contains(word.substr(k))) {
        ++splits;
      }
    }
    if (splits > 1) return true;
    try {
      auto joined = TokenizeEva(prefix, inventory_);
      const auto tail = TokenizeEva(suffix, inventory_);
      joined.insert(joined.end(), tail.begin(), tail.end());
      return TokenizeEva(word, inventory_) != joined;
    } catch (const TokenizationFailure&) {
      return true;
    }
  }

 private:
  const GraphemeInventory& inventory_;
  std::unordered_set<std::string> unigrams_;
  std::unordered_set<std::string> prefixes_;
  std::unordered_set<std::string> suffixes_;
};

struct LetterSampler {
  std::vector<const std::string*> glyphs;
  DiscreteSampler sampler;
};

std::unordered_map<char, LetterSampler> Samplers(const NaibbeTable& table) {
  std::unordered_map<char, LetterSampler> out;
  for (const auto& [letter, alternatives] : table) {
    LetterSampler s;
    std::vector<double> weights;
    for (const auto& a : alternatives) {
      s.glyphs.push_back(&a.glyphs);
      weights.push_back(a.weight);
    }
    s.sampler = DiscreteSampler(weights);
    out.emplace(letter, std::move(s));
  }
  return out;
}

const std::string& Draw(const std::unordered_map<char, LetterSampler>& samplers,
                        char letter, std::string_view table, Rng& rng) {
  auto it = samplers.find(letter);
  if (it == samplers.end() || it->second.glyphs.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string(table) + " table has no entry for `" + std::string(1, letter) + "`");
  }
  return *it->second.glyphs[it->second.sampler.Sample(rng)];
}

}  // namespace

NaibbeConfig DefaultNaibbeConfig() {
  const auto starts = LoadGraphemeList(DataPath("pools/prefix.txt"));
  const auto ends = LoadGraphemeList(DataPath("pools/suffix.txt"));
  const auto medials = LoadGraphemeList(DataPath("pools/medial.txt"));
  auto shared = LoadGraphemeList(DataPath("pools/shared.txt"));
  // Initial graphemes are start-class 55% of the time and final graphemes
  // end-class 60% of the time; the rest come from the shared pool.
  auto initial = [&](Rng& rng) {
    return rng.Bernoulli(0.55) ? Pick(starts, rng) : Pick(shared, rng);
  };
  auto final = [&](Rng& rng) {
    return rng.Bernoulli(0.6) ? Pick(ends, rng) : Pick(shared, rng);
  };
  Rng rng(0x4e41'4942'4245ULL);
  NaibbeConfig config;
  std::unordered_set<std::string> unigrams;
  config.unigram_table = FillTable(8, unigrams, rng, [&](Rng& r) {
    return initial(r) + Pick(medials, r) + final(r);
  });
  std::unordered_set<std::string> fragments;
  auto body = [&](Rng& r) {
    return r.Bernoulli(0.5) ? Pick(medials, r) : Pick(medials, r) + Pick(medials, r);
  };
  config.bigram_prefix_pool = FillTable(6, fragments, rng, [&](Rng& r) {
    return initial(r) + body(r);
  });
  config.bigram_suffix_pool = FillTable(6, fragments, rng, [&](Rng& r) {
    return body(r) + final(r);
  });
  return config;
}

NaibbeConfig NaibbeConfigFromFile(const ConfigFile& file,
                                  const std::filesystem::path& base_dir) {
  const std::set<std::string> known = {
      "generator", "table",          "bigram_prob",      "unambiguous",
      "max_redraws", "plaintext",    "plaintext_letters", "plaintext_seed"};
  NaibbeConfig config = DefaultNaibbeConfig();
  if (auto table = file.Find("table")) {
    std::filesystem::path path = *table;
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    const ConfigFile tables = ConfigFile::Load(path);
    for (const auto& [key, value] : tables.Entries()) {
      if (!ApplyTableKey(tables, key, config)) {
        throw Error(ErrorCode::kInvalidConfig,
                    tables.source() + ": `" + key + "` is not a table key");
      }
    }
  }
  for (const auto& [key, value] : file.Entries()) {
    if (known.contains(key)) continue;
    if (!ApplyTableKey(file, key, config)) {
      throw Error(ErrorCode::kInvalidConfig,
                  file.source() + ": `" + key + "` is not a recognized key");
    }
  }
  config.bigram_prob = file.GetDouble("bigram_prob", config.bigram_prob);
  config.unambiguous_mode = file.GetBool("unambiguous", config.unambiguous_mode);
  config.max_redraws = static_cast<int>(file.GetInt("max_redraws", config.max_redraws));
  Validate(config);
  return config;
}

std::map<std::string, std::string> DescribeNaibbeConfig(const NaibbeConfig& config) {
  std::map<std::string, std::string> out;
  out["generator"] = "naibbe";
  out["bigram_prob"] = FormatNumber(config.bigram_prob);
  out["unambiguous"] = config.unambiguous_mode ? "true" : "false";
  out["max_redraws"] = std::to_string(config.max_redraws);
  auto add = [&](const NaibbeTable& table, const std::string& kind) {
    for (const auto& [letter, alternatives] : table) {
      out[kind + "." + std::string(1, letter)] = FormatAlternatives(alternatives);
    }
  };
  add(config.unigram_table, "unigram");
  add(config.bigram_prefix_pool, "prefix");
  add(config.bigram_suffix_pool, "suffix");
  return out;
}

std::string PlaintextLetters(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (c < 0x80 && std::isalpha(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string SyntheticPlaintext(std::size_t n_letters, std::uint64_t seed) {
  const auto words = LoadGraphemeList(DataPath("naibbe/plaintext_words.txt"));
  if (words.empty()) throw Error(ErrorCode::kEmptyPlaintext, "plaintext word list is empty");
  const DiscreteSampler sampler(ZipfWeights(words.size(), 1.0));
  Rng rng(seed);
  std::string out;
  while (out.size() < n_letters) out += words[sampler.Sample(rng)];
  out.resize(n_letters);
  return out;
}

std::vector<std::string> RespacePlaintext(std::string_view letters,
                                          const NaibbeConfig& config,
                                          std::uint64_t seed) {
  if (letters.empty()) throw Error(ErrorCode::kEmptyPlaintext, "plaintext has no letters");
  Rng rng(seed);
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < letters.size()) {
    const std::size_t take =
        i + 1 < letters.size() && rng.Bernoulli(config.bigram_prob) ? 2 : 1;
    tokens.emplace_back(letters.substr(i, take));
    i += take;
  }
  return tokens;
}

bool IsAmbiguousBigram(const NaibbeConfig& config, const std::string& prefix,
                       const std::string& suffix,
                       const GraphemeInventory& inventory) {
  return Reader(config, inventory).Ambiguous(prefix, suffix);
}

GeneratedCorpus EncryptNaibbe(const std::vector<std::string>& tokens,
                              const NaibbeConfig& config, std::uint64_t seed,
                              const LengthModel& lengths,
                              const GraphemeInventory& inventory) {
  Validate(config);
  if (tokens.empty()) throw Error(ErrorCode::kEmptyPlaintext, "no tokens to encrypt");
  const auto unigrams = Samplers(config.unigram_table);
  const auto prefixes = Samplers(config.bigram_prefix_pool);
  const auto suffixes = Samplers(config.bigram_suffix_pool);
  const Reader reader(config, inventory);
  std::map<std::pair<const std::string*, const std::string*>, bool> ambiguous;

  Rng rng(DeriveSeed(seed, 0xca4d));
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (token.size() == 1) {
      words.push_back(Draw(unigrams, token[0], "unigram", rng));
      continue;
    }
    if (token.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "tokens hold one or two letters");
    }
    bool placed = false;
    for (int attempt = 0; attempt < config.max_redraws && !placed; ++attempt) {
      const std::string& p = Draw(prefixes, token[0], "prefix", rng);
      const std::string& s = Draw(suffixes, token[1], "suffix", rng);
      if (config.unambiguous_mode) {
        auto [it, fresh] = ambiguous.try_emplace({&p, &s}, false);
        if (fresh) it->second = reader.Ambiguous(p, s);
        if (it->second) continue;
      }
      words.push_back(p + s);
      placed = true;
    }
    if (!placed) {
      throw Error(ErrorCode::kNoUnambiguousAlternative,
                  "no unambiguous glyph string for bigram `" + token + "` after " +
                      std::to_string(config.max_redraws) + " draws");
    }
  }
  Rng cut(DeriveSeed(seed, 0x5e7));
  auto sentences = CutSentences(std::move(words), lengths, cut);
  return AssembleGenerated(sentences, inventory, "naibbe",
                           DescribeNaibbeConfig(config), seed);
}

}  // namespace scriptforge
