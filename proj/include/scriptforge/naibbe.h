#ifndef SCRIPTFORGE_NAIBBE_H_
#define SCRIPTFORGE_NAIBBE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scriptforge/config_file.h"
#include "scriptforge/generated.h"
#include "scriptforge/length_model.h"

namespace scriptforge {

// One card in a lookup table: a glyph string and its draw weight.
struct NaibbeAlternative {
  std::string glyphs;
  double weight = 1.0;
};

// Plaintext letter -> alternatives.
using NaibbeTable = std::map<char, std::vector<NaibbeAlternative>>;

struct NaibbeConfig {
  NaibbeTable unigram_table;
  // Bigram tokens become prefix(first letter) + suffix(second letter). The
  // two pools share no glyph string.
  NaibbeTable bigram_prefix_pool;
  NaibbeTable bigram_suffix_pool;
  bool unambiguous_mode = true;
  // Probability that a position opens a two-letter token.
  double bigram_prob = 0.53;
  int max_redraws = 100;
};

// Tables built from data/pools with a fixed seed: every letter gets eight
// unigram words and six prefix and suffix fragments, all weighted equally.
NaibbeConfig DefaultNaibbeConfig();

// Table keys are `unigram.<letter>`, `prefix.<letter>` and
// `suffix.<letter>`, each a comma list of `glyphs` or `glyphs:weight`.
// `table = path` loads such keys from another file (relative to base_dir);
// keys in `file` override it. Also reads bigram_prob, unambiguous and
// max_redraws. Throws Error(kInvalidConfig) on overlapping pools or
// non-positive weights.
NaibbeConfig NaibbeConfigFromFile(const ConfigFile& file,
                                  const std::filesystem::path& base_dir = {});
std::map<std::string, std::string> DescribeNaibbeConfig(const NaibbeConfig& config);

// Lowercased ASCII letters of `text`; everything else is dropped.
std::string PlaintextLetters(std::string_view text);

// English-like letters: words from data/naibbe/plaintext_words.txt drawn
// with Zipf(1) weights until `n_letters` letters are produced.
std::string SyntheticPlaintext(std::size_t n_letters, std::uint64_t seed);

// Splits letters left to right into one- and two-letter tokens. Throws
// Error(kEmptyPlaintext).
std::vector<std::string> RespacePlaintext(std::string_view letters,
                                          const NaibbeConfig& config,
                                          std::uint64_t seed);

// True when prefix + suffix could be read back some other way: EVA
// tokenization merges across the join, the string is also a unigram word, or
// another prefix/suffix split produces it.
bool IsAmbiguousBigram(const NaibbeConfig& config, const std::string& prefix,
                       const std::string& suffix,
                       const GraphemeInventory& inventory);

// One output word per token. Throws Error(kInvalidConfig) for letters
// without table entries and Error(kNoUnambiguousAlternative) when
// max_redraws draws all produce ambiguous bigrams.
GeneratedCorpus EncryptNaibbe(const std::vector<std::string>& tokens,
                              const NaibbeConfig& config, std::uint64_t seed,
                              const LengthModel& lengths,
                              const GraphemeInventory& inventory);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_NAIBBE_H_
