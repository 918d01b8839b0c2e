#ifndef SCRIPTFORGE_GENERATED_H_
#define SCRIPTFORGE_GENERATED_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scriptforge/corpus.h"

namespace scriptforge {

// A generator's output together with what produced it.
struct GeneratedCorpus {
  Corpus corpus;
  std::string generator;                      // slot | grille | naibbe
  std::map<std::string, std::string> config;  // effective configuration
  std::uint64_t seed = 0;
  std::size_t dropped_words = 0;  // words that failed re-tokenization
};

// Generated word strings are re-tokenized with the inventory so metrics see
// exactly what a reader of the written corpus would.
GeneratedCorpus AssembleGenerated(
    const std::vector<std::vector<std::string>>& sentences,
    const GraphemeInventory& inventory, std::string generator,
    std::map<std::string, std::string> config, std::uint64_t seed);

// Ordered grapheme list (rank order preserved), one per line, '#' comments.
std::vector<std::string> LoadGraphemeList(const std::filesystem::path& path);

// Provenance formatting shared by the generators: comma-joined lists and
// round-trippable numbers.
std::string JoinList(const std::vector<std::string>& items);
std::string FormatNumber(double value);

// The EVA inventory shipped under data/eva/sta1.txt.
const GraphemeInventory& DefaultEvaInventory();

}  // namespace scriptforge

#endif  // SCRIPTFORGE_GENERATED_H_
