#ifndef SCRIPTFORGE_GRILLE_H_
#define SCRIPTFORGE_GRILLE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scriptforge/config_file.h"
#include "scriptforge/corpus.h"
#include "scriptforge/generated.h"
#include "scriptforge/length_model.h"

namespace scriptforge {

enum class GrilleMode { kRandom, kShift, kRotate, kSequential };
enum class GrilleSpecialization {
  kSplit,          // prefix pool on the left half, suffix pool on the right
  kUniform,        // one pool for every column
  kBlankGradient,  // uniform pool, blank probability rising across columns
  kLearned,        // column marginals estimated from a source corpus
  kSourceRows,     // each row is one source word laid out left to right
};

std::string_view GrilleModeName(GrilleMode mode);
GrilleMode ParseGrilleMode(std::string_view name);
std::string_view GrilleSpecializationName(GrilleSpecialization s);
GrilleSpecialization ParseGrilleSpecialization(std::string_view name);

struct GrilleConfig {
  int rows = 60;
  int cols = 10;
  int n_holes = 10;
  // Explicit hole columns; empty means n_holes spread evenly from column 0.
  std::vector<int> holes;
  double blank_prob = 0.5;
  double blank_prob_low = 0.1;   // blank_gradient, first column
  double blank_prob_high = 0.6;  // blank_gradient, last column
  double column_skew_alpha = 0.0;
  GrilleMode mode = GrilleMode::kRandom;
  GrilleSpecialization specialization = GrilleSpecialization::kSplit;
  double jump_prob = 0.0;
  // Graphemes from the head of shared_pool placed at the top ranks of both
  // split pools.
  int n_shared = 2;
  std::vector<std::string> prefix_pool;
  std::vector<std::string> suffix_pool;
  std::vector<std::string> shared_pool;
  std::vector<std::string> uniform_pool;
  // Source for learned and source_rows tables.
  std::shared_ptr<const Corpus> source;
  std::string source_label;  // provenance only
};

GrilleConfig DefaultGrilleConfig();
// Keys mirror GrilleConfig; `source` is a corpus path (resolved against
// `base_dir`), or `random` for a uniform random-grapheme source of
// `source_words` words.
GrilleConfig GrilleConfigFromFile(const ConfigFile& file,
                                  const std::filesystem::path& base_dir = {});
std::map<std::string, std::string> DescribeGrilleConfig(const GrilleConfig& config);

// Words of uniformly random graphemes with lengths uniform in [2, 8].
Corpus RandomSourceCorpus(const std::vector<std::string>& pool,
                          std::size_t n_words, std::uint64_t seed);

// Cells hold graphemes; an empty string is a blank.
struct GrilleTable {
  int rows = 0;
  int cols = 0;
  std::vector<std::string> cells;  // row-major

  const std::string& At(int row, int col) const {
    return cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                 static_cast<std::size_t>(col)];
  }
};

// Throws Error(kMissingSource) for learned or source_rows tables without a
// source, Error(kInvalidConfig) for inconsistent dimensions.
GrilleTable BuildGrilleTable(const GrilleConfig& config, std::uint64_t seed);

// Hole columns after applying the even-spread default.
std::vector<int> GrilleHoles(const GrilleConfig& config);

GeneratedCorpus GenerateGrilleCorpus(const GrilleConfig& config,
                                     std::size_t n_words, std::uint64_t seed,
                                     const LengthModel& lengths,
                                     const GraphemeInventory& inventory);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_GRILLE_H_
