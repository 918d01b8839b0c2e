#ifndef SCRIPTFORGE_SLOT_GENERATOR_H_
#define SCRIPTFORGE_SLOT_GENERATOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scriptforge/config_file.h"
#include "scriptforge/generated.h"
#include "scriptforge/length_model.h"

namespace scriptforge {

enum class SlotAblation {
  kBaseline,
  kNoBridge,
  kWideBridge,
  kRandomOrder,
  kSinglePool,
  kOverlappingPool,
  kNoBoundaryPairs,
  kDenseMarkov,
  kUniformZipf,
  kNearMiss,
  kAgglutinativeMimic,
  kTemplaticMimic,
};

std::string_view SlotAblationName(SlotAblation ablation);
SlotAblation ParseSlotAblation(std::string_view name);
std::vector<SlotAblation> AllSlotAblations();

struct SlotConfig {
  // prefix_slots.front() supplies word-initial graphemes and
  // suffix_slots.back() word-final ones; the rest are word-internal.
  std::vector<std::vector<std::string>> prefix_slots;
  std::vector<std::vector<std::string>> suffix_slots;
  // Candidates for the bridge zone, shared by both terminal slots.
  std::vector<std::string> bridge_pool;
  int bridge_zone = 2;
  // 1-based rank at which bridge graphemes enter the terminal pools.
  int bridge_rank = 2;
  // Rank-frequency exponent for grapheme choice inside every slot.
  double zipf_alpha = 1.2;
  // Standard deviation of a log-normal factor applied to each slot
  // grapheme's Zipf weight; breaks the exact power law of the slot pools.
  double slot_weight_jitter = 0.0;
  // Exponent of the lexicon's word weights (rank = draw order).
  double word_zipf_alpha = 1.5;
  int vocab_size = 1000;
  int markov_top_k = 60;
  double boundary_pair_strength = 8.0;
  int preferred_pairs = 20;
  // Fraction of each terminal pool copied into the opposite terminal pool.
  double pool_overlap = 0.0;
  SlotAblation ablation = SlotAblation::kBaseline;
};

// Pools from data/pools with the baseline parameters.
SlotConfig DefaultSlotConfig();
// Applies the named ablation's structural changes to `base`.
SlotConfig WithAblation(SlotConfig base, SlotAblation ablation);
// Overrides defaults from a key-value file (keys as in SlotConfig, plus
// `ablation` and comma-separated `prefix_slot_N` / `suffix_slot_N` pools).
SlotConfig SlotConfigFromFile(const ConfigFile& file);
std::map<std::string, std::string> DescribeSlotConfig(const SlotConfig& config);

struct SlotLexicon {
  std::vector<std::vector<std::string>> words;  // grapheme lists
  std::vector<double> weights;                  // rank^-word_zipf_alpha
};

// Throws Error(kPoolExhausted) when the slot pools cannot supply
// vocab_size distinct words.
SlotLexicon BuildSlotLexicon(const SlotConfig& config, std::uint64_t seed);

GeneratedCorpus GenerateSlotCorpus(const SlotConfig& config,
                                   std::size_t n_words, std::uint64_t seed,
                                   const LengthModel& lengths,
                                   const GraphemeInventory& inventory);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_SLOT_GENERATOR_H_
