#ifndef SCRIPTFORGE_CROSS_BOUNDARY_H_
#define SCRIPTFORGE_CROSS_BOUNDARY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scriptforge/corpus.h"

namespace scriptforge {

// Packed boundary n-gram: each grapheme stored as symbol+1 in a 32-bit lane,
// zero marking the pad used for words shorter than n.
using Gram = std::uint64_t;
inline constexpr int kMaxBoundaryGram = 2;

Gram LastGram(const Word& word, int n);
Gram FirstGram(const Word& word, int n);
std::string FormatGram(const Alphabet& alphabet, Gram gram, int n);

struct BoundaryTransitionTable {
  int n = 1;
  // (condition = last n of w_i, target = first n of w_{i+1}) -> count
  std::map<std::pair<Gram, Gram>, std::int64_t> joint;
  std::int64_t total = 0;
};

// One entry per consecutive word pair inside each sentence.
BoundaryTransitionTable ExtractTransitions(const Corpus& corpus, int n);

// Throw Error(kEmptyTable) when the table has no transitions.
double ConditionalEntropy(const BoundaryTransitionTable& table);
double MutualInformation(const BoundaryTransitionTable& table);
double TargetEntropy(const BoundaryTransitionTable& table);

enum class Direction { kLtr, kRtl, kInconclusive };
std::string_view DirectionName(Direction d);

struct CrossBoundaryResult {
  int n = 1;
  double h_fwd = 0.0;
  double h_bwd = 0.0;
  double mi_fwd = 0.0;
  double mi_bwd = 0.0;
  double delta_cb = 0.0;
  std::int64_t transitions = 0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  Direction verdict = Direction::kInconclusive;
};

// Forward table from the corpus, backward table from ReverseWords(corpus).
// The verdict follows the sign of delta_cb until a CI is attached.
CrossBoundaryResult DeltaCb(const Corpus& corpus, int n);

// What a bootstrap replicate measures.
enum class ReplicateStatistic {
  // Mean over resampled sentences of each sentence's own H_fwd - H_bwd:
  // every sentence weighs the same regardless of length.
  kSentenceMean,
  // Delta_CB recomputed from the pooled counts of the resampled sentences.
  kPooled,
};

struct CbBootstrapOptions {
  int replicates = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  ReplicateStatistic statistic = ReplicateStatistic::kSentenceMean;
};

struct CbInterval {
  double ci_low = 0.0;
  double ci_high = 0.0;
  Direction verdict = Direction::kInconclusive;
};

// Paired: each replicate uses the same sentences for both directions.
// Throws Error(kInsufficientData) with fewer than two sentences that have
// transitions.
CbInterval PairedBootstrapCb(const Corpus& corpus, int n,
                             const CbBootstrapOptions& options);

// Aggregate sign vs. CI rule shared by every directional verdict.
Direction DirectionVerdict(double point, double ci_low, double ci_high,
                           Direction positive, Direction negative);

struct ShuffleControlResult {
  double mean = 0.0;      // mean Delta_CB over shuffled copies
  double sd = 0.0;
  double mean_abs = 0.0;  // |mean|
  int reps = 0;
  bool no_transitions = false;
};

ShuffleControlResult ShuffleControl(const Corpus& corpus, int n,
                                    std::uint64_t seed, int reps = 10);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_CROSS_BOUNDARY_H_
