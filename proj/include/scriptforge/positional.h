#ifndef SCRIPTFORGE_POSITIONAL_H_
#define SCRIPTFORGE_POSITIONAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "scriptforge/corpus.h"

namespace scriptforge {

enum class PositionalClass { kStart, kEnd, kAmbiguous };
std::string_view PositionalClassName(PositionalClass c);

struct GraphemePosition {
  Symbol symbol = 0;
  std::int64_t initial = 0;  // word-initial occurrences
  std::int64_t final = 0;    // word-final occurrences
  PositionalClass label = PositionalClass::kAmbiguous;
};

// start when initial >= threshold * final, end when final >= threshold *
// initial, ambiguous otherwise.
PositionalClass LabelFor(std::int64_t initial, std::int64_t final,
                         double threshold);

class PositionalClassification {
 public:
  PositionalClassification(std::shared_ptr<const Alphabet> alphabet,
                           double threshold,
                           std::vector<GraphemePosition> entries);

  double threshold() const { return threshold_; }
  const Alphabet& alphabet() const { return *alphabet_; }
  // Sorted by symbol; only graphemes seen at a word boundary.
  const std::vector<GraphemePosition>& entries() const { return entries_; }
  std::optional<PositionalClass> ClassOf(Symbol symbol) const;
  const GraphemePosition* Find(Symbol symbol) const;

  std::size_t CountOf(PositionalClass c) const;

 private:
  std::shared_ptr<const Alphabet> alphabet_;
  double threshold_;
  std::vector<GraphemePosition> entries_;
  std::unordered_map<Symbol, std::size_t> index_;
};

PositionalClassification Classify(const Corpus& corpus,
                                  double threshold = 2.0);

// (start + end) / classified; throws Error(kNoGraphemes) when empty.
double PolarizationIndex(const PositionalClassification& pc);

// Percentage of consecutive word pairs whose first word ends in an end-class
// grapheme and whose second word starts with a start-class grapheme.
// Throws Error(kNoTransitions).
double EndToStartRate(const Corpus& corpus,
                      const PositionalClassification& pc);

enum class DominantSide { kInitial, kFinal };

struct ExtremeRatio {
  Symbol symbol = 0;
  std::string grapheme;
  double ratio = 0.0;  // max / max(min, 1)
  DominantSide side = DominantSide::kInitial;
};

inline constexpr double kExtremeRatioThreshold = 100.0;
inline constexpr std::int64_t kExtremeSupportFloor = 20;

// Sorted by descending ratio.
std::vector<ExtremeRatio> ExtremeRatios(
    const PositionalClassification& pc,
    double ratio_threshold = kExtremeRatioThreshold,
    std::int64_t support_floor = kExtremeSupportFloor);

bool BilateralExtremity(const PositionalClassification& pc,
                        double ratio_threshold = kExtremeRatioThreshold,
                        std::int64_t support_floor = kExtremeSupportFloor);

struct MIDecomposition {
  double mi_total = 0.0;
  double mi_class = 0.0;
  double mi_within = 0.0;
  double class_pct = 0.0;
  double mi_total_shuf = 0.0;
  double mi_class_shuf = 0.0;
  double mi_within_shuf = 0.0;
  // 100 * mi_total_shuf / mi_total
  double shuffled_retention_pct = 0.0;
  int shuffle_reps = 0;
};

// Same decomposition without the shuffled variants.
struct MIParts {
  double total = 0.0;
  double by_class = 0.0;
  double within = 0.0;
};
MIParts DecomposeMI(const Corpus& corpus, const PositionalClassification& pc);

// Throws Error(kNoTransitions). Shuffled variants reuse `pc` and average
// over `shuffle_reps` within-sentence shuffles.
MIDecomposition MiDecomposition(const Corpus& corpus,
                                const PositionalClassification& pc,
                                std::uint64_t seed, int shuffle_reps = 10);

enum class BoundaryPosition { kInitial, kFinal, kCombined };
enum class DistributionShape { kZipfian, kIntermediate, kPlateau };
std::string_view BoundaryPositionName(BoundaryPosition p);
std::string_view DistributionShapeName(DistributionShape s);

struct ShapeThresholds {
  double min_r_squared = 0.85;  // strict: r_squared must exceed
  double min_cv = 0.8;          // strict: cv must exceed
};

struct PowerLawFit {
  double exponent = 0.0;  // negated slope of log(freq) on log(rank)
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least-squares line through (log rank, log freq) over positive entries.
// r_squared is 0 when the frequencies do not vary.
PowerLawFit FitPowerLaw(std::span<const double> rank_freq);
// Population coefficient of variation (sd / mean).
double CoefficientOfVariation(std::span<const double> values);
// Zipfian when both criteria pass, Intermediate when exactly one does,
// Plateau when neither.
DistributionShape ClassifyShape(double r_squared, double cv,
                                const ShapeThresholds& thresholds = {});

struct BoundaryDistribution {
  BoundaryPosition position = BoundaryPosition::kCombined;
  std::vector<std::int64_t> rank_freq;  // non-increasing
  std::vector<std::string> graphemes;   // aligned with rank_freq
  double r_squared = 0.0;
  double exponent = 0.0;
  double cv = 0.0;
  DistributionShape shape = DistributionShape::kPlateau;
};

// Throws Error(kNoWords).
BoundaryDistribution BoundaryDistributionOf(
    const Corpus& corpus, BoundaryPosition position = BoundaryPosition::kCombined,
    const ShapeThresholds& thresholds = {});

}  // namespace scriptforge

#endif  // SCRIPTFORGE_POSITIONAL_H_
