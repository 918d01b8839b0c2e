#ifndef SCRIPTFORGE_EVALUATE_H_
#define SCRIPTFORGE_EVALUATE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scriptforge/config_file.h"
#include "scriptforge/corpus.h"
#include "scriptforge/positional.h"

namespace scriptforge {

struct SignatureThresholds {
  double sig1_low = 70.0;   // E->S percent, inclusive range
  double sig1_high = 95.0;
  double sig2_run_fraction = 0.5;  // strict
  double sig3_min_mi = 0.10;       // bits, strict
  ShapeThresholds sig4;
};

// Keys: sig1_low, sig1_high, sig2_run_fraction, sig3_min_mi, sig4_r2, sig4_cv.
SignatureThresholds ThresholdsFromFile(const ConfigFile& file);

inline constexpr int kSignatureCount = 4;

struct SignatureReport {
  double e_to_s = 0.0;  // percent
  bool bilateral = false;
  double mi = 0.0;  // bits, forward n = 1
  DistributionShape shape = DistributionShape::kPlateau;
  double r_squared = 0.0;
  double cv = 0.0;
  std::array<bool, kSignatureCount> passed{};
  int joint_score = 0;
  std::size_t words = 0;
};

int JointScore(const std::array<bool, kSignatureCount>& passed);

// Classification is computed on the corpus itself.
SignatureReport EvaluateCorpus(const Corpus& corpus,
                               const SignatureThresholds& thresholds = {});

// Battery-level verdict: pass when the CI lies inside the pass region, fail
// when it lies entirely outside, marginal when it straddles a boundary.
enum class Verdict { kPass, kMarginal, kFail };
std::string_view VerdictSymbol(Verdict v);  // check mark, tilde, cross
std::string_view VerdictName(Verdict v);    // pass, marginal, fail

// Verdict of an interval against the closed range [low, high].
Verdict RangeVerdict(double ci_low, double ci_high, double low, double high);
// Verdict of an interval against the open half-line (threshold, inf).
Verdict AboveVerdict(double ci_low, double ci_high, double threshold);

// Observed values of a reference corpus for Cohen's d.
struct ReferenceValues {
  std::optional<double> e_to_s;
  std::optional<double> mi;
  std::optional<double> r_squared;
  std::optional<double> cv;
};
ReferenceValues ReferenceFromReport(const SignatureReport& report);
// Reads {"e_to_s":..,"mi":..,"r_squared":..,"cv":..} or an analyze report
// carrying a "signatures" object with those keys.
ReferenceValues LoadReference(const std::filesystem::path& path);

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> cohens_d;
};

struct BatteryResult {
  std::string label;
  std::vector<SignatureReport> runs;
  MetricSummary e_to_s, mi, r_squared, cv;
  double sig2_pass_fraction = 0.0;
  DistributionShape shape = DistributionShape::kPlateau;  // of the mean fit
  std::array<Verdict, kSignatureCount> verdicts{};
  int joint_score = 0;  // number of kPass verdicts
};

struct BatteryOptions {
  int n_runs = 20;
  std::size_t words_per_run = 37000;
  std::uint64_t seed = 0;
  int bootstrap_replicates = 1000;
  double alpha = 0.05;
};

// Produces the corpus for one run from (words, seed).
using RunGenerator = std::function<Corpus(std::size_t words, std::uint64_t seed)>;

// Runs are generated in parallel with seeds derived from options.seed.
BatteryResult RunBattery(std::string label, const RunGenerator& generator,
                         const BatteryOptions& options,
                         const SignatureThresholds& thresholds = {},
                         const ReferenceValues& reference = {});
// Summarizes already-evaluated runs.
BatteryResult SummarizeBattery(std::string label,
                               std::vector<SignatureReport> runs,
                               const BatteryOptions& options,
                               const SignatureThresholds& thresholds = {},
                               const ReferenceValues& reference = {});

struct SweepPoint {
  std::string label;
  RunGenerator generator;
};

// One battery per point, with per-point seeds derived from options.seed.
// Throws Error(kInvalidArgument) on an empty grid.
std::vector<BatteryResult> Sweep(const std::vector<SweepPoint>& grid,
                                 const BatteryOptions& options,
                                 const SignatureThresholds& thresholds = {},
                                 const ReferenceValues& reference = {});

// Configuration,Sig1,Sig2,Sig3,Sig4,Joint with check/tilde/cross cells.
std::string InterpretationMatrixCsv(const std::vector<BatteryResult>& results);
// parameter value, E->S, MI, shape and joint per battery.
std::string SweepCsv(const std::string& parameter,
                     const std::vector<std::string>& values,
                     const std::vector<BatteryResult>& results);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_EVALUATE_H_
