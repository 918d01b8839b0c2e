#include "scriptforge/evaluate.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "scriptforge/cross_boundary.h"
#include "scriptforge/errors.h"
#include "scriptforge/parallel.h"
#include "scriptforge/random.h"
#include "scriptforge/stats.h"

namespace scriptforge {
namespace {

std::string Fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

MetricSummary Summarize(const std::vector<double>& values,
                        const BatteryOptions& options, std::uint64_t stream,
                        std::optional<double> reference) {
  MetricSummary s;
  s.mean = Mean(values);
  s.sd = SampleSd(values);
  const auto ci = BootstrapMeanInterval(values, options.bootstrap_replicates,
                                        options.alpha,
                                        DeriveSeed(options.seed, stream));
  s.ci_low = ci.low;
  s.ci_high = ci.high;
  if (reference) {
    const double diff = s.mean - *reference;
    if (diff == 0.0) {
      s.cohens_d = 0.0;
    } else if (s.sd > 0.0) {
      s.cohens_d = diff / s.sd;
    } else {
      s.cohens_d = std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
  }
  return s;
}

std::optional<double> OptionalNumber(const nlohmann::json& object,
                                     const char* key) {
  if (object.contains(key) && object[key].is_number()) {
    return object[key].get<double>();
  }
  return std::nullopt;
}

}  // namespace

SignatureThresholds ThresholdsFromFile(const ConfigFile& file) {
  file.RequireKnown({"sig1_low", "sig1_high", "sig2_run_fraction",
                     "sig3_min_mi", "sig4_r2", "sig4_cv"});
  SignatureThresholds t;
  t.sig1_low = file.GetDouble("sig1_low", t.sig1_low);
  t.sig1_high = file.GetDouble("sig1_high", t.sig1_high);
  t.sig2_run_fraction = file.GetDouble("sig2_run_fraction", t.sig2_run_fraction);
  t.sig3_min_mi = file.GetDouble("sig3_min_mi", t.sig3_min_mi);
  t.sig4.min_r_squared = file.GetDouble("sig4_r2", t.sig4.min_r_squared);
  t.sig4.min_cv = file.GetDouble("sig4_cv", t.sig4.min_cv);
  if (t.sig1_low > t.sig1_high) {
    throw Error(ErrorCode::kInvalidConfig,
                file.source() + ": sig1_low exceeds sig1_high");
  }
  return t;
}

int JointScore(const std::array<bool, kSignatureCount>& passed) {
  int score = 0;
  for (bool p : passed) score += p ? 1 : 0;
  return score;
}

SignatureReport EvaluateCorpus(const Corpus& corpus,
                               const SignatureThresholds& thresholds) {
  SignatureReport r;
  r.words = corpus.WordCount();
  const auto pc = Classify(corpus);
  r.e_to_s = EndToStartRate(corpus, pc);
  r.bilateral = BilateralExtremity(pc);
  r.mi = MutualInformation(ExtractTransitions(corpus, 1));
  const auto dist = BoundaryDistributionOf(corpus, BoundaryPosition::kCombined,
                                           thresholds.sig4);
  r.shape = dist.shape;
  r.r_squared = dist.r_squared;
  r.cv = dist.cv;
  r.passed = {r.e_to_s >= thresholds.sig1_low && r.e_to_s <= thresholds.sig1_high,
              r.bilateral, r.mi > thresholds.sig3_min_mi,
              r.shape == DistributionShape::kZipfian};
  r.joint_score = JointScore(r.passed);
  return r;
}

std::string_view VerdictSymbol(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "✓";
    case Verdict::kMarginal: return "∼";
    case Verdict::kFail: return "×";
  }
  return "?";
}

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kMarginal: return "marginal";
    case Verdict::kFail: return "fail";
  }
  return "unknown";
}

Verdict RangeVerdict(double ci_low, double ci_high, double low, double high) {
  if (ci_low >= low && ci_high <= high) return Verdict::kPass;
  if (ci_high < low || ci_low > high) return Verdict::kFail;
  return Verdict::kMarginal;
}

Verdict AboveVerdict(double ci_low, double ci_high, double threshold) {
  if (ci_low > threshold) return Verdict::kPass;
  if (ci_high <= threshold) return Verdict::kFail;
  return Verdict::kMarginal;
}

ReferenceValues ReferenceFromReport(const SignatureReport& report) {
  return {report.e_to_s, report.mi, report.r_squared, report.cv};
}

ReferenceValues LoadReference(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig,
                path.string() + ": invalid JSON: " + e.what());
  }
  const nlohmann::json* source = &doc;
  if (doc.contains("results") && doc["results"].contains("signatures")) {
    source = &doc["results"]["signatures"];
  } else if (doc.contains("signatures")) {
    source = &doc["signatures"];
  }
  ReferenceValues ref{OptionalNumber(*source, "e_to_s"),
                      OptionalNumber(*source, "mi"),
                      OptionalNumber(*source, "r_squared"),
                      OptionalNumber(*source, "cv")};
  if (!ref.e_to_s && !ref.mi && !ref.r_squared && !ref.cv) {
    throw Error(ErrorCode::kInvalidConfig,
                path.string() + ": no reference metrics found");
  }
  return ref;
}

BatteryResult SummarizeBattery(std::string label,
                               std::vector<SignatureReport> runs,
                               const BatteryOptions& options,
                               const SignatureThresholds& thresholds,
                               const ReferenceValues& reference) {
  if (runs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "battery needs at least one run");
  }
  BatteryResult b;
  b.label = std::move(label);
  std::vector<double> es, mi, r2, cv;
  int bilateral = 0;
  for (const auto& r : runs) {
    es.push_back(r.e_to_s);
    mi.push_back(r.mi);
    r2.push_back(r.r_squared);
    cv.push_back(r.cv);
    bilateral += r.bilateral ? 1 : 0;
  }
  b.runs = std::move(runs);
  b.e_to_s = Summarize(es, options, 1, reference.e_to_s);
  b.mi = Summarize(mi, options, 2, reference.mi);
  b.r_squared = Summarize(r2, options, 3, reference.r_squared);
  b.cv = Summarize(cv, options, 4, reference.cv);
  b.sig2_pass_fraction = static_cast<double>(bilateral) /
                         static_cast<double>(b.runs.size());
  b.shape = ClassifyShape(b.r_squared.mean, b.cv.mean, thresholds.sig4);

  const Verdict r2v = AboveVerdict(b.r_squared.ci_low, b.r_squared.ci_high,
                                   thresholds.sig4.min_r_squared);
  const Verdict cvv = AboveVerdict(b.cv.ci_low, b.cv.ci_high, thresholds.sig4.min_cv);
  Verdict sig4 = Verdict::kMarginal;
  if (r2v == Verdict::kPass && cvv == Verdict::kPass) sig4 = Verdict::kPass;
  if (r2v == Verdict::kFail || cvv == Verdict::kFail) sig4 = Verdict::kFail;

  b.verdicts = {
      RangeVerdict(b.e_to_s.ci_low, b.e_to_s.ci_high, thresholds.sig1_low,
                   thresholds.sig1_high),
      b.sig2_pass_fraction > thresholds.sig2_run_fraction ? Verdict::kPass
                                                          : Verdict::kFail,
      AboveVerdict(b.mi.ci_low, b.mi.ci_high, thresholds.sig3_min_mi),
      sig4,
  };
  for (Verdict v : b.verdicts) b.joint_score += v == Verdict::kPass ? 1 : 0;
  return b;
}

BatteryResult RunBattery(std::string label, const RunGenerator& generator,
                         const BatteryOptions& options,
                         const SignatureThresholds& thresholds,
                         const ReferenceValues& reference) {
  if (options.n_runs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_runs must be at least 1");
  }
  std::vector<SignatureReport> runs(static_cast<std::size_t>(options.n_runs));
  ParallelFor(runs.size(), [&](std::size_t i) {
    const Corpus corpus = generator(options.words_per_run,
                                    DeriveSeed(options.seed, 1000 + i));
    runs[i] = EvaluateCorpus(corpus, thresholds);
  });
  return SummarizeBattery(std::move(label), std::move(runs), options,
                          thresholds, reference);
}

std::vector<BatteryResult> Sweep(const std::vector<SweepPoint>& grid,
                                 const BatteryOptions& options,
                                 const SignatureThresholds& thresholds,
                                 const ReferenceValues& reference) {
  if (grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep grid is empty");
  }
  std::vector<BatteryResult> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    BatteryOptions point = options;
    point.seed = DeriveSeed(options.seed, i);
    out.push_back(RunBattery(grid[i].label, grid[i].generator, point,
                             thresholds, reference));
  }
  return out;
}

std::string InterpretationMatrixCsv(const std::vector<BatteryResult>& results) {
  std::string out = "configuration,sig1_e_to_s,sig2_bilateral,sig3_mi,sig4_zipf,joint\n";
  for (const auto& r : results) {
    out += r.label;
    for (Verdict v : r.verdicts) {
      out += ",";
      out += VerdictSymbol(v);
    }
    out += "," + std::to_string(r.joint_score) + "/4\n";
  }
  return out;
}

std::string SweepCsv(const std::string& parameter,
                     const std::vector<std::string>& values,
                     const std::vector<BatteryResult>& results) {
  if (values.size() != results.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "sweep values and results differ in length");
  }
  std::string out = parameter +
                    ",e_to_s_pct,e_to_s_ci_low,e_to_s_ci_high,mi_bits,"
                    "r_squared,cv,shape,joint\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out += values[i] + "," + Fixed(r.e_to_s.mean, 1) + "," +
           Fixed(r.e_to_s.ci_low, 1) + "," + Fixed(r.e_to_s.ci_high, 1) + "," +
           Fixed(r.mi.mean, 3) + "," + Fixed(r.r_squared.mean, 3) + "," +
           Fixed(r.cv.mean, 3) + "," + std::string(DistributionShapeName(r.shape)) +
           "," + std::to_string(r.joint_score) + "/4\n";
  }
  return out;
}

}  // namespace scriptforge
