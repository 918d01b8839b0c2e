#include "scriptforge/report.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "scriptforge/errors.h"
#include "scriptforge/random.h"

namespace scriptforge {
namespace {

// JSON has no infinities; they become null.
Json Number(double value) {
  return std::isfinite(value) ? Json(value) : Json(nullptr);
}

Json Optional(const std::optional<double>& value) {
  return value ? Number(*value) : Json(nullptr);
}

std::string_view SideName(DominantSide side) {
  return side == DominantSide::kInitial ? "initial" : "final";
}

}  // namespace

Json ToJson(const DeltaResult& r) {
  return {{"n", r.n},
          {"delta", r.delta},
          {"x_ltr", r.x_ltr},
          {"x_rtl", r.x_rtl},
          {"ci_low", r.ci_low},
          {"ci_high", r.ci_high},
          {"verdict", DirectionName(r.direction_verdict)}};
}

Json ToJson(const CrossBoundaryResult& r) {
  return {{"n", r.n},
          {"h_fwd", r.h_fwd},
          {"h_bwd", r.h_bwd},
          {"mi_fwd", r.mi_fwd},
          {"mi_bwd", r.mi_bwd},
          {"delta_cb", r.delta_cb},
          {"transitions", r.transitions},
          {"ci_low", Optional(r.ci_low)},
          {"ci_high", Optional(r.ci_high)},
          {"verdict", DirectionName(r.verdict)}};
}

Json ToJson(const ShuffleControlResult& r) {
  return {{"mean", r.mean},
          {"sd", r.sd},
          {"mean_abs", r.mean_abs},
          {"reps", r.reps},
          {"no_transitions", r.no_transitions}};
}

Json ToJson(const PositionalClassification& pc) {
  Json entries = Json::array();
  for (const auto& e : pc.entries()) {
    entries.push_back({{"grapheme", pc.alphabet().Spelling(e.symbol)},
                       {"initial", e.initial},
                       {"final", e.final},
                       {"class", PositionalClassName(e.label)}});
  }
  return {{"threshold", pc.threshold()},
          {"start", pc.CountOf(PositionalClass::kStart)},
          {"end", pc.CountOf(PositionalClass::kEnd)},
          {"ambiguous", pc.CountOf(PositionalClass::kAmbiguous)},
          {"graphemes", std::move(entries)}};
}

Json ToJson(const MIDecomposition& d) {
  return {{"mi_total", d.mi_total},
          {"mi_class", d.mi_class},
          {"mi_within", d.mi_within},
          {"class_pct", d.class_pct},
          {"mi_total_shuf", d.mi_total_shuf},
          {"mi_class_shuf", d.mi_class_shuf},
          {"mi_within_shuf", d.mi_within_shuf},
          {"shuffled_retention_pct", d.shuffled_retention_pct},
          {"shuffle_reps", d.shuffle_reps}};
}

Json ToJson(const BoundaryDistribution& d) {
  return {{"position", BoundaryPositionName(d.position)},
          {"r_squared", d.r_squared},
          {"exponent", d.exponent},
          {"cv", d.cv},
          {"shape", DistributionShapeName(d.shape)},
          {"graphemes", d.graphemes},
          {"rank_freq", d.rank_freq}};
}

Json ToJson(const DissociationReport& r) {
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    runs.push_back({{"delta_char", run.delta_char},
                    {"delta_cb", run.delta_cb},
                    {"dissociated", run.dissociated}});
  }
  return {{"order", r.order},
          {"runs", std::move(runs)},
          {"mean_delta_char", r.mean_delta_char},
          {"sd_delta_char", r.sd_delta_char},
          {"mean_delta_cb", r.mean_delta_cb},
          {"sd_delta_cb", r.sd_delta_cb},
          {"dissociation_count", r.dissociation_count},
          {"observed_delta_char", r.observed_delta_char},
          {"observed_delta_cb", r.observed_delta_cb}};
}

Json ToJson(const SignatureReport& r) {
  return {{"e_to_s", r.e_to_s},
          {"bilateral", r.bilateral},
          {"mi", r.mi},
          {"shape", DistributionShapeName(r.shape)},
          {"r_squared", r.r_squared},
          {"cv", r.cv},
          {"passed", r.passed},
          {"joint_score", r.joint_score},
          {"words", r.words}};
}

Json ToJson(const MetricSummary& m) {
  return {{"mean", m.mean},
          {"sd", m.sd},
          {"ci_low", m.ci_low},
          {"ci_high", m.ci_high},
          {"cohens_d", Optional(m.cohens_d)}};
}

Json ToJson(const BatteryResult& b) {
  Json runs = Json::array();
  for (const auto& run : b.runs) runs.push_back(ToJson(run));
  Json verdicts = Json::array();
  for (Verdict v : b.verdicts) verdicts.push_back(VerdictName(v));
  return {{"label", b.label},
          {"e_to_s", ToJson(b.e_to_s)},
          {"mi", ToJson(b.mi)},
          {"r_squared", ToJson(b.r_squared)},
          {"cv", ToJson(b.cv)},
          {"sig2_pass_fraction", b.sig2_pass_fraction},
          {"shape", DistributionShapeName(b.shape)},
          {"verdicts", std::move(verdicts)},
          {"joint_score", b.joint_score},
          {"runs", std::move(runs)}};
}

Json AnalyzeCorpus(const Corpus& corpus, const AnalyzeOptions& options) {
  Json out;
  out["corpus"] = {{"name", corpus.name},
                   {"sentences", corpus.sentences.size()},
                   {"words", corpus.WordCount()},
                   {"graphemes", corpus.alphabet->size()},
                   {"tokenization", TokenizationName(corpus.tokenization)}};

  Json delta_char = Json::array();
  for (int n : options.orders) {
    DeltaBootstrapOptions b{options.bootstrap, 0.05, DeriveSeed(options.seed, 100 + n)};
    delta_char.push_back(ToJson(DeltaChar(corpus, n, options.smoothing, b)));
  }
  out["delta_char"] = std::move(delta_char);

  Json delta_cb = Json::array();
  for (int n = 1; n <= kMaxBoundaryGram; ++n) {
    CrossBoundaryResult r = DeltaCb(corpus, n);
    CbBootstrapOptions b;
    b.replicates = options.bootstrap;
    b.seed = DeriveSeed(options.seed, 200 + n);
    const CbInterval ci = PairedBootstrapCb(corpus, n, b);
    r.ci_low = ci.ci_low;
    r.ci_high = ci.ci_high;
    r.verdict = ci.verdict;
    Json entry = ToJson(r);
    entry["shuffle_control"] =
        ToJson(ShuffleControl(corpus, n, DeriveSeed(options.seed, 300 + n), options.shuffle_reps));
    delta_cb.push_back(std::move(entry));
  }
  out["delta_cb"] = std::move(delta_cb);

  const PositionalClassification pc = Classify(corpus, options.class_threshold);
  Json positional = ToJson(pc);
  positional["polarization"] = PolarizationIndex(pc);
  positional["e_to_s"] = EndToStartRate(corpus, pc);
  Json extremes = Json::array();
  for (const auto& e : ExtremeRatios(pc)) {
    extremes.push_back({{"grapheme", e.grapheme}, {"ratio", e.ratio}, {"side", SideName(e.side)}});
  }
  positional["extreme_ratios"] = std::move(extremes);
  positional["bilateral_extremity"] = BilateralExtremity(pc);
  out["positional"] = std::move(positional);

  out["mi_decomposition"] =
      ToJson(MiDecomposition(corpus, pc, DeriveSeed(options.seed, 400), options.shuffle_reps));

  Json shapes;
  for (auto position : {BoundaryPosition::kInitial, BoundaryPosition::kFinal,
                        BoundaryPosition::kCombined}) {
    shapes[std::string(BoundaryPositionName(position))] =
        ToJson(BoundaryDistributionOf(corpus, position));
  }
  out["boundary_distribution"] = std::move(shapes);
  out["signatures"] = ToJson(EvaluateCorpus(corpus));
  return out;
}

std::string RankFrequencyCsv(const BoundaryDistribution& d) {
  std::string out = "rank,grapheme,count\n";
  for (std::size_t i = 0; i < d.rank_freq.size(); ++i) {
    out += std::to_string(i + 1) + "," + d.graphemes[i] + "," +
           std::to_string(d.rank_freq[i]) + "\n";
  }
  return out;
}

Json MakeDocument(const std::string& command, Json config, Json results) {
  return {{"command", command}, {"config", std::move(config)}, {"results", std::move(results)}};
}

void WriteDocument(const std::filesystem::path& path, Json document) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  document["meta"] = {{"tool", "scriptforge"}, {"written_at", stamp}};
  WriteText(path, document.dump(2) + "\n");
}

std::string DeterministicSection(const Json& document) {
  Json copy = document;
  copy.erase("meta");
  return copy.dump(2);
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

}  // namespace scriptforge
