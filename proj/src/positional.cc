#include "scriptforge/positional.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "scriptforge/errors.h"
#include "scriptforge/info.h"
#include "scriptforge/parallel.h"
#include "scriptforge/random.h"
#include "scriptforge/stats.h"

namespace scriptforge {
namespace {

std::uint64_t ClassKey(const PositionalClassification& pc, Symbol s) {
  const auto c = pc.ClassOf(s);
  return static_cast<std::uint64_t>(c.value_or(PositionalClass::kAmbiguous));
}

MIParts Decompose(const Corpus& corpus, const PositionalClassification& pc) {
  std::vector<JointCell> graphemes;
  std::vector<JointCell> classes;
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t i = 0; i + 1 < sentence.size(); ++i) {
      const Symbol last = sentence[i].back();
      const Symbol first = sentence[i + 1].front();
      graphemes.push_back({last, first, 1.0});
      classes.push_back({ClassKey(pc, last), ClassKey(pc, first), 1.0});
    }
  }
  if (graphemes.empty()) {
    throw Error(ErrorCode::kNoTransitions, "no word boundaries in corpus");
  }
  MIParts parts;
  parts.total = SummarizeJoint(graphemes).mutual_information;
  parts.by_class = SummarizeJoint(classes).mutual_information;
  parts.within = parts.total - parts.by_class;
  return parts;
}

}  // namespace

std::string_view PositionalClassName(PositionalClass c) {
  switch (c) {
    case PositionalClass::kStart: return "start";
    case PositionalClass::kEnd: return "end";
    case PositionalClass::kAmbiguous: return "ambiguous";
  }
  return "ambiguous";
}

PositionalClass LabelFor(std::int64_t initial, std::int64_t final,
                         double threshold) {
  const double i = static_cast<double>(initial);
  const double f = static_cast<double>(final);
  if (initial > 0 && i >= threshold * f) return PositionalClass::kStart;
  if (final > 0 && f >= threshold * i) return PositionalClass::kEnd;
  return PositionalClass::kAmbiguous;
}

PositionalClassification::PositionalClassification(
    std::shared_ptr<const Alphabet> alphabet, double threshold,
    std::vector<GraphemePosition> entries)
    : alphabet_(std::move(alphabet)),
      threshold_(threshold),
      entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.symbol < b.symbol; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    index_.emplace(entries_[i].symbol, i);
  }
}

std::optional<PositionalClass> PositionalClassification::ClassOf(
    Symbol symbol) const {
  const auto* entry = Find(symbol);
  if (entry == nullptr) return std::nullopt;
  return entry->label;
}

const GraphemePosition* PositionalClassification::Find(Symbol symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::size_t PositionalClassification::CountOf(PositionalClass c) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(),
                    [c](const auto& e) { return e.label == c; }));
}

PositionalClassification Classify(const Corpus& corpus, double threshold) {
  std::map<Symbol, GraphemePosition> counts;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& word : sentence) {
      auto& first = counts[word.front()];
      first.symbol = word.front();
      ++first.initial;
      auto& last = counts[word.back()];
      last.symbol = word.back();
      ++last.final;
    }
  }
  std::vector<GraphemePosition> entries;
  entries.reserve(counts.size());
  for (auto& [symbol, entry] : counts) {
    entry.label = LabelFor(entry.initial, entry.final, threshold);
    entries.push_back(entry);
  }
  return PositionalClassification(corpus.alphabet, threshold,
                                  std::move(entries));
}

double PolarizationIndex(const PositionalClassification& pc) {
  if (pc.entries().empty()) {
    throw Error(ErrorCode::kNoGraphemes, "no classified graphemes");
  }
  const double polar = static_cast<double>(pc.CountOf(PositionalClass::kStart) +
                                           pc.CountOf(PositionalClass::kEnd));
  return polar / static_cast<double>(pc.entries().size());
}

double EndToStartRate(const Corpus& corpus,
                      const PositionalClassification& pc) {
  std::int64_t hits = 0;
  std::int64_t total = 0;
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t i = 0; i + 1 < sentence.size(); ++i) {
      ++total;
      if (pc.ClassOf(sentence[i].back()) == PositionalClass::kEnd &&
          pc.ClassOf(sentence[i + 1].front()) == PositionalClass::kStart) {
        ++hits;
      }
    }
  }
  if (total == 0) {
    throw Error(ErrorCode::kNoTransitions, "no word boundaries in corpus");
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

std::vector<ExtremeRatio> ExtremeRatios(const PositionalClassification& pc,
                                        double ratio_threshold,
                                        std::int64_t support_floor) {
  std::vector<ExtremeRatio> out;
  for (const auto& e : pc.entries()) {
    const std::int64_t hi = std::max(e.initial, e.final);
    const std::int64_t lo = std::min(e.initial, e.final);
    if (hi < support_floor) continue;
    const double ratio =
        static_cast<double>(hi) / static_cast<double>(std::max<std::int64_t>(lo, 1));
    if (ratio < ratio_threshold) continue;
    out.push_back({e.symbol, pc.alphabet().Spelling(e.symbol), ratio,
                   e.initial >= e.final ? DominantSide::kInitial
                                        : DominantSide::kFinal});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.ratio > b.ratio;
  });
  return out;
}

bool BilateralExtremity(const PositionalClassification& pc,
                        double ratio_threshold, std::int64_t support_floor) {
  bool initial = false;
  bool final = false;
  for (const auto& e : ExtremeRatios(pc, ratio_threshold, support_floor)) {
    (e.side == DominantSide::kInitial ? initial : final) = true;
  }
  return initial && final;
}

MIParts DecomposeMI(const Corpus& corpus, const PositionalClassification& pc) {
  return Decompose(corpus, pc);
}

MIDecomposition MiDecomposition(const Corpus& corpus,
                                const PositionalClassification& pc,
                                std::uint64_t seed, int shuffle_reps) {
  const MIParts observed = Decompose(corpus, pc);
  MIDecomposition out;
  out.mi_total = observed.total;
  out.mi_class = observed.by_class;
  out.mi_within = observed.within;
  out.class_pct = observed.total > 0.0 ? 100.0 * observed.by_class / observed.total
                                       : 0.0;
  out.shuffle_reps = shuffle_reps;
  if (shuffle_reps > 0) {
    std::vector<MIParts> shuffled(static_cast<std::size_t>(shuffle_reps));
    ParallelFor(shuffled.size(), [&](std::size_t r) {
      shuffled[r] = Decompose(ShuffleWords(corpus, DeriveSeed(seed, r)), pc);
    });
    for (const auto& p : shuffled) {
      out.mi_total_shuf += p.total;
      out.mi_class_shuf += p.by_class;
      out.mi_within_shuf += p.within;
    }
    out.mi_total_shuf /= shuffle_reps;
    out.mi_class_shuf /= shuffle_reps;
    out.mi_within_shuf /= shuffle_reps;
    out.shuffled_retention_pct =
        observed.total > 0.0 ? 100.0 * out.mi_total_shuf / observed.total : 0.0;
  }
  return out;
}

std::string_view BoundaryPositionName(BoundaryPosition p) {
  switch (p) {
    case BoundaryPosition::kInitial: return "initial";
    case BoundaryPosition::kFinal: return "final";
    case BoundaryPosition::kCombined: return "combined";
  }
  return "combined";
}

std::string_view DistributionShapeName(DistributionShape s) {
  switch (s) {
    case DistributionShape::kZipfian: return "Zipfian";
    case DistributionShape::kIntermediate: return "Intermediate";
    case DistributionShape::kPlateau: return "Plateau";
  }
  return "Plateau";
}

PowerLawFit FitPowerLaw(std::span<const double> rank_freq) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t r = 0; r < rank_freq.size(); ++r) {
    if (rank_freq[r] > 0.0) {
      xs.push_back(std::log(static_cast<double>(r + 1)));
      ys.push_back(std::log(rank_freq[r]));
    }
  }
  PowerLawFit fit;
  if (xs.size() < 2) return fit;
  const double mx = Mean(xs);
  const double my = Mean(ys);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  fit.exponent = -slope;
  fit.intercept = my - slope * mx;
  if (syy <= 0.0) return fit;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = 1.0 - ss_res / syy;
  return fit;
}

double CoefficientOfVariation(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean = Mean(values);
  if (mean == 0.0) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size())) / mean;
}

DistributionShape ClassifyShape(double r_squared, double cv,
                                const ShapeThresholds& thresholds) {
  const bool fit = r_squared > thresholds.min_r_squared;
  const bool spread = cv > thresholds.min_cv;
  if (fit && spread) return DistributionShape::kZipfian;
  if (fit || spread) return DistributionShape::kIntermediate;
  return DistributionShape::kPlateau;
}

BoundaryDistribution BoundaryDistributionOf(const Corpus& corpus,
                                            BoundaryPosition position,
                                            const ShapeThresholds& thresholds) {
  std::map<Symbol, std::int64_t> counts;
  std::size_t words = 0;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& word : sentence) {
      ++words;
      if (position != BoundaryPosition::kFinal) ++counts[word.front()];
      if (position != BoundaryPosition::kInitial) ++counts[word.back()];
    }
  }
  if (words == 0) throw Error(ErrorCode::kNoWords, "corpus has no words");

  std::vector<std::pair<std::int64_t, Symbol>> ranked;
  for (const auto& [symbol, count] : counts) ranked.emplace_back(count, symbol);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  BoundaryDistribution out;
  out.position = position;
  std::vector<double> freq;
  for (const auto& [count, symbol] : ranked) {
    out.rank_freq.push_back(count);
    out.graphemes.push_back(corpus.alphabet->Spelling(symbol));
    freq.push_back(static_cast<double>(count));
  }
  const PowerLawFit fit = FitPowerLaw(freq);
  out.r_squared = fit.r_squared;
  out.exponent = fit.exponent;
  out.cv = CoefficientOfVariation(freq);
  out.shape = ClassifyShape(out.r_squared, out.cv, thresholds);
  return out;
}

}  // namespace scriptforge
