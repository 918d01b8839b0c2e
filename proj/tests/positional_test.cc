#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "scriptforge/positional.h"
#include "scriptforge/random.h"
#include "test_util.h"

using namespace scriptforge;
using testing::ErrorOf;
using testing::MakeCorpus;

namespace {

// E->S from raw counts, recomputed without the classification object.
double BruteEndToStart(const Corpus& c, double threshold) {
  std::map<Symbol, std::pair<double, double>> counts;
  for (const auto& s : c.sentences) {
    for (const auto& w : s) {
      counts[w.front()].first += 1;
      counts[w.back()].second += 1;
    }
  }
  double hits = 0, total = 0;
  for (const auto& s : c.sentences) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const auto [ei, ef] = counts[s[i].back()];
      const auto [si, sf] = counts[s[i + 1].front()];
      const bool end = ef >= threshold * ei && !(ei >= threshold * ef);
      const bool start = si >= threshold * sf;
      total += 1;
      if (end && start) hits += 1;
    }
  }
  return 100 * hits / total;
}

}  // namespace

TEST_CASE("LabelFor thresholds") {
  CHECK(LabelFor(3, 1, 2.0) == PositionalClass::kStart);
  CHECK(LabelFor(1, 1, 2.0) == PositionalClass::kAmbiguous);
  CHECK(LabelFor(1, 3, 2.0) == PositionalClass::kEnd);
  CHECK(LabelFor(2, 1, 2.0) == PositionalClass::kStart);
  CHECK(LabelFor(5, 0, 2.0) == PositionalClass::kStart);
  CHECK(LabelFor(0, 5, 2.0) == PositionalClass::kEnd);
}

TEST_CASE("Classify counts boundary occurrences") {
  // a: initial 3, final 1.  b: initial 1, final 1.  c: final 2.
  const auto c = MakeCorpus({{"ab", "ac", "ba"}, {"ac"}});
  const auto pc = Classify(c);
  const auto a = *c.alphabet->Find("a");
  const auto b = *c.alphabet->Find("b");
  const auto cc = *c.alphabet->Find("c");
  CHECK(pc.Find(a)->initial == 3);
  CHECK(pc.Find(a)->final == 1);
  CHECK(pc.ClassOf(a) == PositionalClass::kStart);
  CHECK(pc.ClassOf(b) == PositionalClass::kAmbiguous);
  CHECK(pc.ClassOf(cc) == PositionalClass::kEnd);
  CHECK(pc.entries().size() == 3);
  CHECK(PolarizationIndex(pc) == doctest::Approx(2.0 / 3));
}

TEST_CASE("Classify ignores word-internal graphemes") {
  const auto c = MakeCorpus({{"axb"}});
  const auto pc = Classify(c);
  CHECK_FALSE(pc.ClassOf(*c.alphabet->Find("x")).has_value());
}

TEST_CASE("Polarization edge cases") {
  CHECK(PolarizationIndex(Classify(MakeCorpus({{"aa", "bb"}}))) == 0.0);
  const PositionalClassification empty(std::make_shared<Alphabet>(), 2.0, {});
  CHECK(ErrorOf([&] { PolarizationIndex(empty); }) == ErrorCode::kNoGraphemes);
}

TEST_CASE("Classification is threshold-monotone") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Corpus c = testing::RandomCorpus(rng, 10, 6, 4, 5);
    const auto low = Classify(c, 1.5);
    const auto high = Classify(c, 3.0);
    for (const auto& e : low.entries()) {
      if (e.label == PositionalClass::kAmbiguous) {
        CHECK(high.ClassOf(e.symbol) == PositionalClass::kAmbiguous);
      }
    }
  }
}

TEST_CASE("EndToStartRate") {
  // Every word starts with s and ends with e.
  const auto forced = MakeCorpus({{"sxe", "se", "sye"}, {"se", "se"}});
  CHECK(EndToStartRate(forced, Classify(forced)) == doctest::Approx(100.0));

  const auto none = MakeCorpus({{"ab"}, {"cd"}});
  CHECK(ErrorOf([&] { EndToStartRate(none, Classify(none)); }) == ErrorCode::kNoTransitions);

  Rng rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const Corpus c = testing::RandomCorpus(rng, 8, 5, 3, 4);
    if (c.TransitionCount() == 0) continue;
    REQUIRE(EndToStartRate(c, Classify(c)) == doctest::Approx(BruteEndToStart(c, 2.0)));
  }
}

TEST_CASE("Shuffling keeps each sentence's boundary grapheme classes") {
  Rng rng(33);
  const Corpus c = testing::RandomCorpus(rng, 30, 6, 4, 5);
  const auto pc = Classify(c);
  const Corpus s = ShuffleWords(c, 77);
  for (std::size_t i = 0; i < c.sentences.size(); ++i) {
    std::multiset<std::pair<Symbol, int>> a, b;
    for (const auto& w : c.sentences[i]) {
      a.insert({w.back(), static_cast<int>(*pc.ClassOf(w.back()))});
      a.insert({w.front() + 100000, static_cast<int>(*pc.ClassOf(w.front()))});
    }
    for (const auto& w : s.sentences[i]) {
      b.insert({w.back(), static_cast<int>(*pc.ClassOf(w.back()))});
      b.insert({w.front() + 100000, static_cast<int>(*pc.ClassOf(w.front()))});
    }
    CHECK(a == b);
  }
}

TEST_CASE("ExtremeRatios and bilateral extremity") {
  // q: 150 initial, 0 final.  n: 0 initial, 150 final.  d: 50 initial, 1 final.
  std::vector<std::vector<std::string>> raw;
  for (int i = 0; i < 150; ++i) raw.push_back({"qon"});
  for (int i = 0; i < 50; ++i) raw.push_back({"dxz"});
  raw.push_back({"ad"});
  const Corpus c = MakeCorpus(raw);
  const auto pc = Classify(c);
  const auto ex = ExtremeRatios(pc);
  REQUIRE(ex.size() == 2);
  std::set<std::string> names{ex[0].grapheme, ex[1].grapheme};
  CHECK(names == std::set<std::string>{"q", "n"});
  for (const auto& e : ex) {
    CHECK(e.ratio == doctest::Approx(150.0));
    CHECK(e.side == (e.grapheme == "q" ? DominantSide::kInitial : DominantSide::kFinal));
  }
  CHECK(BilateralExtremity(pc));

  // 50:1 is excluded at 100 and kept at 40.
  const auto d = *c.alphabet->Find("d");
  bool has_d = false;
  for (const auto& e : ExtremeRatios(pc, 40.0)) has_d |= e.symbol == d;
  CHECK(has_d);

  // Below the support floor nothing qualifies.
  const auto rare = Classify(MakeCorpus({{"qon"}, {"qon"}}));
  CHECK(ExtremeRatios(rare).empty());
  CHECK_FALSE(BilateralExtremity(rare));

  // One side only.
  std::vector<std::vector<std::string>> one_side;
  for (int i = 0; i < 150; ++i) one_side.push_back({"qa"});
  for (int i = 0; i < 150; ++i) one_side.push_back({"aa"});
  CHECK_FALSE(BilateralExtremity(Classify(MakeCorpus(one_side))));
}

TEST_CASE("MI decomposition matches the oracle and sums exactly") {
  Rng rng(34);
  for (int trial = 0; trial < 1000; ++trial) {
    const Corpus c = testing::RandomCorpus(rng, 6, 5, 3, 4);
    if (c.TransitionCount() == 0) continue;
    const auto pc = Classify(c);
    const auto parts = DecomposeMI(c, pc);
    const auto want = oracle::Decompose(c);
    REQUIRE(std::abs(parts.total - want.total) < 1e-12);
    REQUIRE(std::abs(parts.by_class - want.by_class) < 1e-12);
    REQUIRE(std::abs(parts.by_class + parts.within - parts.total) < 1e-9);
    REQUIRE(parts.by_class <= parts.total + 1e-12);
    REQUIRE(parts.by_class >= -1e-12);
  }
}

TEST_CASE("MiDecomposition fields") {
  const auto c = MakeCorpus({{"sxe", "se", "syz"}, {"zs", "se"}, {"ab", "se"}});
  const auto pc = Classify(c);
  const auto d = MiDecomposition(c, pc, 5, 10);
  CHECK(d.mi_total == doctest::Approx(d.mi_class + d.mi_within));
  CHECK(d.mi_total_shuf == doctest::Approx(d.mi_class_shuf + d.mi_within_shuf));
  CHECK(d.shuffle_reps == 10);
  if (d.mi_total > 0) {
    CHECK(d.class_pct == doctest::Approx(100 * d.mi_class / d.mi_total));
    CHECK(d.shuffled_retention_pct == doctest::Approx(100 * d.mi_total_shuf / d.mi_total));
  }

  // One grapheme per class: all information is in the labels.
  std::vector<std::vector<std::string>> raw;
  for (int i = 0; i < 20; ++i) raw.push_back({"se", "se", "se"});
  raw.push_back({"a"});
  const Corpus pure = MakeCorpus(raw);
  CHECK(DecomposeMI(pure, Classify(pure)).within == doctest::Approx(0.0));

  const auto lone = MakeCorpus({{"ab"}});
  CHECK(ErrorOf([&] { MiDecomposition(lone, Classify(lone), 1); }) ==
        ErrorCode::kNoTransitions);
}

TEST_CASE("Power-law fit recovers a planted exponent") {
  for (double s : {0.7, 1.0, 1.6}) {
    std::vector<double> freq;
    for (int r = 1; r <= 30; ++r) freq.push_back(5000.0 * std::pow(r, -s));
    const auto fit = FitPowerLaw(freq);
    CHECK(std::abs(fit.exponent - s) < 1e-6);
    CHECK(fit.r_squared >= 1 - 1e-9);
  }

  std::vector<double> harmonic;
  for (int r = 1; r <= 20; ++r) harmonic.push_back(1000.0 / r);
  const auto fit = FitPowerLaw(harmonic);
  const double cv = CoefficientOfVariation(harmonic);
  CHECK(fit.r_squared > 0.99);
  CHECK(cv > 0.8);
  CHECK(ClassifyShape(fit.r_squared, cv) == DistributionShape::kZipfian);

  const std::vector<double> flat(12, 7.0);
  CHECK(CoefficientOfVariation(flat) == 0.0);
  CHECK(FitPowerLaw(flat).r_squared == 0.0);
  CHECK(ClassifyShape(FitPowerLaw(flat).r_squared, 0.0) == DistributionShape::kPlateau);
}

TEST_CASE("ClassifyShape uses strict thresholds") {
  CHECK(ClassifyShape(0.9, 0.9) == DistributionShape::kZipfian);
  CHECK(ClassifyShape(0.85, 0.9) == DistributionShape::kIntermediate);
  CHECK(ClassifyShape(0.9, 0.8) == DistributionShape::kIntermediate);
  CHECK(ClassifyShape(0.5, 0.5) == DistributionShape::kPlateau);
}

TEST_CASE("BoundaryDistributionOf") {
  const auto uniform = MakeCorpus({{"ab", "cd", "ef", "gh"}});
  const auto d = BoundaryDistributionOf(uniform);
  CHECK(d.rank_freq.size() == 8);
  CHECK(d.cv == 0.0);
  CHECK(d.shape == DistributionShape::kPlateau);

  Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const Corpus c = testing::RandomCorpus(rng, 20, 6, 4, 6);
    for (auto pos : {BoundaryPosition::kInitial, BoundaryPosition::kFinal,
                     BoundaryPosition::kCombined}) {
      const auto dist = BoundaryDistributionOf(c, pos);
      std::int64_t sum = 0;
      for (std::size_t i = 0; i < dist.rank_freq.size(); ++i) {
        sum += dist.rank_freq[i];
        if (i > 0) CHECK(dist.rank_freq[i] <= dist.rank_freq[i - 1]);
      }
      const auto words = static_cast<std::int64_t>(c.WordCount());
      CHECK(sum == (pos == BoundaryPosition::kCombined ? 2 * words : words));
      CHECK(dist.shape == ClassifyShape(dist.r_squared, dist.cv));
    }
  }

  Corpus empty = uniform;
  empty.sentences.clear();
  CHECK(ErrorOf([&] { BoundaryDistributionOf(empty); }) == ErrorCode::kNoWords);
}
