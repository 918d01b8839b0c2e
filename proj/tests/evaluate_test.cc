#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "scriptforge/cross_boundary.h"
#include "scriptforge/evaluate.h"
#include "scriptforge/random.h"
#include "test_util.h"

using namespace scriptforge;
using testing::ErrorOf;
using testing::MakeCorpus;

namespace {

SignatureReport RandomReport(Rng& rng) {
  SignatureReport r;
  r.e_to_s = 100 * rng.Uniform01();
  r.bilateral = rng.Bernoulli(0.5);
  r.mi = 0.2 * rng.Uniform01();
  r.r_squared = rng.Uniform01();
  r.cv = 1.6 * rng.Uniform01();
  return r;
}

// Mixed corpus whose boundary profile is strongly polarized.
Corpus Polarized(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::string>> raw;
  for (int s = 0; s < 200; ++s) {
    std::vector<std::string> words;
    for (int w = 0; w < 6; ++w) {
      std::string word(1, static_cast<char>('a' + rng.UniformIndex(3)));
      word += static_cast<char>('m' + rng.UniformIndex(4));
      word += static_cast<char>('x' + rng.UniformIndex(3));
      words.push_back(word);
    }
    raw.push_back(words);
  }
  return MakeCorpus(raw);
}

}  // namespace

TEST_CASE("Verdict rules") {
  CHECK(RangeVerdict(72, 80, 70, 95) == Verdict::kPass);
  CHECK(RangeVerdict(65, 75, 70, 95) == Verdict::kMarginal);
  CHECK(RangeVerdict(90, 99, 70, 95) == Verdict::kMarginal);
  CHECK(RangeVerdict(40, 60, 70, 95) == Verdict::kFail);
  CHECK(RangeVerdict(96, 99, 70, 95) == Verdict::kFail);
  CHECK(RangeVerdict(70, 95, 70, 95) == Verdict::kPass);

  CHECK(AboveVerdict(0.12, 0.2, 0.1) == Verdict::kPass);
  CHECK(AboveVerdict(0.05, 0.12, 0.1) == Verdict::kMarginal);
  CHECK(AboveVerdict(0.01, 0.1, 0.1) == Verdict::kFail);
  CHECK(AboveVerdict(0.1, 0.2, 0.1) == Verdict::kMarginal);

  CHECK(VerdictSymbol(Verdict::kPass) == "✓");
  CHECK(VerdictSymbol(Verdict::kMarginal) == "∼");
  CHECK(VerdictSymbol(Verdict::kFail) == "×");
}

TEST_CASE("EvaluateCorpus thresholds") {
  const Corpus c = Polarized(1);
  const auto r = EvaluateCorpus(c);
  CHECK(r.words == c.WordCount());
  CHECK(r.passed[0] == (r.e_to_s >= 70 && r.e_to_s <= 95));
  CHECK(r.passed[1] == r.bilateral);
  CHECK(r.passed[2] == (r.mi > 0.10));
  CHECK(r.passed[3] == (r.shape == DistributionShape::kZipfian));
  CHECK(r.joint_score == JointScore(r.passed));
  // Every word opens with a-c and closes with x-z, and words are independent.
  CHECK(r.e_to_s == doctest::Approx(100.0));
  CHECK(r.mi < 0.05);
  CHECK_FALSE(r.passed[2]);

  SignatureThresholds strict;
  strict.sig1_high = 99;
  strict.sig1_low = 99;
  CHECK(EvaluateCorpus(c, strict).passed[0] == false);
}

TEST_CASE("Independent uniform words fail Sig3 and sit at the class product") {
  Rng rng(2);
  const Corpus c = testing::RandomCorpus(rng, 3000, 10, 6, 8);
  const auto r = EvaluateCorpus(c);
  CHECK_FALSE(r.passed[2]);
  CHECK(r.mi < 0.02);
  const auto pc = Classify(c);
  double end = 0, start = 0, pairs = 0;
  for (const auto& s : c.sentences) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      pairs += 1;
      end += pc.ClassOf(s[i].back()) == PositionalClass::kEnd;
      start += pc.ClassOf(s[i + 1].front()) == PositionalClass::kStart;
    }
  }
  CHECK(std::abs(r.e_to_s - 100 * (end / pairs) * (start / pairs)) < 2.0);
}

TEST_CASE("Joint score always equals the number of passing verdicts") {
  Rng rng(3);
  BatteryOptions options;
  options.bootstrap_replicates = 200;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SignatureReport> runs;
    const int n = 1 + static_cast<int>(rng.UniformIndex(10));
    for (int i = 0; i < n; ++i) runs.push_back(RandomReport(rng));
    options.seed = static_cast<std::uint64_t>(trial);
    const auto b = SummarizeBattery("t", runs, options);
    int passes = 0;
    for (Verdict v : b.verdicts) passes += v == Verdict::kPass;
    REQUIRE(b.joint_score == passes);
    REQUIRE(b.e_to_s.ci_low <= b.e_to_s.ci_high);
  }
}

TEST_CASE("Cohen's d") {
  std::vector<SignatureReport> runs(4);
  const double es[] = {70, 74, 78, 82};
  for (int i = 0; i < 4; ++i) runs[i].e_to_s = es[i];
  BatteryOptions options;
  options.bootstrap_replicates = 200;
  ReferenceValues ref;
  ref.e_to_s = 76.0;
  CHECK(*SummarizeBattery("t", runs, options, {}, ref).e_to_s.cohens_d == 0.0);
  ref.e_to_s = 80.6;
  const auto b = SummarizeBattery("t", runs, options, {}, ref);
  CHECK(*b.e_to_s.cohens_d == doctest::Approx((76.0 - 80.6) / b.e_to_s.sd));
  CHECK_FALSE(b.mi.cohens_d.has_value());
}

TEST_CASE("A one-run battery reproduces EvaluateCorpus") {
  const Corpus c = Polarized(4);
  BatteryOptions options;
  options.n_runs = 1;
  options.bootstrap_replicates = 100;
  const auto b = RunBattery("one", [&](std::size_t, std::uint64_t) { return c; }, options);
  const auto r = EvaluateCorpus(c);
  CHECK(b.e_to_s.mean == r.e_to_s);
  CHECK(b.mi.mean == r.mi);
  CHECK(b.r_squared.mean == r.r_squared);
  CHECK(b.cv.mean == r.cv);
  CHECK(b.sig2_pass_fraction == (r.bilateral ? 1.0 : 0.0));
}

TEST_CASE("Copies of one corpus give zero-width intervals") {
  const Corpus c = Polarized(5);
  BatteryOptions options;
  options.n_runs = 6;
  options.bootstrap_replicates = 200;
  const auto b = RunBattery("same", [&](std::size_t, std::uint64_t) { return c; }, options);
  for (const auto* m : {&b.e_to_s, &b.mi, &b.r_squared, &b.cv}) {
    CHECK(m->ci_low == doctest::Approx(m->mean));
    CHECK(m->ci_high == doctest::Approx(m->mean));
    CHECK(m->sd < 1e-12);
  }
}

TEST_CASE("Sweep") {
  BatteryOptions options;
  options.n_runs = 2;
  options.bootstrap_replicates = 100;
  CHECK(ErrorOf([&] { Sweep({}, options); }) == ErrorCode::kInvalidArgument);

  std::vector<SweepPoint> grid;
  for (int i = 0; i < 3; ++i) {
    grid.push_back({"p" + std::to_string(i),
                    [](std::size_t, std::uint64_t seed) { return Polarized(seed); }});
  }
  const auto results = Sweep(grid, options);
  REQUIRE(results.size() == 3);
  CHECK(results[1].label == "p1");

  const auto matrix = InterpretationMatrixCsv(results);
  CHECK(matrix.rfind("configuration,sig1_e_to_s,sig2_bilateral,sig3_mi,sig4_zipf,joint\n", 0) == 0);
  CHECK(matrix.find("p2,") != std::string::npos);
  const auto sweep = SweepCsv("alpha", {"0", "1", "2"}, results);
  CHECK(sweep.rfind("alpha,e_to_s_pct", 0) == 0);
  CHECK(ErrorOf([&] { SweepCsv("alpha", {"0"}, results); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("Thresholds and reference files") {
  const auto t = ThresholdsFromFile(ConfigFile::Parse("sig1_low = 60\nsig3_min_mi = 0.2\n"));
  CHECK(t.sig1_low == 60);
  CHECK(t.sig1_high == 95);
  CHECK(t.sig3_min_mi == 0.2);
  CHECK(ErrorOf([] { ThresholdsFromFile(ConfigFile::Parse("sig1_low = 99\nsig1_high = 1\n")); }) ==
        ErrorCode::kInvalidConfig);

  const auto dir = std::filesystem::temp_directory_path() / "scriptforge_evaluate_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "flat.json") << R"({"e_to_s": 80.6, "mi": 0.23})";
    std::ofstream(dir / "report.json") << R"({"results": {"signatures": {"cv": 1.1}}})";
    std::ofstream(dir / "empty.json") << R"({"other": 1})";
  }
  const auto flat = LoadReference(dir / "flat.json");
  CHECK(*flat.e_to_s == 80.6);
  CHECK(*flat.mi == 0.23);
  CHECK_FALSE(flat.cv.has_value());
  CHECK(*LoadReference(dir / "report.json").cv == 1.1);
  CHECK(ErrorOf([&] { LoadReference(dir / "empty.json"); }) == ErrorCode::kInvalidConfig);
  CHECK(ErrorOf([&] { LoadReference(dir / "missing.json"); }) == ErrorCode::kIoFailure);
  std::filesystem::remove_all(dir);
}
