#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "scriptforge/cross_boundary.h"
#include "scriptforge/evaluate.h"
#include "scriptforge/generator.h"
#include "scriptforge/grille.h"
#include "scriptforge/naibbe.h"
#include "scriptforge/positional.h"
#include "scriptforge/slot_generator.h"
#include "test_util.h"

using namespace scriptforge;
using testing::ErrorOf;

namespace {

std::vector<std::string> Flatten(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& s : c.sentences) {
    for (const auto& w : s) out.push_back(c.Spell(w));
  }
  return out;
}

// Every word re-tokenizes to the same string under the EVA inventory.
void CheckEvaRoundTrip(const GeneratedCorpus& g) {
  CHECK(g.dropped_words == 0);
  for (const auto& word : Flatten(g.corpus)) {
    std::string joined;
    for (const auto& t : TokenizeEva(word, DefaultEvaInventory())) joined += t;
    REQUIRE(joined == word);
  }
}

SlotConfig TinySlots() {
  SlotConfig c;
  c.prefix_slots = {{"a", "b"}, {"c"}};
  c.suffix_slots = {{"x", "y"}};
  c.bridge_zone = 0;
  c.vocab_size = 4;
  c.markov_top_k = 4;
  c.preferred_pairs = 1;
  return c;
}

NaibbeConfig TinyNaibbe() {
  NaibbeConfig c;
  c.unigram_table = {{'a', {{"qo"}}}, {'b', {{"dy"}}}};
  // b + b spells dy, the unigram word for b.
  c.bigram_prefix_pool = {{'a', {{"ch"}}}, {'b', {{"d"}}}};
  c.bigram_suffix_pool = {{'a', {{"o"}}}, {'b', {{"y"}}}};
  return c;
}

}  // namespace

TEST_CASE("Slot lexicon enumerates the slot product") {
  const auto lex = BuildSlotLexicon(TinySlots(), 1);
  std::set<std::string> words;
  for (const auto& w : lex.words) {
    std::string s;
    for (const auto& g : w) s += g;
    words.insert(s);
  }
  CHECK(words == std::set<std::string>{"acx", "acy", "bcx", "bcy"});
  REQUIRE(lex.weights.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(lex.weights[r] / lex.weights[0] == doctest::Approx(std::pow(r + 1.0, -1.5)));
  }

  auto flat = TinySlots();
  flat.word_zipf_alpha = 0;
  for (double w : BuildSlotLexicon(flat, 1).weights) CHECK(w == doctest::Approx(1.0));

  auto big = TinySlots();
  big.prefix_slots = {{"a", "b"}};
  big.vocab_size = 10;
  CHECK(ErrorOf([&] { BuildSlotLexicon(big, 1); }) == ErrorCode::kPoolExhausted);
}

TEST_CASE("Slot corpus is deterministic and tokenizes cleanly") {
  const auto config = DefaultSlotConfig();
  const auto lengths = LengthModel::Default();
  const auto a = GenerateSlotCorpus(config, 3000, 5, lengths, DefaultEvaInventory());
  const auto b = GenerateSlotCorpus(config, 3000, 5, lengths, DefaultEvaInventory());
  CHECK(FormatCorpus(a.corpus) == FormatCorpus(b.corpus));
  CHECK(a.corpus.WordCount() == 3000);
  CHECK(a.generator == "slot");
  CHECK(a.seed == 5);
  CheckEvaRoundTrip(a);
  CHECK(ErrorOf([&] { GenerateSlotCorpus(config, 0, 5, lengths, DefaultEvaInventory()); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("Dense unweighted slot chain has no boundary information") {
  auto config = DefaultSlotConfig();
  config.markov_top_k = config.vocab_size;
  config.boundary_pair_strength = 1.0;
  const auto g = GenerateSlotCorpus(config, 200000, 8, LengthModel::Default(),
                                    DefaultEvaInventory());
  const double mi = MutualInformation(ExtractTransitions(g.corpus, 1));
  const double shuffled =
      MutualInformation(ExtractTransitions(ShuffleWords(g.corpus, 3), 1));
  CHECK(mi < 0.01);
  CHECK(std::abs(mi - shuffled) < 0.005);
}

TEST_CASE("Single-pool slot E->S matches the class-marginal product") {
  const auto config = WithAblation(DefaultSlotConfig(), SlotAblation::kSinglePool);
  const auto g = GenerateSlotCorpus(config, 100000, 9, LengthModel::Default(),
                                    DefaultEvaInventory());
  const Corpus& c = g.corpus;
  const auto pc = Classify(c);
  double end_final = 0, start_initial = 0, pairs = 0;
  for (const auto& s : c.sentences) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      pairs += 1;
      end_final += pc.ClassOf(s[i].back()) == PositionalClass::kEnd;
      start_initial += pc.ClassOf(s[i + 1].front()) == PositionalClass::kStart;
    }
  }
  const double product = 100 * (end_final / pairs) * (start_initial / pairs);
  CHECK(std::abs(EndToStartRate(c, pc) - product) < 3.0);
}

TEST_CASE("Slot config files") {
  const auto file = ConfigFile::Parse("generator = slot\nablation = near_miss\nvocab_size = 500\n");
  const auto config = SlotConfigFromFile(file);
  CHECK(config.ablation == SlotAblation::kNearMiss);
  CHECK(config.zipf_alpha == 2.0);
  CHECK(config.vocab_size == 500);
  CHECK(ErrorOf([] { SlotConfigFromFile(ConfigFile::Parse("generator = slot\nbogus = 1\n")); }) ==
        ErrorCode::kInvalidConfig);
  for (auto a : AllSlotAblations()) CHECK(ParseSlotAblation(SlotAblationName(a)) == a);
}

TEST_CASE("Uniform grille cells are uniform over the pool") {
  GrilleConfig config = DefaultGrilleConfig();
  config.specialization = GrilleSpecialization::kUniform;
  config.uniform_pool = {"a", "b", "c", "d"};
  config.blank_prob = 0;
  config.rows = 5000;
  config.cols = 4;
  config.n_holes = 4;
  const auto table = BuildGrilleTable(config, 3);
  std::map<std::string, double> counts;
  for (const auto& cell : table.cells) counts[cell] += 1;
  CHECK(counts.size() == 4);
  const double n = static_cast<double>(table.cells.size());
  for (const auto& [g, k] : counts) {
    CHECK(std::abs(k / n - 0.25) < 3 * std::sqrt(0.25 * 0.75 / n));
  }
}

TEST_CASE("Heavy column skew makes every column constant") {
  GrilleConfig config = DefaultGrilleConfig();
  config.blank_prob = 0;
  config.column_skew_alpha = 80;
  config.rows = 40;
  const auto table = BuildGrilleTable(config, 4);
  for (int j = 0; j < table.cols; ++j) {
    for (int r = 1; r < table.rows; ++r) CHECK(table.At(r, j) == table.At(0, j));
  }
}

TEST_CASE("Grille tables need their source") {
  GrilleConfig config = DefaultGrilleConfig();
  config.specialization = GrilleSpecialization::kLearned;
  CHECK(ErrorOf([&] { BuildGrilleTable(config, 1); }) == ErrorCode::kMissingSource);
  config.specialization = GrilleSpecialization::kSourceRows;
  CHECK(ErrorOf([&] { BuildGrilleTable(config, 1); }) == ErrorCode::kMissingSource);
  config.specialization = GrilleSpecialization::kSplit;
  config.n_holes = config.cols + 1;
  CHECK(ErrorOf([&] { BuildGrilleTable(config, 1); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("Learned grille columns follow source position marginals") {
  CorpusBuilder b("english", Tokenization::kCharacter);
  const std::string letters = SyntheticPlaintext(60000, 2);
  Rng rng(6);
  std::vector<std::string> words;
  for (std::size_t i = 0; i < letters.size();) {
    const std::size_t len = 2 + rng.UniformIndex(6);
    words.push_back(letters.substr(i, len));
    i += len;
  }
  b.AddRawSentence(words, nullptr);
  auto source = std::make_shared<const Corpus>(std::move(b).Build());

  std::map<std::string, double> first;
  for (const auto& w : source->sentences[0]) first[source->alphabet->Spelling(w.front())] += 1;

  GrilleConfig config = DefaultGrilleConfig();
  config.specialization = GrilleSpecialization::kLearned;
  config.source = source;
  config.blank_prob = 0;
  config.rows = 20000;
  const auto table = BuildGrilleTable(config, 5);
  std::map<std::string, double> column;
  for (int r = 0; r < table.rows; ++r) column[table.At(r, 0)] += 1;

  const double n_src = static_cast<double>(source->sentences[0].size());
  const double n_tab = table.rows;
  for (const auto& [g, k] : first) {
    const double p = k / n_src;
    const double se = std::sqrt(p * (1 - p) * (1 / n_src + 1 / n_tab));
    CHECK(std::abs(column[g] / n_tab - p) <= 3 * se + 1e-12);
  }
}

TEST_CASE("Rotate mode over a fixed table is periodic") {
  GrilleConfig config = DefaultGrilleConfig();
  config.mode = GrilleMode::kRotate;
  config.blank_prob = 0;
  config.rows = 5;
  config.cols = 6;
  config.holes = {0, 3};
  config.n_holes = 2;
  // Offsets 0..5 give {0,3}, {1,4}, {2,5} and then repeat.
  const int period = 3 * config.rows;
  LengthModel one({{1, 1.0}});
  const auto g = GenerateGrilleCorpus(config, 6 * period, 2, one, DefaultEvaInventory());
  const auto words = Flatten(g.corpus);
  REQUIRE(words.size() == static_cast<std::size_t>(6 * period));
  for (std::size_t i = 0; i + period < words.size(); ++i) CHECK(words[i] == words[i + period]);
}

TEST_CASE("Shift mode walks columns before rows") {
  GrilleConfig config = DefaultGrilleConfig();
  config.mode = GrilleMode::kShift;
  config.specialization = GrilleSpecialization::kUniform;
  config.blank_prob = 0;
  config.rows = 3;
  config.cols = 4;
  config.holes = {0};
  config.n_holes = 1;
  const auto table = BuildGrilleTable(config, 7);
  const auto g = GenerateGrilleCorpus(config, 12, 7, LengthModel({{1, 1.0}}),
                                      DefaultEvaInventory());
  const auto words = Flatten(g.corpus);
  for (int i = 0; i < 12; ++i) CHECK(words[i] == table.At(i / 4, i % 4));
}

TEST_CASE("Grille skew lowers E->S and raises CV") {
  const auto lengths = LengthModel::Default();
  std::vector<double> es, cv;
  for (double alpha : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    GrilleConfig config = DefaultGrilleConfig();
    config.column_skew_alpha = alpha;
    double e = 0, v = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto g = GenerateGrilleCorpus(config, 8000, seed, lengths, DefaultEvaInventory());
      const auto report = EvaluateCorpus(g.corpus);
      e += report.e_to_s / 4;
      v += report.cv / 4;
    }
    es.push_back(e);
    cv.push_back(v);
  }
  for (std::size_t i = 1; i < es.size(); ++i) {
    CHECK(es[i] <= es[i - 1]);
    CHECK(cv[i] >= cv[i - 1]);
  }
}

TEST_CASE("Grille corpora are deterministic and tokenize cleanly") {
  GrilleConfig config = DefaultGrilleConfig();
  const auto a = GenerateGrilleCorpus(config, 2000, 11, LengthModel::Default(),
                                      DefaultEvaInventory());
  const auto b = GenerateGrilleCorpus(config, 2000, 11, LengthModel::Default(),
                                      DefaultEvaInventory());
  CHECK(FormatCorpus(a.corpus) == FormatCorpus(b.corpus));
  CHECK(a.corpus.WordCount() == 2000);
  CheckEvaRoundTrip(a);
}

TEST_CASE("Respacing") {
  NaibbeConfig c = TinyNaibbe();
  c.bigram_prob = 0;
  for (const auto& t : RespacePlaintext("abcde", c, 1)) CHECK(t.size() == 1);
  c.bigram_prob = 1;
  const auto pairs = RespacePlaintext("abcdef", c, 1);
  CHECK(pairs == std::vector<std::string>{"ab", "cd", "ef"});
  CHECK(RespacePlaintext("abc", c, 1) == std::vector<std::string>{"ab", "c"});
  CHECK(ErrorOf([&] { RespacePlaintext("", c, 1); }) == ErrorCode::kEmptyPlaintext);

  c.bigram_prob = 0.53;
  const std::string letters = SyntheticPlaintext(100000, 3);
  const auto tokens = RespacePlaintext(letters, c, 4);
  std::string joined;
  double unigrams = 0;
  for (const auto& t : tokens) {
    joined += t;
    unigrams += t.size() == 1;
  }
  CHECK(joined == letters);
  CHECK(unigrams / tokens.size() == doctest::Approx(0.47).epsilon(0.02));
}

TEST_CASE("Plaintext helpers") {
  CHECK(PlaintextLetters("Call me, Ishmael!") == "callmeishmael");
  const auto s = SyntheticPlaintext(5000, 9);
  CHECK(s.size() == 5000);
  CHECK(s == SyntheticPlaintext(5000, 9));
  CHECK(std::all_of(s.begin(), s.end(), [](char ch) { return ch >= 'a' && ch <= 'z'; }));
}

TEST_CASE("Default Naibbe pools are disjoint and complete") {
  const auto c = DefaultNaibbeConfig();
  std::set<std::string> prefixes, suffixes;
  for (const auto& [letter, alts] : c.bigram_prefix_pool) {
    for (const auto& a : alts) prefixes.insert(a.glyphs);
  }
  for (const auto& [letter, alts] : c.bigram_suffix_pool) {
    for (const auto& a : alts) suffixes.insert(a.glyphs);
  }
  for (const auto& p : prefixes) CHECK(suffixes.count(p) == 0);
  for (char letter = 'a'; letter <= 'z'; ++letter) {
    CHECK(c.unigram_table.count(letter) == 1);
    CHECK(c.bigram_prefix_pool.count(letter) == 1);
    CHECK(c.bigram_suffix_pool.count(letter) == 1);
  }
  CHECK(ErrorOf([] {
          NaibbeConfigFromFile(ConfigFile::Parse("generator = naibbe\nprefix.a = qo\nsuffix.b = qo\n"));
        }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("Ambiguous bigrams") {
  const auto c = TinyNaibbe();
  const auto& inv = DefaultEvaInventory();
  CHECK_FALSE(IsAmbiguousBigram(c, "ch", "o", inv));
  // e + e reads back as the single grapheme ee.
  CHECK(IsAmbiguousBigram(c, "e", "e", inv));
  CHECK(IsAmbiguousBigram(c, "d", "y", inv));

  auto clash = c;
  clash.unigram_table['a'] = {{"cho"}};
  CHECK(IsAmbiguousBigram(clash, "ch", "o", inv));

  // chok splits as ch|ok and as cho|k.
  auto split = c;
  split.bigram_prefix_pool = {{'a', {{"ch"}, {"cho"}}}};
  split.bigram_suffix_pool = {{'a', {{"ok"}, {"k"}}}};
  CHECK(IsAmbiguousBigram(split, "ch", "ok", inv));
}

TEST_CASE("Naibbe encryption") {
  auto c = TinyNaibbe();
  const LengthModel lengths({{3, 1.0}});
  const auto& inv = DefaultEvaInventory();
  const auto g = EncryptNaibbe({"a", "b", "aa", "a", "b", "aa"}, c, 1, lengths, inv);
  CHECK(Flatten(g.corpus) == std::vector<std::string>{"qo", "dy", "cho", "qo", "dy", "cho"});
  CHECK(g.generator == "naibbe");

  // Only ambiguous spellings exist for bb.
  CHECK(ErrorOf([&] { EncryptNaibbe({"bb"}, c, 1, lengths, inv); }) ==
        ErrorCode::kNoUnambiguousAlternative);
  c.unambiguous_mode = false;
  CHECK(Flatten(EncryptNaibbe({"bb"}, c, 1, lengths, inv).corpus) ==
        std::vector<std::string>{"dy"});
  CHECK(ErrorOf([&] { EncryptNaibbe({"z"}, c, 1, lengths, inv); }) == ErrorCode::kInvalidConfig);
  CHECK(ErrorOf([&] { EncryptNaibbe({}, c, 1, lengths, inv); }) == ErrorCode::kEmptyPlaintext);
}

TEST_CASE("Default Naibbe output is deterministic, clean and card-independent") {
  const auto config = DefaultNaibbeConfig();
  const auto tokens = RespacePlaintext(SyntheticPlaintext(60000, 1), config, 2);
  const auto a = EncryptNaibbe(tokens, config, 3, LengthModel::Default(), DefaultEvaInventory());
  const auto b = EncryptNaibbe(tokens, config, 3, LengthModel::Default(), DefaultEvaInventory());
  CHECK(FormatCorpus(a.corpus) == FormatCorpus(b.corpus));
  CHECK(a.corpus.WordCount() == tokens.size());
  CheckEvaRoundTrip(a);

  const double mi = MutualInformation(ExtractTransitions(a.corpus, 1));
  double shuffled = 0;
  for (int r = 0; r < 5; ++r) {
    shuffled += MutualInformation(ExtractTransitions(ShuffleWords(a.corpus, r), 1)) / 5;
  }
  CHECK(mi - shuffled < 0.01);
}

TEST_CASE("LoadGenerator dispatches on the generator key") {
  const auto slot = LoadGenerator(ConfigFile::Parse("generator = slot\n"));
  CHECK(slot.kind == "slot");
  const auto first = slot.generate(500, 3);
  CHECK(first.corpus.WordCount() == 500);

  // The effective config rebuilds the same generator.
  ConfigFile again = ConfigFile::Parse("");
  for (const auto& [k, v] : slot.config) again.Set(k, v);
  CHECK(FormatCorpus(LoadGenerator(again).generate(500, 3).corpus) == FormatCorpus(first.corpus));

  const auto naibbe = LoadGenerator(ConfigFile::Parse(
      "generator = naibbe\nplaintext = synthetic\nplaintext_letters = 5000\n"));
  CHECK(naibbe.generate(1000, 1).corpus.WordCount() == 1000);
  CHECK(ErrorOf([&] { naibbe.generate(100000, 1); }) == ErrorCode::kInvalidConfig);

  CHECK(ErrorOf([] { LoadGenerator(ConfigFile::Parse("generator = nope\n")); }) ==
        ErrorCode::kInvalidConfig);
}
