#include "scriptforge/grille.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "scriptforge/errors.h"
#include "scriptforge/random.h"

namespace scriptforge {
namespace {

constexpr std::pair<GrilleMode, std::string_view> kModeNames[] = {
    {GrilleMode::kRandom, "random"},
    {GrilleMode::kShift, "shift"},
    {GrilleMode::kRotate, "rotate"},
    {GrilleMode::kSequential, "sequential"},
};

constexpr std::pair<GrilleSpecialization, std::string_view> kSpecNames[] = {
    {GrilleSpecialization::kSplit, "split"},
    {GrilleSpecialization::kUniform, "uniform"},
    {GrilleSpecialization::kBlankGradient, "blank_gradient"},
    {GrilleSpecialization::kLearned, "learned"},
    {GrilleSpecialization::kSourceRows, "source_rows"},
};

std::vector<std::string> Unique(std::vector<std::string> items) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto& g : items) {
    if (seen.insert(g).second) out.push_back(std::move(g));
  }
  return out;
}

std::vector<std::string> Concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return Unique(std::move(out));
}

std::vector<std::string> Head(const std::vector<std::string>& items, int n) {
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)),
                                           items.size());
  return {items.begin(), items.begin() + static_cast<std::ptrdiff_t>(count)};
}

void Validate(const GrilleConfig& c) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidConfig, "grille: " + msg);
  };
  if (c.cols < 1) fail("cols must be positive");
  if (c.specialization != GrilleSpecialization::kSourceRows && c.rows < 1) {
    fail("rows must be positive");
  }
  if (c.n_holes < 1 || c.n_holes > c.cols) fail("n_holes must be in [1, cols]");
  for (int h : c.holes) {
    if (h < 0 || h >= c.cols) fail("hole column out of range");
  }
  auto unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!unit(c.blank_prob) || !unit(c.blank_prob_low) || !unit(c.blank_prob_high)) {
    fail("blank probabilities must lie in [0, 1]");
  }
  if (!unit(c.jump_prob)) fail("jump_prob must lie in [0, 1]");
  if (c.column_skew_alpha < 0) fail("column_skew_alpha must be non-negative");
}

// Distribution over one column: graphemes plus an optional blank weight.
struct ColumnModel {
  std::vector<std::string> graphemes;
  DiscreteSampler sampler;  // over graphemes, then blank if present
  bool has_blank = false;
};

ColumnModel ZipfColumn(const std::vector<std::string>& pool, double alpha) {
  if (pool.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "grille: empty column pool");
  }
  ColumnModel m;
  m.graphemes = pool;
  const auto w = ZipfWeights(pool.size(), alpha);
  m.sampler = DiscreteSampler(w);
  return m;
}

std::vector<ColumnModel> LearnedColumns(const Corpus& source, int cols) {
  std::vector<std::map<std::string, std::int64_t>> counts(static_cast<std::size_t>(cols));
  std::vector<std::int64_t> blanks(static_cast<std::size_t>(cols), 0);
  for (const auto& sentence : source.sentences) {
    for (const auto& word : sentence) {
      for (int j = 0; j < cols; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (uj < word.size()) {
          ++counts[uj][source.alphabet->Spelling(word[uj])];
        } else {
          ++blanks[uj];
        }
      }
    }
  }
  std::vector<ColumnModel> out;
  for (int j = 0; j < cols; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    ColumnModel m;
    std::vector<double> w;
    for (const auto& [g, n] : counts[uj]) {
      m.graphemes.push_back(g);
      w.push_back(static_cast<double>(n));
    }
    m.has_blank = true;
    w.push_back(static_cast<double>(blanks[uj]));
    m.sampler = DiscreteSampler(w);
    out.push_back(std::move(m));
  }
  return out;
}

double ColumnBlankProb(const GrilleConfig& c, int col) {
  if (c.specialization != GrilleSpecialization::kBlankGradient) return c.blank_prob;
  if (c.cols == 1) return c.blank_prob_low;
  const double t = static_cast<double>(col) / static_cast<double>(c.cols - 1);
  return c.blank_prob_low + t * (c.blank_prob_high - c.blank_prob_low);
}

std::vector<std::string> DefaultUniformPool() {
  return Concat({LoadGraphemeList(DataPath("pools/prefix.txt")),
                 LoadGraphemeList(DataPath("pools/shared.txt")),
                 LoadGraphemeList(DataPath("pools/suffix.txt")),
                 LoadGraphemeList(DataPath("pools/medial.txt"))});
}

std::vector<int> ParseIntList(const std::vector<std::string>& items,
                              const std::string& source) {
  std::vector<int> out;
  for (const auto& item : items) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig,
                  source + ": 'holes' entry '" + item + "' is not an integer");
    }
  }
  return out;
}

// Walks table positions according to the mode.
class Traversal {
 public:
  Traversal(const GrilleConfig& config, const GrilleTable& table,
            std::vector<int> holes, std::uint64_t seed)
      : config_(config), table_(table), holes_(std::move(holes)),
        rng_(seed) {
    for (int offset = 0; offset < table.cols; ++offset) {
      std::vector<int> cols;
      for (int h : holes_) cols.push_back((h + offset) % table.cols);
      std::sort(cols.begin(), cols.end());
      if (seen_rotations_.insert(cols).second) rotations_.push_back(offset);
    }
    if (config.mode == GrilleMode::kSequential) {
      row_ = static_cast<int>(rng_.UniformIndex(static_cast<std::size_t>(table.rows)));
    }
  }

  // Next non-empty extraction; throws when the table yields only blanks.
  std::string NextWord() {
    const std::size_t limit =
        16 * static_cast<std::size_t>(table_.rows) * static_cast<std::size_t>(table_.cols) + 1024;
    for (std::size_t attempt = 0; attempt < limit; ++attempt) {
      Position();
      std::string word;
      for (int h : holes_) {
        word += table_.At(row_, (h + offset_) % table_.cols);
      }
      if (!word.empty()) return word;
    }
    throw Error(ErrorCode::kInvalidConfig,
                "grille: table yields only empty extractions");
  }

 private:
  // Chooses the position for the next extraction.
  void Position() {
    const auto rows = static_cast<std::size_t>(table_.rows);
    if (!started_) {
      started_ = true;
      if (config_.mode == GrilleMode::kRandom) row_ = static_cast<int>(rng_.UniformIndex(rows));
      return;
    }
    switch (config_.mode) {
      case GrilleMode::kRandom:
        row_ = static_cast<int>(rng_.UniformIndex(rows));
        break;
      case GrilleMode::kShift:
        offset_ = (offset_ + 1) % table_.cols;
        if (offset_ == 0) row_ = (row_ + 1) % table_.rows;
        break;
      case GrilleMode::kRotate:
        rotation_ = (rotation_ + 1) % rotations_.size();
        offset_ = rotations_[rotation_];
        if (rotation_ == 0) row_ = (row_ + 1) % table_.rows;
        break;
      case GrilleMode::kSequential:
        if (rng_.Bernoulli(config_.jump_prob)) {
          row_ = static_cast<int>(rng_.UniformIndex(rows));
        } else {
          row_ = (row_ + 1) % table_.rows;
        }
        break;
    }
  }

  const GrilleConfig& config_;
  const GrilleTable& table_;
  std::vector<int> holes_;
  Rng rng_;
  std::vector<int> rotations_;
  std::set<std::vector<int>> seen_rotations_;
  std::size_t rotation_ = 0;
  int row_ = 0;
  int offset_ = 0;
  bool started_ = false;
};

}  // namespace

std::string_view GrilleModeName(GrilleMode mode) {
  for (const auto& [value, name] : kModeNames) {
    if (value == mode) return name;
  }
  return "unknown";
}

GrilleMode ParseGrilleMode(std::string_view name) {
  for (const auto& [value, text] : kModeNames) {
    if (text == name) return value;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown grille mode '" + std::string(name) + "'");
}

std::string_view GrilleSpecializationName(GrilleSpecialization s) {
  for (const auto& [value, name] : kSpecNames) {
    if (value == s) return name;
  }
  return "unknown";
}

GrilleSpecialization ParseGrilleSpecialization(std::string_view name) {
  for (const auto& [value, text] : kSpecNames) {
    if (text == name) return value;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown grille specialization '" + std::string(name) + "'");
}

GrilleConfig DefaultGrilleConfig() {
  GrilleConfig c;
  c.prefix_pool = LoadGraphemeList(DataPath("pools/prefix.txt"));
  c.suffix_pool = LoadGraphemeList(DataPath("pools/suffix.txt"));
  c.shared_pool = LoadGraphemeList(DataPath("pools/shared.txt"));
  c.uniform_pool = DefaultUniformPool();
  return c;
}

Corpus RandomSourceCorpus(const std::vector<std::string>& pool,
                          std::size_t n_words, std::uint64_t seed) {
  if (pool.empty()) throw Error(ErrorCode::kInvalidConfig, "random source needs a pool");
  Rng rng(seed);
  CorpusBuilder builder("random-source", Tokenization::kEvaLongestMatch);
  std::vector<std::vector<std::string>> sentence;
  for (std::size_t i = 0; i < n_words; ++i) {
    const std::size_t length = 2 + rng.UniformIndex(7);
    std::vector<std::string> word;
    for (std::size_t j = 0; j < length; ++j) word.push_back(pool[rng.UniformIndex(pool.size())]);
    sentence.push_back(std::move(word));
    if (sentence.size() == 10 || i + 1 == n_words) {
      builder.AddSentence(sentence);
      sentence.clear();
    }
  }
  return std::move(builder).Build();
}

GrilleConfig GrilleConfigFromFile(const ConfigFile& file,
                                  const std::filesystem::path& base_dir) {
  file.RequireKnown({"generator", "rows", "cols", "n_holes", "holes",
                     "blank_prob", "blank_prob_low", "blank_prob_high",
                     "column_skew_alpha", "mode", "specialization", "jump_prob",
                     "n_shared", "prefix_pool", "suffix_pool", "shared_pool",
                     "uniform_pool", "source", "source_scheme", "source_words",
                     "source_seed"});
  GrilleConfig c = DefaultGrilleConfig();
  c.rows = static_cast<int>(file.GetInt("rows", c.rows));
  c.cols = static_cast<int>(file.GetInt("cols", c.cols));
  c.n_holes = static_cast<int>(file.GetInt("n_holes", c.n_holes));
  if (file.Has("holes")) {
    c.holes = ParseIntList(file.GetList("holes"), file.source());
    c.n_holes = static_cast<int>(c.holes.size());
  }
  c.blank_prob = file.GetDouble("blank_prob", c.blank_prob);
  c.blank_prob_low = file.GetDouble("blank_prob_low", c.blank_prob_low);
  c.blank_prob_high = file.GetDouble("blank_prob_high", c.blank_prob_high);
  c.column_skew_alpha = file.GetDouble("column_skew_alpha", c.column_skew_alpha);
  c.mode = ParseGrilleMode(file.GetString("mode", "random"));
  c.specialization = ParseGrilleSpecialization(file.GetString("specialization", "split"));
  c.jump_prob = file.GetDouble("jump_prob", c.jump_prob);
  c.n_shared = static_cast<int>(file.GetInt("n_shared", c.n_shared));
  if (file.Has("prefix_pool")) c.prefix_pool = file.GetList("prefix_pool");
  if (file.Has("suffix_pool")) c.suffix_pool = file.GetList("suffix_pool");
  if (file.Has("shared_pool")) c.shared_pool = file.GetList("shared_pool");
  if (file.Has("uniform_pool")) c.uniform_pool = file.GetList("uniform_pool");

  if (auto source = file.Find("source")) {
    if (*source == "random") {
      const auto words = static_cast<std::size_t>(file.GetInt("source_words", 200000));
      const auto seed = static_cast<std::uint64_t>(file.GetInt("source_seed", 1));
      c.source = std::make_shared<const Corpus>(RandomSourceCorpus(c.uniform_pool, words, seed));
      c.source_label = "random";
    } else {
      std::filesystem::path path = *source;
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      LoadOptions options;
      const auto scheme = file.GetString("source_scheme", "chars");
      if (scheme == "eva") {
        options.scheme = Tokenization::kEvaLongestMatch;
        options.inventory = &DefaultEvaInventory();
      } else if (scheme != "chars") {
        throw Error(ErrorCode::kInvalidConfig,
                    file.source() + ": source_scheme must be eva or chars");
      }
      c.source = std::make_shared<const Corpus>(LoadCorpus(path, options).corpus);
      c.source_label = *source;
    }
  }
  Validate(c);
  return c;
}

std::map<std::string, std::string> DescribeGrilleConfig(const GrilleConfig& c) {
  std::map<std::string, std::string> out;
  out["generator"] = "grille";
  out["rows"] = std::to_string(c.rows);
  out["cols"] = std::to_string(c.cols);
  out["n_holes"] = std::to_string(c.n_holes);
  std::vector<std::string> holes;
  for (int h : GrilleHoles(c)) holes.push_back(std::to_string(h));
  out["holes"] = JoinList(holes);
  out["blank_prob"] = FormatNumber(c.blank_prob);
  out["blank_prob_low"] = FormatNumber(c.blank_prob_low);
  out["blank_prob_high"] = FormatNumber(c.blank_prob_high);
  out["column_skew_alpha"] = FormatNumber(c.column_skew_alpha);
  out["mode"] = std::string(GrilleModeName(c.mode));
  out["specialization"] = std::string(GrilleSpecializationName(c.specialization));
  out["jump_prob"] = FormatNumber(c.jump_prob);
  out["n_shared"] = std::to_string(c.n_shared);
  out["prefix_pool"] = JoinList(c.prefix_pool);
  out["suffix_pool"] = JoinList(c.suffix_pool);
  out["shared_pool"] = JoinList(c.shared_pool);
  out["uniform_pool"] = JoinList(c.uniform_pool);
  if (!c.source_label.empty()) out["source"] = c.source_label;
  return out;
}

std::vector<int> GrilleHoles(const GrilleConfig& config) {
  if (!config.holes.empty()) {
    auto holes = config.holes;
    std::sort(holes.begin(), holes.end());
    holes.erase(std::unique(holes.begin(), holes.end()), holes.end());
    return holes;
  }
  std::vector<int> holes;
  for (int i = 0; i < config.n_holes; ++i) {
    holes.push_back(static_cast<int>(
        static_cast<long long>(i) * config.cols / config.n_holes));
  }
  return holes;
}

GrilleTable BuildGrilleTable(const GrilleConfig& config, std::uint64_t seed) {
  Validate(config);
  const bool needs_source = config.specialization == GrilleSpecialization::kLearned ||
                            config.specialization == GrilleSpecialization::kSourceRows;
  if (needs_source && !config.source) {
    throw Error(ErrorCode::kMissingSource,
                std::string(GrilleSpecializationName(config.specialization)) +
                    " grille needs a source corpus");
  }
  GrilleTable table;
  table.cols = config.cols;

  if (config.specialization == GrilleSpecialization::kSourceRows) {
    const Corpus& source = *config.source;
    for (const auto& sentence : source.sentences) {
      for (const auto& word : sentence) {
        for (int j = 0; j < config.cols; ++j) {
          const auto uj = static_cast<std::size_t>(j);
          table.cells.push_back(uj < word.size() ? source.alphabet->Spelling(word[uj])
                                                 : std::string());
        }
        ++table.rows;
      }
    }
    return table;
  }

  std::vector<ColumnModel> columns;
  switch (config.specialization) {
    case GrilleSpecialization::kSplit: {
      // Shared graphemes hold the top ranks of every column; the remaining
      // ranks are permuted per column.
      const auto shared = Head(config.shared_pool, config.n_shared);
      Rng order(DeriveSeed(seed, 0x0c01));
      const int left = (config.cols + 1) / 2;
      for (int j = 0; j < config.cols; ++j) {
        auto own = Concat({j < left ? config.prefix_pool : config.suffix_pool});
        std::erase_if(own, [&](const std::string& g) {
          return std::find(shared.begin(), shared.end(), g) != shared.end();
        });
        order.Shuffle(std::span<std::string>(own));
        columns.push_back(ZipfColumn(Concat({shared, own}), config.column_skew_alpha));
      }
      break;
    }
    case GrilleSpecialization::kUniform:
    case GrilleSpecialization::kBlankGradient: {
      const auto pool = ZipfColumn(config.uniform_pool, config.column_skew_alpha);
      columns.assign(static_cast<std::size_t>(config.cols), pool);
      break;
    }
    case GrilleSpecialization::kLearned:
      columns = LearnedColumns(*config.source, config.cols);
      break;
    case GrilleSpecialization::kSourceRows:
      break;
  }

  Rng rng(DeriveSeed(seed, 0x6711));
  table.rows = config.rows;
  table.cells.reserve(static_cast<std::size_t>(config.rows) *
                      static_cast<std::size_t>(config.cols));
  for (int r = 0; r < config.rows; ++r) {
    for (int j = 0; j < config.cols; ++j) {
      const auto& column = columns[static_cast<std::size_t>(j)];
      const std::size_t pick = column.sampler.Sample(rng);
      const bool blank = pick >= column.graphemes.size() ||
                         rng.Bernoulli(ColumnBlankProb(config, j));
      table.cells.push_back(blank ? std::string() : column.graphemes[pick]);
    }
  }
  return table;
}

GeneratedCorpus GenerateGrilleCorpus(const GrilleConfig& config,
                                     std::size_t n_words, std::uint64_t seed,
                                     const LengthModel& lengths,
                                     const GraphemeInventory& inventory) {
  if (n_words == 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_words must be positive");
  }
  const GrilleTable table = BuildGrilleTable(config, seed);
  if (table.rows < 1) throw Error(ErrorCode::kMissingSource, "grille source has no words");
  Traversal walk(config, table, GrilleHoles(config), DeriveSeed(seed, 0x7a1));
  std::vector<std::string> words;
  words.reserve(n_words);
  for (std::size_t i = 0; i < n_words; ++i) words.push_back(walk.NextWord());
  Rng rng(DeriveSeed(seed, 0x5e7));
  auto sentences = CutSentences(std::move(words), lengths, rng);
  return AssembleGenerated(sentences, inventory, "grille",
                           DescribeGrilleConfig(config), seed);
}

}  // namespace scriptforge
