#include "scriptforge/cross_boundary.h"

#include <cmath>
#include <unordered_map>

#include "scriptforge/errors.h"
#include "scriptforge/info.h"
#include "scriptforge/parallel.h"
#include "scriptforge/random.h"
#include "scriptforge/stats.h"

namespace scriptforge {
namespace {

void CheckGramSize(int n) {
  if (n < 1 || n > kMaxBoundaryGram) {
    throw Error(ErrorCode::kUnsupportedOrder,
                "boundary gram size must be 1 or 2, got " + std::to_string(n));
  }
}

Gram PackLanes(const std::uint64_t* lanes, int n) {
  Gram g = 0;
  for (int i = 0; i < n; ++i) g = (g << 32) | lanes[i];
  return g;
}

std::vector<JointCell> CellsOf(const BoundaryTransitionTable& table) {
  std::vector<JointCell> cells;
  cells.reserve(table.joint.size());
  for (const auto& [key, count] : table.joint) {
    cells.push_back({key.first, key.second, static_cast<double>(count)});
  }
  return cells;
}

JointEntropies Summarize(const BoundaryTransitionTable& table) {
  if (table.total <= 0) {
    throw Error(ErrorCode::kEmptyTable, "no boundary transitions");
  }
  return SummarizeJoint(CellsOf(table));
}

void AddSentence(const Sentence& sentence, int n,
                 BoundaryTransitionTable& table) {
  for (std::size_t i = 0; i + 1 < sentence.size(); ++i) {
    ++table.joint[{LastGram(sentence[i], n), FirstGram(sentence[i + 1], n)}];
    ++table.total;
  }
}

// Per-sentence H_fwd - H_bwd, for sentences with at least one transition.
double SentenceDelta(const Sentence& sentence, int n) {
  BoundaryTransitionTable fwd{.n = n, .joint = {}, .total = 0};
  BoundaryTransitionTable bwd{.n = n, .joint = {}, .total = 0};
  AddSentence(sentence, n, fwd);
  Sentence reversed(sentence.rbegin(), sentence.rend());
  AddSentence(reversed, n, bwd);
  return ConditionalEntropy(fwd) - ConditionalEntropy(bwd);
}

// Dense re-indexing of a corpus's boundary pairs so replicates can be
// tallied with array adds instead of map inserts.
class PooledIndex {
 public:
  PooledIndex(const Corpus& corpus, int n) {
    per_sentence_.resize(corpus.sentences.size());
    for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
      const Sentence& sentence = corpus.sentences[s];
      for (std::size_t i = 0; i + 1 < sentence.size(); ++i) {
        const Gram last_i = LastGram(sentence[i], n);
        const Gram first_next = FirstGram(sentence[i + 1], n);
        // Backward order pairs w_{i+1}'s last gram with w_i's first gram.
        const Gram last_next = LastGram(sentence[i + 1], n);
        const Gram first_i = FirstGram(sentence[i], n);
        per_sentence_[s].push_back(
            {Intern(fwd_, last_i, first_next), Intern(bwd_, last_next, first_i)});
      }
    }
  }

  double Delta(std::span<const std::uint32_t> multiplicity) const {
    return ConditionalEntropyOf(fwd_, multiplicity, /*forward=*/true) -
           ConditionalEntropyOf(bwd_, multiplicity, /*forward=*/false);
  }

 private:
  struct Side {
    std::unordered_map<std::uint64_t, std::uint32_t> condition_ids;
    std::map<std::pair<Gram, Gram>, std::uint32_t> pair_ids;
    std::vector<std::uint32_t> pair_condition;
  };
  struct PairRef {
    std::uint32_t fwd;
    std::uint32_t bwd;
  };

  static std::uint32_t Intern(Side& side, Gram condition, Gram target) {
    auto [cit, cnew] = side.condition_ids.try_emplace(
        condition, static_cast<std::uint32_t>(side.condition_ids.size()));
    auto [pit, pnew] = side.pair_ids.try_emplace(
        {condition, target}, static_cast<std::uint32_t>(side.pair_ids.size()));
    if (pnew) side.pair_condition.push_back(cit->second);
    return pit->second;
  }

  double ConditionalEntropyOf(const Side& side,
                              std::span<const std::uint32_t> multiplicity,
                              bool forward) const {
    std::vector<double> pair_counts(side.pair_condition.size(), 0.0);
    std::vector<double> condition_counts(side.condition_ids.size(), 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < per_sentence_.size(); ++s) {
      const double m = multiplicity[s];
      if (m == 0.0) continue;
      for (const auto& ref : per_sentence_[s]) {
        const std::uint32_t p = forward ? ref.fwd : ref.bwd;
        pair_counts[p] += m;
        condition_counts[side.pair_condition[p]] += m;
        total += m;
      }
    }
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (std::size_t p = 0; p < pair_counts.size(); ++p) {
      const double c = pair_counts[p];
      if (c > 0.0) {
        h -= (c / total) *
             std::log2(c / condition_counts[side.pair_condition[p]]);
      }
    }
    return h;
  }

  Side fwd_;
  Side bwd_;
  std::vector<std::vector<PairRef>> per_sentence_;
};

}  // namespace

Gram LastGram(const Word& word, int n) {
  CheckGramSize(n);
  std::uint64_t lanes[kMaxBoundaryGram] = {};
  const int len = static_cast<int>(word.size());
  // Pad on the word-internal (left) side.
  for (int i = 0; i < n; ++i) {
    const int src = len - n + i;
    lanes[i] = src >= 0 ? static_cast<std::uint64_t>(word[src]) + 1 : 0;
  }
  return PackLanes(lanes, n);
}

Gram FirstGram(const Word& word, int n) {
  CheckGramSize(n);
  std::uint64_t lanes[kMaxBoundaryGram] = {};
  for (int i = 0; i < n; ++i) {
    lanes[i] = i < static_cast<int>(word.size())
                   ? static_cast<std::uint64_t>(word[i]) + 1
                   : 0;
  }
  return PackLanes(lanes, n);
}

std::string FormatGram(const Alphabet& alphabet, Gram gram, int n) {
  std::string out;
  for (int i = n - 1; i >= 0; --i) {
    const std::uint64_t lane = (gram >> (32 * i)) & 0xFFFFFFFFULL;
    if (!out.empty()) out += ' ';
    out += lane == 0 ? std::string("<pad>")
                     : alphabet.Spelling(static_cast<Symbol>(lane - 1));
  }
  return out;
}

BoundaryTransitionTable ExtractTransitions(const Corpus& corpus, int n) {
  CheckGramSize(n);
  BoundaryTransitionTable table{.n = n, .joint = {}, .total = 0};
  for (const auto& sentence : corpus.sentences) AddSentence(sentence, n, table);
  return table;
}

double ConditionalEntropy(const BoundaryTransitionTable& table) {
  return Summarize(table).h_target_given_condition;
}

double MutualInformation(const BoundaryTransitionTable& table) {
  return Summarize(table).mutual_information;
}

double TargetEntropy(const BoundaryTransitionTable& table) {
  return Summarize(table).h_target;
}

std::string_view DirectionName(Direction d) {
  switch (d) {
    case Direction::kLtr: return "LTR";
    case Direction::kRtl: return "RTL";
    case Direction::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Direction DirectionVerdict(double point, double ci_low, double ci_high,
                           Direction positive, Direction negative) {
  if (point > 0.0 && ci_low > 0.0 && ci_high > 0.0) return positive;
  if (point < 0.0 && ci_low < 0.0 && ci_high < 0.0) return negative;
  return Direction::kInconclusive;
}

CrossBoundaryResult DeltaCb(const Corpus& corpus, int n) {
  const auto fwd = Summarize(ExtractTransitions(corpus, n));
  const auto bwd = Summarize(ExtractTransitions(ReverseWords(corpus), n));
  CrossBoundaryResult result;
  result.n = n;
  result.h_fwd = fwd.h_target_given_condition;
  result.h_bwd = bwd.h_target_given_condition;
  result.mi_fwd = fwd.mutual_information;
  result.mi_bwd = bwd.mutual_information;
  result.delta_cb = result.h_fwd - result.h_bwd;
  result.transitions = static_cast<std::int64_t>(fwd.total);
  // Positive delta means the backward reading is more predictable.
  result.verdict = result.delta_cb > 0.0   ? Direction::kRtl
                   : result.delta_cb < 0.0 ? Direction::kLtr
                                           : Direction::kInconclusive;
  return result;
}

CbInterval PairedBootstrapCb(const Corpus& corpus, int n,
                             const CbBootstrapOptions& options) {
  CheckGramSize(n);
  if (options.replicates < 1) {
    throw Error(ErrorCode::kInvalidArgument, "replicates must be positive");
  }
  std::vector<std::size_t> usable;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    if (corpus.sentences[s].size() >= 2) usable.push_back(s);
  }
  if (usable.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "paired bootstrap needs at least two sentences with "
                "transitions");
  }
  const double point = DeltaCb(corpus, n).delta_cb;
  std::vector<double> replicates(static_cast<std::size_t>(options.replicates));

  if (options.statistic == ReplicateStatistic::kSentenceMean) {
    std::vector<double> deltas(usable.size());
    ParallelFor(usable.size(), [&](std::size_t i) {
      deltas[i] = SentenceDelta(corpus.sentences[usable[i]], n);
    });
    ParallelFor(replicates.size(), [&](std::size_t r) {
      Rng rng(DeriveSeed(options.seed, r));
      double sum = 0.0;
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        sum += deltas[rng.UniformIndex(deltas.size())];
      }
      replicates[r] = sum / static_cast<double>(deltas.size());
    });
  } else {
    const PooledIndex index(corpus, n);
    ParallelFor(replicates.size(), [&](std::size_t r) {
      Rng rng(DeriveSeed(options.seed, r));
      std::vector<std::uint32_t> multiplicity(corpus.sentences.size(), 0);
      for (std::size_t i = 0; i < usable.size(); ++i) {
        ++multiplicity[usable[rng.UniformIndex(usable.size())]];
      }
      replicates[r] = index.Delta(multiplicity);
    });
  }

  const Interval ci = PercentileInterval(std::move(replicates), options.alpha);
  return CbInterval{
      .ci_low = ci.low,
      .ci_high = ci.high,
      .verdict = DirectionVerdict(point, ci.low, ci.high, Direction::kRtl,
                                  Direction::kLtr)};
}

ShuffleControlResult ShuffleControl(const Corpus& corpus, int n,
                                    std::uint64_t seed, int reps) {
  if (reps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "reps must be at least 1");
  }
  ShuffleControlResult result;
  result.reps = reps;
  if (corpus.TransitionCount() == 0) {
    result.no_transitions = true;
    return result;
  }
  std::vector<double> deltas(static_cast<std::size_t>(reps));
  ParallelFor(deltas.size(), [&](std::size_t r) {
    deltas[r] = DeltaCb(ShuffleWords(corpus, DeriveSeed(seed, r)), n).delta_cb;
  });
  result.mean = Mean(deltas);
  result.sd = SampleSd(deltas);
  result.mean_abs = std::abs(result.mean);
  return result;
}

}  // namespace scriptforge
