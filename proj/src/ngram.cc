#include "scriptforge/ngram.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "scriptforge/errors.h"
#include "scriptforge/parallel.h"
#include "scriptforge/random.h"
#include "scriptforge/stats.h"

namespace scriptforge {
namespace {

void CheckOrder(int n) {
  if (n < 2 || n > kMaxNGramOrder) {
    throw Error(ErrorCode::kUnsupportedOrder,
                "n-gram order must be in 2..5, got " + std::to_string(n));
  }
}

int BitsFor(const SegmentedStream& stream, int n) {
  Symbol max_symbol = 0;
  for (const auto& seg : stream) {
    for (Symbol s : seg) max_symbol = std::max(max_symbol, s);
  }
  const int bits = std::max(1, static_cast<int>(std::bit_width(max_symbol)));
  if (bits * n > 64) {
    throw Error(ErrorCode::kUnsupportedOrder,
                "alphabet too large for an order-" + std::to_string(n) +
                    " model");
  }
  return bits;
}

std::uint64_t Pack(std::span<const Symbol> symbols, int bits) {
  std::uint64_t key = 0;
  for (Symbol s : symbols) key = (key << bits) | s;
  return key;
}

// Counts shared by both reading directions: the reversed stream's n-grams
// are the forward n-grams reversed, and its contexts are the forward
// (n-1)-windows reversed. A forward n-gram's RTL context is therefore its
// own suffix window.
class DenseCounts {
 public:
  DenseCounts(const SegmentedStream& stream, int n) {
    const int bits = BitsFor(stream, n);
    std::unordered_map<std::uint64_t, std::uint32_t> gram_ids;
    std::unordered_map<std::uint64_t, std::uint32_t> window_ids;
    std::unordered_map<Symbol, std::uint32_t> symbol_ids;
    auto window_id = [&](std::span<const Symbol> w) {
      auto [it, added] = window_ids.try_emplace(
          Pack(w, bits), static_cast<std::uint32_t>(window_ids.size()));
      return it->second;
    };
    segments_.resize(stream.size());
    for (std::size_t s = 0; s < stream.size(); ++s) {
      const Stream& seg = stream[s];
      Segment& out = segments_[s];
      for (Symbol sym : seg) {
        auto [it, added] = symbol_ids.try_emplace(
            sym, static_cast<std::uint32_t>(symbol_ids.size()));
        out.symbols.push_back(it->second);
      }
      const std::size_t w = static_cast<std::size_t>(n - 1);
      for (std::size_t i = 0; i + w <= seg.size(); ++i) {
        out.windows.push_back(window_id(std::span(seg).subspan(i, w)));
      }
      for (std::size_t i = 0; i + n <= seg.size(); ++i) {
        const auto gram = std::span(seg).subspan(i, n);
        auto [it, added] = gram_ids.try_emplace(
            Pack(gram, bits), static_cast<std::uint32_t>(gram_ids.size()));
        if (added) {
          prefix_.push_back(window_id(gram.first(w)));
          suffix_.push_back(window_id(gram.last(w)));
        }
        out.grams.push_back(it->second);
      }
    }
    window_count_ = window_ids.size();
    symbol_count_ = symbol_ids.size();
  }

  // Returns {X_LTR, X_RTL} for the stream where segment s is repeated
  // multiplicity[s] times.
  std::pair<double, double> Entropies(std::span<const std::uint32_t> multiplicity,
                                      double alpha) const {
    std::vector<double> grams(prefix_.size(), 0.0);
    std::vector<double> windows(window_count_, 0.0);
    std::vector<char> seen(symbol_count_, 0);
    double predicted = 0.0;
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      const double m = multiplicity[s];
      if (m == 0.0) continue;
      const Segment& seg = segments_[s];
      for (auto g : seg.grams) grams[g] += m;
      for (auto w : seg.windows) windows[w] += m;
      for (auto y : seg.symbols) seen[y] = 1;
      predicted += m * static_cast<double>(seg.grams.size());
    }
    if (predicted == 0.0) {
      throw Error(ErrorCode::kStreamTooShort,
                  "stream shorter than the model order");
    }
    const double vocab =
        static_cast<double>(std::count(seen.begin(), seen.end(), 1));
    double ltr = 0.0;
    double rtl = 0.0;
    for (std::size_t g = 0; g < grams.size(); ++g) {
      const double c = grams[g];
      if (c == 0.0) continue;
      const double numerator = std::log2(c + alpha);
      ltr -= c * (numerator - std::log2(windows[prefix_[g]] + alpha * vocab));
      rtl -= c * (numerator - std::log2(windows[suffix_[g]] + alpha * vocab));
    }
    return {ltr / predicted, rtl / predicted};
  }

  std::size_t segment_count() const { return segments_.size(); }

 private:
  struct Segment {
    std::vector<std::uint32_t> grams;
    std::vector<std::uint32_t> windows;
    std::vector<std::uint32_t> symbols;
  };

  std::vector<Segment> segments_;
  std::vector<std::uint32_t> prefix_;
  std::vector<std::uint32_t> suffix_;
  std::size_t window_count_ = 0;
  std::size_t symbol_count_ = 0;
};

}  // namespace

std::uint64_t NGramModel::Key(std::span<const Symbol> symbols) const {
  return Pack(symbols, bits_);
}

std::int64_t NGramModel::ContextCount(std::span<const Symbol> context) const {
  for (Symbol s : context) {
    if (static_cast<int>(std::bit_width(s)) > bits_) return 0;
  }
  auto it = context_counts_.find(Key(context));
  return it == context_counts_.end() ? 0 : it->second;
}

std::int64_t NGramModel::FullCount(std::span<const Symbol> ngram) const {
  for (Symbol s : ngram) {
    if (static_cast<int>(std::bit_width(s)) > bits_) return 0;
  }
  auto it = full_counts_.find(Key(ngram));
  return it == full_counts_.end() ? 0 : it->second;
}

double NGramModel::Probability(std::span<const Symbol> context,
                               Symbol symbol) const {
  std::vector<Symbol> gram(context.begin(), context.end());
  gram.push_back(symbol);
  const double v = static_cast<double>(vocab_size_);
  return (static_cast<double>(FullCount(gram)) + smoothing_) /
         (static_cast<double>(ContextCount(context)) + smoothing_ * v);
}

NGramModel TrainNGram(const SegmentedStream& stream, int n, double smoothing) {
  CheckOrder(n);
  if (!(smoothing >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing must be >= 0");
  }
  NGramModel model;
  model.order_ = n;
  model.smoothing_ = smoothing;
  model.bits_ = BitsFor(stream, n);
  std::unordered_set<Symbol> vocab;
  bool any_window = false;
  for (const auto& seg : stream) {
    vocab.insert(seg.begin(), seg.end());
    for (std::size_t i = 0; i + n - 1 <= seg.size(); ++i) {
      ++model.context_counts_[model.Key(std::span(seg).subspan(i, n - 1))];
    }
    for (std::size_t i = 0; i + n <= seg.size(); ++i) {
      ++model.full_counts_[model.Key(std::span(seg).subspan(i, n))];
      any_window = true;
    }
  }
  if (!any_window) {
    throw Error(ErrorCode::kStreamTooShort,
                "stream shorter than order " + std::to_string(n));
  }
  model.vocab_size_ = vocab.size();
  return model;
}

NGramModel TrainNGram(const Stream& stream, int n, double smoothing) {
  return TrainNGram(SegmentedStream{stream}, n, smoothing);
}

double CrossEntropy(const NGramModel& model, const SegmentedStream& stream) {
  const int n = model.order();
  double bits = 0.0;
  std::size_t predicted = 0;
  for (const auto& seg : stream) {
    for (std::size_t i = 0; i + n <= seg.size(); ++i) {
      const auto context = std::span(seg).subspan(i, n - 1);
      bits -= std::log2(model.Probability(context, seg[i + n - 1]));
      ++predicted;
    }
  }
  if (predicted == 0) {
    throw Error(ErrorCode::kStreamTooShort,
                "stream shorter than order " + std::to_string(n));
  }
  return bits / static_cast<double>(predicted);
}

double CrossEntropy(const NGramModel& model, const Stream& stream) {
  return CrossEntropy(model, SegmentedStream{stream});
}

SegmentedStream CharacterStream(const Corpus& corpus, Symbol separator) {
  SegmentedStream stream;
  stream.reserve(corpus.sentences.size());
  for (const auto& sentence : corpus.sentences) {
    Stream seg;
    for (std::size_t w = 0; w < sentence.size(); ++w) {
      if (w > 0) seg.push_back(separator);
      seg.insert(seg.end(), sentence[w].begin(), sentence[w].end());
    }
    stream.push_back(std::move(seg));
  }
  return stream;
}

SegmentedStream ReverseSegments(SegmentedStream stream) {
  for (auto& seg : stream) std::reverse(seg.begin(), seg.end());
  return stream;
}

DeltaResult DeltaCharPoint(const Corpus& corpus, int n, double smoothing) {
  CheckOrder(n);
  const Symbol separator = static_cast<Symbol>(corpus.alphabet->size());
  const SegmentedStream forward = CharacterStream(corpus, separator);
  const SegmentedStream backward = ReverseSegments(forward);
  DeltaResult result;
  result.n = n;
  result.x_ltr = CrossEntropy(TrainNGram(forward, n, smoothing), forward);
  result.x_rtl = CrossEntropy(TrainNGram(backward, n, smoothing), backward);
  result.delta = result.x_ltr - result.x_rtl;
  result.ci_low = result.ci_high = result.delta;
  return result;
}

DeltaInterval BootstrapDelta(const Corpus& corpus, int n, double smoothing,
                             const DeltaBootstrapOptions& options) {
  CheckOrder(n);
  if (options.replicates < 100) {
    throw Error(ErrorCode::kInvalidArgument,
                "bootstrap needs at least 100 replicates");
  }
  const Symbol separator = static_cast<Symbol>(corpus.alphabet->size());
  const DenseCounts counts(CharacterStream(corpus, separator), n);
  const std::size_t sentences = counts.segment_count();
  std::vector<double> replicates(static_cast<std::size_t>(options.replicates));
  ParallelFor(replicates.size(), [&](std::size_t r) {
    Rng rng(DeriveSeed(options.seed, r));
    std::vector<std::uint32_t> multiplicity(sentences, 0);
    for (std::size_t i = 0; i < sentences; ++i) {
      ++multiplicity[rng.UniformIndex(sentences)];
    }
    try {
      const auto [ltr, rtl] = counts.Entropies(multiplicity, smoothing);
      replicates[r] = ltr - rtl;
    } catch (const Error&) {
      // A replicate made only of sentences too short for the order.
      replicates[r] = 0.0;
    }
  });
  const Interval ci = PercentileInterval(std::move(replicates), options.alpha);
  return DeltaInterval{.ci_low = ci.low, .ci_high = ci.high};
}

DeltaResult DeltaChar(const Corpus& corpus, int n, double smoothing,
                      const DeltaBootstrapOptions& bootstrap) {
  DeltaResult result = DeltaCharPoint(corpus, n, smoothing);
  const DeltaInterval ci = BootstrapDelta(corpus, n, smoothing, bootstrap);
  result.ci_low = ci.ci_low;
  result.ci_high = ci.ci_high;
  result.direction_verdict = DirectionVerdict(
      result.delta, ci.ci_low, ci.ci_high, Direction::kRtl, Direction::kLtr);
  return result;
}

namespace internal {

std::pair<double, double> DenseDirectionalEntropies(
    const Corpus& corpus, int n, double smoothing) {
  const Symbol separator = static_cast<Symbol>(corpus.alphabet->size());
  const DenseCounts counts(CharacterStream(corpus, separator), n);
  std::vector<std::uint32_t> ones(counts.segment_count(), 1);
  return counts.Entropies(ones, smoothing);
}

}  // namespace internal

}  // namespace scriptforge
