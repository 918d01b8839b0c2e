#ifndef SCRIPTFORGE_NGRAM_H_
#define SCRIPTFORGE_NGRAM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "scriptforge/corpus.h"
#include "scriptforge/cross_boundary.h"

namespace scriptforge {

inline constexpr int kMaxNGramOrder = 5;

// A character stream split into independent segments (one per sentence);
// n-gram windows never span two segments.
using Stream = std::vector<Symbol>;
using SegmentedStream = std::vector<Stream>;

// Additively smoothed order-n model. Context counts are raw (n-1)-gram
// window counts over the training stream.
class NGramModel {
 public:
  int order() const { return order_; }
  double smoothing() const { return smoothing_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::int64_t ContextCount(std::span<const Symbol> context) const;
  std::int64_t FullCount(std::span<const Symbol> ngram) const;
  std::size_t distinct_ngrams() const { return full_counts_.size(); }

  // (count(context + symbol) + a) / (count(context) + a * V)
  double Probability(std::span<const Symbol> context, Symbol symbol) const;

 private:
  friend NGramModel TrainNGram(const SegmentedStream&, int, double);

  std::uint64_t Key(std::span<const Symbol> symbols) const;

  int order_ = 2;
  double smoothing_ = 1.0;
  std::size_t vocab_size_ = 0;
  int bits_ = 0;
  std::unordered_map<std::uint64_t, std::int64_t> context_counts_;
  std::unordered_map<std::uint64_t, std::int64_t> full_counts_;
};

// Throws Error(kStreamTooShort) when no segment holds a full n-gram and
// Error(kUnsupportedOrder) outside 2..5.
NGramModel TrainNGram(const SegmentedStream& stream, int n,
                      double smoothing = 1.0);
NGramModel TrainNGram(const Stream& stream, int n, double smoothing = 1.0);

// Average -log2 P per predicted token (bits/token).
double CrossEntropy(const NGramModel& model, const SegmentedStream& stream);
double CrossEntropy(const NGramModel& model, const Stream& stream);

// Per-sentence streams in reading order with `separator` between words.
SegmentedStream CharacterStream(const Corpus& corpus, Symbol separator);
// Every segment reversed (reversed word order and reversed word internals).
SegmentedStream ReverseSegments(SegmentedStream stream);

struct DeltaResult {
  int n = 2;
  double delta = 0.0;
  double x_ltr = 0.0;
  double x_rtl = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  Direction direction_verdict = Direction::kInconclusive;
};

struct DeltaBootstrapOptions {
  int replicates = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

// X_LTR, X_RTL self-entropies and their difference; CI from a sentence-level
// bootstrap. Positive delta means the right-to-left reading is more
// predictable.
DeltaResult DeltaChar(const Corpus& corpus, int n, double smoothing,
                      const DeltaBootstrapOptions& bootstrap);
// Point estimate only; CI fields equal the estimate.
DeltaResult DeltaCharPoint(const Corpus& corpus, int n, double smoothing = 1.0);

struct DeltaInterval {
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Percentile CI over sentence resamples; throws kInvalidArgument for B < 100.
DeltaInterval BootstrapDelta(const Corpus& corpus, int n, double smoothing,
                             const DeltaBootstrapOptions& options);

namespace internal {
// {X_LTR, X_RTL} via the shared-count route used by the bootstrap.
std::pair<double, double> DenseDirectionalEntropies(const Corpus& corpus,
                                                    int n, double smoothing);
}  // namespace internal

}  // namespace scriptforge

#endif  // SCRIPTFORGE_NGRAM_H_
