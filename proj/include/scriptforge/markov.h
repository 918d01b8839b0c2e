#ifndef SCRIPTFORGE_MARKOV_H_
#define SCRIPTFORGE_MARKOV_H_

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "scriptforge/corpus.h"
#include "scriptforge/random.h"

namespace scriptforge {

// Word-level Markov chain of order 1 or 2 with sentence-boundary tokens.
// Generation only samples transitions observed in training.
class WordMarkovChain {
 public:
  using WordId = std::int32_t;
  static constexpr WordId kBos = -1;
  static constexpr WordId kEos = -2;
  using Context = std::array<WordId, 2>;  // unused lane is kBos for k = 1

  int order() const { return order_; }
  const std::vector<Word>& vocabulary() const { return vocabulary_; }
  const std::shared_ptr<const Alphabet>& alphabet() const { return alphabet_; }
  // Successor counts (kEos included) of a context; empty when unseen.
  const std::map<WordId, std::int64_t>& Successors(const Context& context) const;
  const std::map<std::size_t, std::int64_t>& length_distribution() const {
    return lengths_;
  }
  std::size_t training_sentences() const { return training_sentences_; }

  Context StartContext() const { return {kBos, kBos}; }
  Context Advance(const Context& context, WordId next) const;

 private:
  friend WordMarkovChain TrainChain(const Corpus& corpus, int k);
  friend class ChainSampler;

  int order_ = 1;
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<Word> vocabulary_;
  std::map<Context, std::map<WordId, std::int64_t>> transitions_;
  // Order-1 and unigram tables for backing off from unseen contexts.
  std::map<WordId, std::map<WordId, std::int64_t>> bigram_backoff_;
  std::map<WordId, std::int64_t> unigrams_;
  std::map<std::size_t, std::int64_t> lengths_;
  std::size_t training_sentences_ = 0;
};

// Throws Error(kUnsupportedOrder) for k outside {1, 2} and
// Error(kEmptyCorpus) for a corpus without words.
WordMarkovChain TrainChain(const Corpus& corpus, int k);

// Draws a target length from the training length distribution, then samples
// words; an early EOS is redrawn up to 100 times before the sentence is
// allowed to end short. Deterministic given the seed.
Corpus GenerateFromChain(const WordMarkovChain& chain,
                         std::size_t n_sentences, std::uint64_t seed);

struct DissociationRun {
  double delta_char = 0.0;  // n = 2
  double delta_cb = 0.0;    // n = 1
  bool dissociated = false;
};

struct DissociationReport {
  int order = 1;
  std::vector<DissociationRun> runs;
  double mean_delta_char = 0.0;
  double sd_delta_char = 0.0;
  double mean_delta_cb = 0.0;
  double sd_delta_cb = 0.0;
  int dissociation_count = 0;
  // Same metrics on the training corpus.
  double observed_delta_char = 0.0;
  double observed_delta_cb = 0.0;
};

// Each run generates as many sentences as the training corpus holds.
DissociationReport DissociationExperiment(const Corpus& corpus, int k,
                                          int runs, std::uint64_t seed);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_MARKOV_H_
