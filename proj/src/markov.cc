#include "scriptforge/markov.h"

#include <map>

#include "scriptforge/cross_boundary.h"
#include "scriptforge/errors.h"
#include "scriptforge/ngram.h"
#include "scriptforge/parallel.h"
#include "scriptforge/stats.h"

namespace scriptforge {
namespace {

constexpr int kEosRedraws = 100;

const std::map<WordMarkovChain::WordId, std::int64_t>& EmptySuccessors() {
  static const std::map<WordMarkovChain::WordId, std::int64_t> empty;
  return empty;
}

}  // namespace

// Cached inverse-CDF samplers for every table of a chain.
class ChainSampler {
 public:
  using WordId = WordMarkovChain::WordId;

  explicit ChainSampler(const WordMarkovChain& chain) {
    for (const auto& [context, successors] : chain.transitions_) {
      contexts_.emplace(context, Table(successors));
    }
    for (const auto& [previous, successors] : chain.bigram_backoff_) {
      backoff_.emplace(previous, Table(successors));
    }
    unigram_ = Table(chain.unigrams_);
    std::vector<double> weights;
    for (const auto& [length, count] : chain.lengths_) {
      lengths_.push_back(length);
      weights.push_back(static_cast<double>(count));
    }
    length_sampler_ = DiscreteSampler(weights);
  }

  std::size_t SampleLength(Rng& rng) const {
    return lengths_[length_sampler_.Sample(rng)];
  }

  WordId SampleNext(const WordMarkovChain::Context& context, Rng& rng) const {
    if (auto it = contexts_.find(context); it != contexts_.end()) {
      return it->second.Sample(rng);
    }
    // Unseen context: back off to the previous word alone, then unigrams.
    if (auto it = backoff_.find(context[1]); it != backoff_.end()) {
      return it->second.Sample(rng);
    }
    return unigram_.Sample(rng);
  }

 private:
  struct TableSampler {
    std::vector<WordId> outcomes;
    DiscreteSampler sampler;
    WordId Sample(Rng& rng) const { return outcomes[sampler.Sample(rng)]; }
  };

  static TableSampler Table(const std::map<WordId, std::int64_t>& counts) {
    TableSampler table;
    std::vector<double> weights;
    for (const auto& [word, count] : counts) {
      table.outcomes.push_back(word);
      weights.push_back(static_cast<double>(count));
    }
    table.sampler = DiscreteSampler(weights);
    return table;
  }

  std::map<WordMarkovChain::Context, TableSampler> contexts_;
  std::map<WordId, TableSampler> backoff_;
  TableSampler unigram_;
  std::vector<std::size_t> lengths_;
  DiscreteSampler length_sampler_;
};

const std::map<WordMarkovChain::WordId, std::int64_t>&
WordMarkovChain::Successors(const Context& context) const {
  auto it = transitions_.find(context);
  return it == transitions_.end() ? EmptySuccessors() : it->second;
}

WordMarkovChain::Context WordMarkovChain::Advance(const Context& context,
                                                  WordId next) const {
  return order_ == 1 ? Context{kBos, next} : Context{context[1], next};
}

WordMarkovChain TrainChain(const Corpus& corpus, int k) {
  if (k != 1 && k != 2) {
    throw Error(ErrorCode::kUnsupportedOrder,
                "word chain order must be 1 or 2, got " + std::to_string(k));
  }
  if (corpus.WordCount() == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot train on an empty corpus");
  }
  WordMarkovChain chain;
  chain.order_ = k;
  chain.alphabet_ = corpus.alphabet;
  std::map<Word, WordMarkovChain::WordId> ids;
  for (const auto& sentence : corpus.sentences) {
    ++chain.lengths_[sentence.size()];
    ++chain.training_sentences_;
    auto context = chain.StartContext();
    for (const auto& word : sentence) {
      auto [it, added] = ids.try_emplace(
          word, static_cast<WordMarkovChain::WordId>(chain.vocabulary_.size()));
      if (added) chain.vocabulary_.push_back(word);
      const auto id = it->second;
      ++chain.transitions_[context][id];
      ++chain.bigram_backoff_[context[1]][id];
      ++chain.unigrams_[id];
      context = chain.Advance(context, id);
    }
    ++chain.transitions_[context][WordMarkovChain::kEos];
    ++chain.bigram_backoff_[context[1]][WordMarkovChain::kEos];
  }
  return chain;
}

Corpus GenerateFromChain(const WordMarkovChain& chain, std::size_t n_sentences,
                         std::uint64_t seed) {
  const ChainSampler sampler(chain);
  Rng rng(seed);
  Corpus out;
  out.name = "markov-k" + std::to_string(chain.order());
  out.alphabet = chain.alphabet();
  out.tokenization = Tokenization::kEvaLongestMatch;
  out.sentences.reserve(n_sentences);
  while (out.sentences.size() < n_sentences) {
    const std::size_t target = sampler.SampleLength(rng);
    Sentence sentence;
    auto context = chain.StartContext();
    while (sentence.size() < target) {
      WordMarkovChain::WordId next = WordMarkovChain::kEos;
      for (int attempt = 0; attempt <= kEosRedraws; ++attempt) {
        next = sampler.SampleNext(context, rng);
        if (next != WordMarkovChain::kEos) break;
      }
      if (next == WordMarkovChain::kEos) break;
      sentence.push_back(chain.vocabulary()[static_cast<std::size_t>(next)]);
      context = chain.Advance(context, next);
    }
    if (!sentence.empty()) out.sentences.push_back(std::move(sentence));
  }
  return out;
}

DissociationReport DissociationExperiment(const Corpus& corpus, int k,
                                          int runs, std::uint64_t seed) {
  if (runs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "runs must be at least 1");
  }
  const WordMarkovChain chain = TrainChain(corpus, k);
  DissociationReport report;
  report.order = k;
  report.runs.resize(static_cast<std::size_t>(runs));
  report.observed_delta_char = DeltaCharPoint(corpus, 2).delta;
  report.observed_delta_cb = DeltaCb(corpus, 1).delta_cb;
  ParallelFor(report.runs.size(), [&](std::size_t r) {
    const Corpus synthetic = GenerateFromChain(
        chain, corpus.sentences.size(), DeriveSeed(seed, r));
    auto& run = report.runs[r];
    run.delta_char = DeltaCharPoint(synthetic, 2).delta;
    run.delta_cb = DeltaCb(synthetic, 1).delta_cb;
    run.dissociated = run.delta_char > 0.0 && run.delta_cb < 0.0;
  });
  std::vector<double> chars;
  std::vector<double> cbs;
  for (const auto& run : report.runs) {
    chars.push_back(run.delta_char);
    cbs.push_back(run.delta_cb);
    if (run.dissociated) ++report.dissociation_count;
  }
  report.mean_delta_char = Mean(chars);
  report.sd_delta_char = SampleSd(chars);
  report.mean_delta_cb = Mean(cbs);
  report.sd_delta_cb = SampleSd(cbs);
  return report;
}

}  // namespace scriptforge
