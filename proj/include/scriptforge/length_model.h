#ifndef SCRIPTFORGE_LENGTH_MODEL_H_
#define SCRIPTFORGE_LENGTH_MODEL_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scriptforge/corpus.h"
#include "scriptforge/random.h"

namespace scriptforge {

// Empirical sentence-length distribution used to cut generated word
// sequences into sentences.
class LengthModel {
 public:
  explicit LengthModel(std::map<std::size_t, double> histogram);

  static LengthModel FromCorpus(const Corpus& corpus);
  // Lines of `length count`; '#' comments allowed.
  static LengthModel Load(const std::filesystem::path& path);
  // The bundled line-length histogram for EVA text.
  static LengthModel Default();

  std::size_t Sample(Rng& rng) const;
  double MeanLength() const;
  const std::map<std::size_t, double>& histogram() const { return histogram_; }

 private:
  std::map<std::size_t, double> histogram_;
  std::vector<std::size_t> lengths_;
  DiscreteSampler sampler_;
};

// Splits a flat word sequence into consecutive sentences; the final sentence
// may be shorter than its drawn length.
std::vector<std::vector<std::string>> CutSentences(
    std::vector<std::string> words, const LengthModel& lengths, Rng& rng);

// Path of a file shipped under data/. SCRIPTFORGE_DATA_DIR overrides the
// compiled-in location.
std::filesystem::path DataPath(const std::string& relative);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_LENGTH_MODEL_H_
