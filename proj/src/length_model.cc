#include "scriptforge/length_model.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scriptforge/errors.h"

namespace scriptforge {

LengthModel::LengthModel(std::map<std::size_t, double> histogram)
    : histogram_(std::move(histogram)) {
  std::vector<double> weights;
  for (const auto& [length, weight] : histogram_) {
    if (length == 0 || weight < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sentence lengths must be positive with weights >= 0");
    }
    lengths_.push_back(length);
    weights.push_back(weight);
  }
  if (lengths_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty length histogram");
  }
  sampler_ = DiscreteSampler(weights);
}

LengthModel LengthModel::FromCorpus(const Corpus& corpus) {
  std::map<std::size_t, double> histogram;
  for (const auto& s : corpus.sentences) histogram[s.size()] += 1.0;
  return LengthModel(std::move(histogram));
}

LengthModel LengthModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoFailure,
                "cannot open length histogram " + path.string());
  }
  std::map<std::size_t, double> histogram;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::size_t length;
    double count;
    if (!(fields >> length)) continue;
    if (!(fields >> count)) {
      throw Error(ErrorCode::kInvalidConfig,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected `length count`");
    }
    histogram[length] += count;
  }
  return LengthModel(std::move(histogram));
}

LengthModel LengthModel::Default() {
  return Load(DataPath("eva/sentence_lengths.txt"));
}

std::size_t LengthModel::Sample(Rng& rng) const {
  return lengths_[sampler_.Sample(rng)];
}

double LengthModel::MeanLength() const {
  double total = 0.0;
  double weighted = 0.0;
  for (const auto& [length, weight] : histogram_) {
    total += weight;
    weighted += weight * static_cast<double>(length);
  }
  return weighted / total;
}

std::vector<std::vector<std::string>> CutSentences(
    std::vector<std::string> words, const LengthModel& lengths, Rng& rng) {
  std::vector<std::vector<std::string>> sentences;
  std::size_t pos = 0;
  while (pos < words.size()) {
    const std::size_t len = std::min(lengths.Sample(rng), words.size() - pos);
    std::vector<std::string> sentence(
        std::make_move_iterator(words.begin() + static_cast<long>(pos)),
        std::make_move_iterator(words.begin() + static_cast<long>(pos + len)));
    sentences.push_back(std::move(sentence));
    pos += len;
  }
  return sentences;
}

std::filesystem::path DataPath(const std::string& relative) {
  if (const char* env = std::getenv("SCRIPTFORGE_DATA_DIR");
      env != nullptr && *env != '\0') {
    return std::filesystem::path(env) / relative;
  }
  return std::filesystem::path(SCRIPTFORGE_DATA_DIR) / relative;
}

}  // namespace scriptforge
