#include "scriptforge/generated.h"

#include <fstream>
#include <sstream>

#include "scriptforge/errors.h"
#include "scriptforge/length_model.h"

namespace scriptforge {

GeneratedCorpus AssembleGenerated(
    const std::vector<std::vector<std::string>>& sentences,
    const GraphemeInventory& inventory, std::string generator,
    std::map<std::string, std::string> config, std::uint64_t seed) {
  CorpusBuilder builder(generator, Tokenization::kEvaLongestMatch);
  for (const auto& sentence : sentences) {
    builder.AddRawSentence(sentence, &inventory);
  }
  GeneratedCorpus out;
  out.dropped_words = builder.dropped_words();
  out.corpus = std::move(builder).Build();
  out.generator = std::move(generator);
  out.config = std::move(config);
  out.seed = seed;
  return out;
}

std::vector<std::string> LoadGraphemeList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string g;
    while (fields >> g) out.push_back(g);
  }
  return out;
}

std::string JoinList(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ",";
    out += item;
  }
  return out;
}

std::string FormatNumber(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

const GraphemeInventory& DefaultEvaInventory() {
  static const GraphemeInventory inventory =
      GraphemeInventory::Load(DataPath("eva/sta1.txt"));
  return inventory;
}

}  // namespace scriptforge
