#ifndef SCRIPTFORGE_REPORT_H_
#define SCRIPTFORGE_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "scriptforge/cross_boundary.h"
#include "scriptforge/evaluate.h"
#include "scriptforge/markov.h"
#include "scriptforge/ngram.h"
#include "scriptforge/positional.h"

namespace scriptforge {

using Json = nlohmann::json;

Json ToJson(const DeltaResult& r);
Json ToJson(const CrossBoundaryResult& r);
Json ToJson(const ShuffleControlResult& r);
Json ToJson(const PositionalClassification& pc);
Json ToJson(const MIDecomposition& d);
Json ToJson(const BoundaryDistribution& d);
Json ToJson(const DissociationReport& r);
Json ToJson(const SignatureReport& r);
Json ToJson(const MetricSummary& m);
Json ToJson(const BatteryResult& b);

struct AnalyzeOptions {
  std::vector<int> orders = {2, 3, 4};
  int bootstrap = 1000;
  std::uint64_t seed = 0;
  double smoothing = 1.0;
  int shuffle_reps = 10;
  double class_threshold = 2.0;
};

// The full directional and positional analysis of one corpus. The
// "signatures" member doubles as a reference file for Cohen's d.
Json AnalyzeCorpus(const Corpus& corpus, const AnalyzeOptions& options);

// Rank, grapheme, count rows of a boundary distribution.
std::string RankFrequencyCsv(const BoundaryDistribution& d);

// {"command", "config", "results"}: everything in it is a function of the
// inputs and seed. WriteDocument adds a "meta" member with the wall-clock
// time, which is the only non-deterministic part of an output file.
Json MakeDocument(const std::string& command, Json config, Json results);
void WriteDocument(const std::filesystem::path& path, Json document);
// The document without its "meta" member, serialized canonically.
std::string DeterministicSection(const Json& document);

void WriteText(const std::filesystem::path& path, const std::string& text);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_REPORT_H_
