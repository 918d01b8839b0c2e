#include "scriptforge/info.h"

#include <cmath>
#include <map>

namespace scriptforge {

double EntropyBits(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / total) * std::log2(c / total);
  }
  return h;
}

JointEntropies SummarizeJoint(std::span<const JointCell> cells) {
  // Ordered maps fix the summation order, so results are reproducible
  // bit-for-bit regardless of how the cells were produced.
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> joint;
  std::map<std::uint64_t, double> conditions;
  std::map<std::uint64_t, double> targets;
  JointEntropies out;
  for (const auto& cell : cells) {
    if (cell.count <= 0.0) continue;
    joint[{cell.condition, cell.target}] += cell.count;
    conditions[cell.condition] += cell.count;
    targets[cell.target] += cell.count;
    out.total += cell.count;
  }
  if (out.total <= 0.0) return out;

  std::vector<double> marginal;
  marginal.reserve(conditions.size());
  for (const auto& [key, c] : conditions) marginal.push_back(c);
  out.h_condition = EntropyBits(marginal);
  marginal.clear();
  for (const auto& [key, c] : targets) marginal.push_back(c);
  out.h_target = EntropyBits(marginal);

  double h = 0.0;
  for (const auto& [key, c] : joint) {
    const double given = conditions[key.first];
    h -= (c / out.total) * std::log2(c / given);
  }
  out.h_target_given_condition = h;
  out.mutual_information = out.h_target - h;
  return out;
}

}  // namespace scriptforge
