#ifndef SCRIPTFORGE_INFO_H_
#define SCRIPTFORGE_INFO_H_

#include <cstdint>
#include <span>
#include <vector>

namespace scriptforge {

// One cell of a (condition, target) contingency table. Keys are opaque ids;
// counts may be fractional.
struct JointCell {
  std::uint64_t condition;
  std::uint64_t target;
  double count;
};

// Plug-in (maximum-likelihood) entropies of a joint table, in bits.
struct JointEntropies {
  double total = 0.0;
  double h_condition = 0.0;
  double h_target = 0.0;
  double h_target_given_condition = 0.0;
  double mutual_information = 0.0;
};

// Cells need not be unique; duplicates are merged.
JointEntropies SummarizeJoint(std::span<const JointCell> cells);

// Shannon entropy of a count vector in bits; zero counts are skipped.
double EntropyBits(std::span<const double> counts);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_INFO_H_
