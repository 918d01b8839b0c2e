#ifndef SCRIPTFORGE_STATS_H_
#define SCRIPTFORGE_STATS_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace scriptforge {

double Mean(std::span<const double> values);
// Sample standard deviation (n - 1); zero for fewer than two values.
double SampleSd(std::span<const double> values);
// Linear-interpolation quantile of unsorted values, q in [0, 1].
double Quantile(std::vector<double> values, double q);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Equal-tailed percentile interval at level 1 - alpha.
Interval PercentileInterval(std::vector<double> replicates, double alpha);

// Percentile bootstrap CI of the mean of `values`.
Interval BootstrapMeanInterval(std::span<const double> values, int replicates,
                               double alpha, std::uint64_t seed);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_STATS_H_
