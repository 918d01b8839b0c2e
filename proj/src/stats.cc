#include "scriptforge/stats.h"

#include <algorithm>
#include <cmath>

#include "scriptforge/errors.h"
#include "scriptforge/random.h"

namespace scriptforge {

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double SampleSd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw Error(ErrorCode::kInsufficientData, "quantile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Interval PercentileInterval(std::vector<double> replicates, double alpha) {
  std::sort(replicates.begin(), replicates.end());
  Interval ci;
  ci.low = Quantile(replicates, alpha / 2.0);
  ci.high = Quantile(std::move(replicates), 1.0 - alpha / 2.0);
  return ci;
}

Interval BootstrapMeanInterval(std::span<const double> values, int replicates,
                               double alpha, std::uint64_t seed) {
  if (values.empty()) {
    throw Error(ErrorCode::kInsufficientData, "bootstrap of an empty sample");
  }
  Rng rng(seed);
  std::vector<double> means(static_cast<std::size_t>(replicates));
  for (auto& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      sum += values[rng.UniformIndex(values.size())];
    }
    m = sum / static_cast<double>(values.size());
  }
  return PercentileInterval(std::move(means), alpha);
}

}  // namespace scriptforge
