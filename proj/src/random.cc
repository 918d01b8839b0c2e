#include "scriptforge/random.h"

#include <algorithm>
#include <cmath>

#include "scriptforge/errors.h"

namespace scriptforge {

std::uint64_t MixSeed(std::uint64_t value) {
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream) {
  return MixSeed(MixSeed(master) ^ MixSeed(stream + 0x632be59bd9b4e019ULL));
}

std::size_t Rng::UniformIndex(std::size_t n) {
  const std::uint64_t bound = n;
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw > limit);
  return static_cast<std::size_t>(draw % bound);
}

double Rng::Uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

DiscreteSampler::DiscreteSampler(std::span<const double> weights) {
  cumulative_.reserve(weights.size());
  double running = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sampling weights must be finite and non-negative");
    }
    running += w;
    cumulative_.push_back(running);
  }
  if (running <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sampling weights must have a positive sum");
  }
}

std::size_t DiscreteSampler::Sample(Rng& rng) const {
  const double target = rng.Uniform01() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

std::vector<double> ZipfWeights(std::size_t n, double exponent) {
  std::vector<double> weights(n);
  for (std::size_t r = 0; r < n; ++r) {
    weights[r] = std::pow(static_cast<double>(r + 1), -exponent);
  }
  return weights;
}

}  // namespace scriptforge
