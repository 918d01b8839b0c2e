#ifndef SCRIPTFORGE_RANDOM_H_
#define SCRIPTFORGE_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace scriptforge {

// SplitMix64 step; used to derive independent per-task seeds from a master
// seed so results do not depend on scheduling or thread count.
std::uint64_t MixSeed(std::uint64_t value);
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

// Thin wrapper over mt19937_64 with sampling helpers implemented here rather
// than through <random> distributions, whose outputs differ between standard
// library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, n); n must be positive.
  std::size_t UniformIndex(std::size_t n);
  // Uniform in [0, 1).
  double Uniform01();
  bool Bernoulli(double p) { return Uniform01() < p; }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformIndex(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Sampling from a fixed non-negative weight vector by inverse CDF.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;
  explicit DiscreteSampler(std::span<const double> weights);

  std::size_t Sample(Rng& rng) const;
  std::size_t size() const { return cumulative_.size(); }
  bool empty() const { return cumulative_.empty(); }
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

 private:
  std::vector<double> cumulative_;
};

// Weights proportional to rank^-exponent for ranks 1..n.
std::vector<double> ZipfWeights(std::size_t n, double exponent);

}  // namespace scriptforge

#endif  // SCRIPTFORGE_RANDOM_H_
