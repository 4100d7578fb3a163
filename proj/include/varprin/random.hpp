#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace varprin {

/// Seeded generator with a portable mapping to doubles (std distributions are
/// implementation-defined, which would break cross-platform reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream derived from (seed, stream) by SplitMix64 mixing.
  Rng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller.
  double normal();
  /// Uniformly distributed unit vector.
  Eigen::VectorXd unit_vector(int dim);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Halton sequence with a seeded Cranley-Patterson shift; points in [0,1)^dim.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed);
  Eigen::VectorXd point(std::uint64_t index) const;
  int dim() const { return static_cast<int>(shift_.size()); }

 private:
  Eigen::VectorXd shift_;
};

}  // namespace varprin
