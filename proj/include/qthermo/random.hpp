#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace qthermo {

// Independent random stream for one unit of work (a trajectory, a cycle). The stream depends
// only on (master seed, index), so results never depend on how work is split across threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t index);
  explicit RandomStream(std::uint64_t seed) : RandomStream(seed, 0) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Index drawn from a probability vector. The last index with positive weight absorbs
  /// rounding so a normalized vector never walks off the end.
  std::size_t categorical(std::span<const double> probabilities);

 private:
  std::mt19937_64 engine_;
};

}  // namespace qthermo
