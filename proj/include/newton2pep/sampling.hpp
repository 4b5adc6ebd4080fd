#pragma once

#include "newton2pep/linalg.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace newton2pep {

using SamplePoint = std::pair<Complex, Complex>;

/// Seeded generator for every randomized check in the library. Identical
/// seeds give identical streams on the same toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  /// Standard complex normal: real and imaginary parts N(0, 1/2).
  Complex normal();
  /// Area-uniform point on the annulus 0.5 <= |z| <= 2.
  Complex annulus();
  ComplexMatrix matrix(Index rows, Index cols);
  std::uint64_t next_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// `count` points (lambda, mu), both drawn from the annulus.
std::vector<SamplePoint> sample_points(int count, std::uint64_t seed);

}  // namespace newton2pep
