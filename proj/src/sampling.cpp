#include "newton2pep/sampling.hpp"

#include <cmath>
#include <numbers>

namespace newton2pep {

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

Complex Rng::normal() {
  std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
  const double re = dist(engine_);
  const double im = dist(engine_);
  return {re, im};
}

Complex Rng::annulus() {
  // r^2 uniform on [0.25, 4] gives uniform density over the annulus area.
  const double r = std::sqrt(uniform(0.25, 4.0));
  const double theta = uniform(0.0, 2.0 * std::numbers::pi);
  return std::polar(r, theta);
}

ComplexMatrix Rng::matrix(Index rows, Index cols) {
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal();
  }
  return m;
}

std::vector<SamplePoint> sample_points(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SamplePoint> points;
  points.reserve(count);
  for (int k = 0; k < count; ++k) {
    const Complex lambda = rng.annulus();
    const Complex mu = rng.annulus();
    points.emplace_back(lambda, mu);
  }
  return points;
}

}  // namespace newton2pep
