#pragma once

// Deterministic sample streams. Each stream is an mt19937_64 seeded through
// std::seed_seq from (seed, FNV-1a hash of the stream name); doubles are built
// from the top 53 bits, so draws are bit-identical across platforms.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "genfun/hamiltonian.hpp"
#include "genfun/sphere.hpp"

namespace genfun {

class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::string_view name);

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);

  /// Uniform in the ball |v| <= radius (rejection from the cube).
  Vector in_ball(int dim, double radius = 1.0);
  /// Uniform on the unit sphere.
  sphere::SpherePoint on_sphere();
  /// Symmetric matrix with entries uniform in [-1, 1], rescaled to spectral norm `norm`.
  Matrix symmetric_matrix(int dim, double norm);
  /// Random polynomial: between 1 and `max_terms` monomials, each of total
  /// degree uniform in [1, max_degree] with its degree spread uniformly over
  /// the coordinates, coefficients uniform in [-1, 1].
  HamiltonianSpec polynomial(int dim, int max_degree, int max_terms = 6);
  /// Uniformly distributed rotation of 3-space (normalized random quaternion).
  sphere::Mat3 rotation();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a(std::string_view s) noexcept;

}  // namespace genfun
