#include "genfun/sampling.hpp"

namespace genfun {

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SampleStream::SampleStream(std::uint64_t seed, std::string_view name) {
  const std::uint64_t tag = fnv1a(name);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  engine_.seed(seq);
}

double SampleStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int SampleStream::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

Vector SampleStream::in_ball(int dim, double radius) {
  Vector v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = uniform(-1.0, 1.0);
  } while (v.squaredNorm() > 1.0);
  return radius * v;
}

sphere::SpherePoint SampleStream::on_sphere() {
  while (true) {
    const Vector v = in_ball(3);
    if (v.norm() > 1e-3) return sphere::SpherePoint(sphere::Vec3(v[0], v[1], v[2]));
  }
}

Matrix SampleStream::symmetric_matrix(int dim, double norm) {
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) m(i, j) = m(j, i) = uniform(-1.0, 1.0);
  }
  const double spectral = Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().cwiseAbs().maxCoeff();
  return spectral > 0.0 ? Matrix(m * (norm / spectral)) : m;
}

HamiltonianSpec SampleStream::polynomial(int dim, int max_degree, int max_terms) {
  std::vector<Monomial> terms;
  const int count = uniform_int(1, max_terms);
  for (int t = 0; t < count; ++t) {
    std::vector<int> exponent(static_cast<std::size_t>(dim), 0);
    const int degree = uniform_int(1, max_degree);
    for (int k = 0; k < degree; ++k) ++exponent[static_cast<std::size_t>(uniform_int(0, dim - 1))];
    terms.push_back({std::move(exponent), uniform(-1.0, 1.0)});
  }
  return HamiltonianSpec::polynomial(std::move(terms), dim);
}

sphere::Mat3 SampleStream::rotation() {
  Vector v;
  do {
    v = in_ball(4);
  } while (v.norm() < 1e-3);
  const Eigen::Quaterniond q(v[0], v[1], v[2], v[3]);
  return q.normalized().toRotationMatrix();
}

}  // namespace genfun
