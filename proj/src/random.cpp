#include "definetti/random.hpp"

#include <cmath>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"

namespace definetti {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Matrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

}  // namespace

CVector random_unit_vector(int d, Rng& rng) {
  CVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_unitary(int d, Rng& rng) {
  Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    const double a = std::abs(diag);
    if (a > 0) q.col(i) *= diag / a;
  }
  return q;
}

Matrix random_hermitian(int d, Rng& rng) {
  Matrix g = ginibre(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

Matrix random_density(int d, Rng& rng, int rank) {
  if (rank <= 0 || rank > d) rank = d;
  Matrix g = ginibre(d, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

Matrix random_pure_density(int d, Rng& rng) {
  CVector v = random_unit_vector(d, rng);
  return v * v.adjoint();
}

std::vector<Matrix> random_povm_elements(int d, int outcomes, Rng& rng) {
  require(outcomes >= 1, ErrorKind::InvalidInput, "random POVM needs at least one outcome");
  std::vector<Matrix> g;
  Matrix s = Matrix::Zero(d, d);
  for (int k = 0; k < outcomes; ++k) {
    g.push_back(random_density(d, rng));
    s += g.back();
  }
  Matrix inv_sqrt = spectral_map(s, [](double x) { return 1.0 / std::sqrt(x); });
  for (auto& m : g) m = hermitian_part(inv_sqrt * m * inv_sqrt);
  return g;
}

std::vector<double> random_probability_vector(int n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double total = 0;
  for (auto& x : p) total += (x = e(rng));
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace definetti
