#include "definetti/ic_povm.hpp"

#include <cmath>
#include <numbers>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"
#include "definetti/random.hpp"

namespace definetti {

namespace {

bool is_prime(int d) {
  if (d < 2) return false;
  for (int f = 2; f * f <= d; ++f)
    if (d % f == 0) return false;
  return true;
}

Povm pauli_povm() {
  const double s = 1 / std::sqrt(2.0);
  const Complex i(0, 1);
  std::vector<CVector> vs;
  CVector v(2);
  v << 1, 0; vs.push_back(v);
  v << 0, 1; vs.push_back(v);
  v << s, s; vs.push_back(v);
  v << s, -s; vs.push_back(v);
  v << s, s * i; vs.push_back(v);
  v << s, -s * i; vs.push_back(v);
  std::vector<Matrix> el;
  for (const auto& u : vs) el.push_back(u * u.adjoint() / 3.0);
  return Povm(2, std::move(el));
}

// Computational basis plus the d bases (1/sqrt d) sum_n w^{a n^2 + j n} |n>.
Povm mub_povm(int d) {
  std::vector<Matrix> el;
  const double scale = 1.0 / (d + 1);
  for (int j = 0; j < d; ++j) {
    Matrix e = Matrix::Zero(d, d);
    e(j, j) = scale;
    el.push_back(e);
  }
  for (int a = 0; a < d; ++a)
    for (int j = 0; j < d; ++j) {
      CVector v(d);
      for (int n = 0; n < d; ++n) {
        const double phase = 2 * std::numbers::pi * static_cast<double>((a * n * n + j * n) % d) / d;
        v(n) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), phase);
      }
      el.push_back(scale * v * v.adjoint());
    }
  return Povm(d, std::move(el));
}

Povm random_rank_one_povm(int d) {
  const int outcomes = d * d + d;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(derive_seed(0x1c0bd5eedULL + static_cast<std::uint64_t>(d), attempt));
    std::vector<CVector> vs;
    Matrix s = Matrix::Zero(d, d);
    for (int k = 0; k < outcomes; ++k) {
      vs.push_back(random_unit_vector(d, rng));
      s += vs.back() * vs.back().adjoint();
    }
    const Matrix s_inv_half = spectral_map(s, [](double x) { return 1.0 / std::sqrt(x); });
    std::vector<Matrix> el;
    for (const auto& v : vs) {
      CVector w = s_inv_half * v;
      el.push_back(w * w.adjoint());
    }
    Povm p(d, std::move(el));
    if (povm_gram_rank(p) == d * d) return p;
  }
}

}  // namespace

Povm informationally_complete_povm(int d) {
  require(d >= 2, ErrorKind::InvalidInput, "informationally complete POVM needs d >= 2");
  if (d == 2) return pauli_povm();
  if (is_prime(d)) return mub_povm(d);
  return random_rank_one_povm(d);
}

RMatrix povm_gram(const Povm& povm) {
  const int k = povm.outcomes();
  RMatrix g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) g(i, j) = g(j, i) = inner(povm.element(i), povm.element(j));
  return g;
}

int povm_gram_rank(const Povm& povm, double tol) {
  const RMatrix g = povm_gram(povm);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol * std::max(1.0, top)) ++rank;
  return rank;
}

IcReconstructor::IcReconstructor(const Povm& povm)
    : dim_(povm.dim()), basis_(hermitian_basis(povm.dim())), elements_(povm.elements()) {
  const int k = povm.outcomes();
  const int n = static_cast<int>(basis_.size());
  RMatrix a(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = inner(elements_[i], basis_[j]);
  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(a);
  require(cod.rank() == n, ErrorKind::InvalidInput, "POVM is not informationally complete");
  pinv_ = cod.pseudoInverse();
}

RVector IcReconstructor::probabilities(const Matrix& x) const {
  require(x.rows() == dim_ && x.cols() == dim_, ErrorKind::DimensionMismatch, "operator has wrong size");
  RVector p(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) p(i) = inner(elements_[i], x);
  return p;
}

Matrix IcReconstructor::reconstruct(const RVector& p) const {
  require(p.size() == static_cast<Eigen::Index>(elements_.size()), ErrorKind::DimensionMismatch,
          "probability vector has wrong length");
  const RVector c = pinv_ * p;
  Matrix x = Matrix::Zero(dim_, dim_);
  for (std::size_t j = 0; j < basis_.size(); ++j) x += c(j) * basis_[j];
  return x;
}

}  // namespace definetti
