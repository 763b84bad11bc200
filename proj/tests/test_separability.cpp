#include <doctest.h>

#include <cmath>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"
#include "definetti/random.hpp"
#include "definetti/separability.hpp"
#include "oracles.hpp"

using namespace definetti;

namespace {

Matrix singlet_projector() {
  CVector v = CVector::Zero(4);
  v(1) = 1 / std::sqrt(2.0);
  v(2) = -1 / std::sqrt(2.0);
  return v * v.adjoint();
}

Matrix bloch_projector(int axis, int sign) {
  return (oracle::pauli(0) + sign * oracle::pauli(axis)) / 2.0;
}

// Mixture of random product pure states.
Matrix random_separable(const Dims& dims, int terms, Rng& rng) {
  const std::vector<double> w = random_probability_vector(terms, rng);
  Eigen::Index n = 1;
  for (int d : dims) n *= d;
  Matrix out = Matrix::Zero(n, n);
  for (int t = 0; t < terms; ++t) {
    Matrix prod = Matrix::Ones(1, 1);
    for (int d : dims) prod = kron(prod, random_pure_density(d, rng));
    out += w[t] * prod;
  }
  return out;
}

}  // namespace

TEST_CASE("schedule formula") {
  const double l = 2, eps = 0.5;
  CHECK(separability_schedule({2, 2}, eps) == l + std::ceil(4 * l * l * 2 * std::log(2.0) / (eps * eps)));
  CHECK(separability_schedule({3}, 1.0) == 1 + std::ceil(4 * std::log(3.0)));
}

TEST_CASE("the anti-aligned Pauli mixture is the Werner state at one third") {
  // (1/6) sum over axes and signs of |s n><s n| (x) |-s n><-s n| equals
  // 1/3 singlet + 2/3 I/4; mixing with I/4 reaches every weight below 1/3.
  Matrix mix = Matrix::Zero(4, 4);
  for (int axis = 1; axis <= 3; ++axis)
    for (int s : {1, -1}) mix += kron(bloch_projector(axis, s), bloch_projector(axis, -s)) / 6.0;
  const Matrix id4 = Matrix::Identity(4, 4) / 4;
  CHECK(oracle::max_abs(mix - (singlet_projector() / 3 + 2 * id4 / 3)) < 1e-14);
  const Matrix werner = 0.3 * mix + 0.7 * id4;
  CHECK(oracle::max_abs(werner - (0.9 * id4 + 0.1 * singlet_projector())) < 1e-14);
}

TEST_CASE("singlet is far from separable at k = 2") {
  const DensityMatrix rho({2, 2}, singlet_projector());
  const SeparabilityResult r = separability_test(rho, 0.5, 2);
  CHECK(r.verdict == SeparabilityVerdict::FarFromSeparable);
  CHECK(r.k == 2);
  CHECK(r.override_used);
  CHECK(r.scheduled_k == separability_schedule({2, 2}, 0.25));
  CHECK(r.mixing == doctest::Approx(0.125));
}

TEST_CASE("separable Werner mixture is consistent at k = 3") {
  const DensityMatrix rho({2, 2}, 0.9 * Matrix::Identity(4, 4) / 4 + 0.1 * singlet_projector());
  const SeparabilityResult r = separability_test(rho, 0.5, 3);
  CHECK(r.verdict == SeparabilityVerdict::SeparableConsistent);
  REQUIRE(r.report.point);
  CHECK(r.report.point->rows() == 64);
}

TEST_CASE("explicit separable states are never rejected") {
  Rng rng(31);
  for (int t = 0; t < 4; ++t) {
    const DensityMatrix rho({2, 2}, random_separable({2, 2}, 1 + t, rng));
    for (int k : {2, 3}) {
      CAPTURE(t);
      CAPTURE(k);
      CHECK(separability_test(rho, 0.5, k).verdict == SeparabilityVerdict::SeparableConsistent);
    }
  }
  const DensityMatrix rho({2, 3}, random_separable({2, 3}, 3, rng));
  CHECK(separability_test(rho, 0.5, 2).verdict == SeparabilityVerdict::SeparableConsistent);
}

TEST_CASE("three-qubit product state is consistent") {
  Rng rng(32);
  const Matrix prod = kron(kron(random_density(2, rng), random_density(2, rng)), random_density(2, rng));
  const DensityMatrix rho({2, 2, 2}, prod);
  CHECK(separability_test(rho, 0.5, 3).verdict == SeparabilityVerdict::SeparableConsistent);
}

TEST_CASE("level checks") {
  const DensityMatrix rho = DensityMatrix::maximally_mixed({2, 2, 2});
  CHECK_THROWS_AS(separability_test(rho, 0.5, 2), Error);
  try {
    separability_test(DensityMatrix::maximally_mixed({2, 2}), 0.5);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
  CHECK_THROWS_AS(separability_test(DensityMatrix::maximally_mixed({2, 2}), 0.0, 2), Error);
}
