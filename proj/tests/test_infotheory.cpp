#include <doctest.h>

#include <cmath>
#include <limits>

#include "definetti/errors.hpp"
#include "definetti/infotheory.hpp"
#include "definetti/linalg.hpp"
#include "definetti/random.hpp"
#include "oracles.hpp"

using namespace definetti;

namespace {

DensityMatrix bell_phi() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure({2, 2}, v);
}

// tr(rho ln rho - rho ln sigma) through full eigenbasis expansions.
double relent_oracle(const Matrix& rho, const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> er(rho), es(sigma);
  double a = 0, b = 0;
  for (int i = 0; i < rho.rows(); ++i) {
    const double l = er.eigenvalues()(i);
    if (l > 1e-14) a += l * std::log(l);
    for (int j = 0; j < rho.rows(); ++j) {
      const double ov = std::norm((er.eigenvectors().col(i).adjoint() * es.eigenvectors().col(j))(0));
      b += l * ov * std::log(es.eigenvalues()(j));
    }
  }
  return a - b;
}

}  // namespace

TEST_CASE("von Neumann entropy") {
  Rng rng(1);
  CHECK(von_neumann_entropy(DensityMatrix::pure({3}, random_unit_vector(3, rng))) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed({5})) == doctest::Approx(std::log(5.0)));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.25;
  d(1, 1) = 0.75;
  const double expect = -0.25 * std::log(0.25) - 0.75 * std::log(0.75);
  CHECK(std::abs(von_neumann_entropy(DensityMatrix({2}, d)) - expect) < 1e-12);
  for (int t = 0; t < 20; ++t) {
    auto r = oracle::random_state({4}, rng);
    const double s = von_neumann_entropy(r);
    CHECK(s >= 0);
    CHECK(s <= std::log(4.0) + 1e-12);
  }
}

TEST_CASE("relative entropy") {
  Rng rng(2);
  auto r = oracle::random_state({3}, rng), s = oracle::random_state({3}, rng);
  CHECK(std::abs(relative_entropy(r, r)) < 1e-12);
  CVector e0 = CVector::Zero(2), e1 = CVector::Zero(2);
  e0(0) = 1;
  e1(1) = 1;
  CHECK(relative_entropy(DensityMatrix::pure({2}, e0), DensityMatrix::pure({2}, e1)) ==
        std::numeric_limits<double>::infinity());
  CHECK(std::abs(relative_entropy(r, s) - relent_oracle(r.data(), s.data())) < 1e-10);
  CHECK(relative_entropy(r, s) > 0);
  // Rank-deficient rho inside the support of sigma stays finite.
  auto pure = DensityMatrix::pure({3}, random_unit_vector(3, rng));
  CHECK(std::isfinite(relative_entropy(pure, s)));
}

TEST_CASE("mutual information") {
  Rng rng(3);
  auto prod = tensor(oracle::random_state({2}, rng), oracle::random_state({3}, rng));
  CHECK(std::abs(mutual_information(prod, {0}, {1})) < 1e-12);
  CHECK(mutual_information(bell_phi(), {0}, {1}) == doctest::Approx(2 * std::log(2.0)));
  Matrix cc = Matrix::Zero(4, 4);
  cc(0, 0) = cc(3, 3) = 0.5;
  CHECK(mutual_information(DensityMatrix({2, 2}, cc), {0}, {1}) == doctest::Approx(std::log(2.0)));
  auto r = oracle::random_state({2, 3}, rng);
  auto rel = relative_entropy(r, tensor(partial_trace(r, {0}), partial_trace(r, {1})));
  CHECK(std::abs(mutual_information(r, {0}, {1}) - rel) < 1e-10);
  CHECK_THROWS_AS(mutual_information(r, {0}, {0}), Error);
}

TEST_CASE("conditional mutual information") {
  Rng rng(4);
  // Product conditionals give zero.
  Matrix m = Matrix::Zero(8, 8);
  for (int k = 0; k < 2; ++k) {
    Matrix blk = kron(random_density(2, rng), random_density(2, rng));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(2 * i + k, 2 * j + k) = 0.5 * blk(i, j);
  }
  QqcState x(DensityMatrix({2, 2, 2}, m), {2});
  CHECK(std::abs(conditional_mutual_information(x, {0}, {1}, {2})) < 1e-12);
  auto y = random_qqc_state({2, 2, 3}, {2}, rng);
  CHECK(conditional_mutual_information(y, {0}, {1}, {2}) >= 0);
  CHECK(conditional_mutual_information(y, {0}, {1}, {}) ==
        doctest::Approx(mutual_information(y.state(), {0}, {1})).epsilon(1e-12));
  CHECK_THROWS_AS(conditional_mutual_information(y, {0}, {2}, {1}), Error);
  CHECK_THROWS_AS(QqcState(DensityMatrix::pure({2, 2}, bell_phi().data().col(0) * std::sqrt(2.0)), {1}),
                  Error);
}

TEST_CASE("chain rule on random qqc states") {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    auto x = random_qqc_state({2, 3, 2, 2}, {1, 3}, rng);
    const double lhs = conditional_mutual_information(x, {0}, {1, 2}, {3});
    const double rhs = conditional_mutual_information(x, {0}, {1}, {3}) +
                       conditional_mutual_information(x, {0}, {2}, {1, 3});
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("multipartite mutual information") {
  Rng rng(6);
  auto p = tensor(tensor(oracle::random_state({2}, rng), oracle::random_state({2}, rng)),
                  oracle::random_state({3}, rng));
  CHECK(std::abs(multipartite_mutual_information(p, {{0}, {1}, {2}})) < 1e-12);
  CVector ghz = CVector::Zero(8);
  ghz(0) = ghz(7) = 1 / std::sqrt(2.0);
  CHECK(multipartite_mutual_information(DensityMatrix::pure({2, 2, 2}, ghz), {{0}, {1}, {2}}) ==
        doctest::Approx(3 * std::log(2.0)));
  for (int t = 0; t < 10; ++t) {
    auto r = oracle::random_state({2, 2, 2, 2}, rng);
    const double whole = multipartite_mutual_information(r, {{0}, {1}, {2}, {3}});
    const double tele = mutual_information(r, {0}, {1}) + mutual_information(r, {0, 1}, {2}) +
                        mutual_information(r, {0, 1, 2}, {3});
    CHECK(std::abs(whole - tele) < 1e-9);
    auto prod = tensor(tensor(tensor(partial_trace(r, {0}), partial_trace(r, {1})), partial_trace(r, {2})),
                       partial_trace(r, {3}));
    CHECK(std::abs(whole - relative_entropy(r, prod)) < 1e-10);
  }
}

TEST_CASE("identity battery") {
  Rng rng(7);
  for (const auto& c : check_information_identities(20, 5, rng)) {
    INFO(c.name << " worst " << c.worst);
    CHECK(c.passed());
    CHECK(c.trials > 0);
  }
}
