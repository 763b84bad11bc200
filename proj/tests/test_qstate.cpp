#include <doctest.h>

#include <cmath>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"
#include "definetti/qstate.hpp"
#include "definetti/random.hpp"
#include "definetti/subsystems.hpp"
#include "oracles.hpp"

using namespace definetti;

namespace {

DensityMatrix ket(int d, int i) {
  CVector v = CVector::Zero(d);
  v(i) = 1.0;
  return DensityMatrix::pure({d}, v);
}

DensityMatrix singlet() {
  CVector v = CVector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return DensityMatrix::pure({2, 2}, v);
}

}  // namespace

TEST_CASE("eigh agrees with characteristic polynomial roots for d <= 3") {
  Rng rng(11);
  for (int d = 1; d <= 3; ++d)
    for (int t = 0; t < 50; ++t) {
      Matrix h = random_hermitian(d, rng);
      RVector w = eigh(h).values;
      auto roots = oracle::charpoly_eigenvalues(h);
      for (int i = 0; i < d; ++i) CHECK(w(i) == doctest::Approx(roots[i]).epsilon(1e-10));
    }
}

TEST_CASE("eigh reconstructs the matrix") {
  Rng rng(12);
  Matrix h = random_hermitian(17, rng);
  auto e = eigh(h);
  CHECK(oracle::max_abs(e.vectors * e.values.asDiagonal() * e.vectors.adjoint() - h) < 1e-12);
}

TEST_CASE("constructors reject invalid data") {
  Matrix m = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix({2}, m), Error);  // trace 2
  Matrix nh(2, 2);
  nh << 0.5, 0.1, 0.0, 0.5;
  CHECK_THROWS_AS(DensityMatrix({2}, nh), Error);
  Matrix neg(2, 2);
  neg << 1.1, 0, 0, -0.1;
  CHECK_THROWS_AS(DensityMatrix({2}, neg), Error);
  CHECK_THROWS_AS(DensityMatrix({3}, Matrix::Identity(2, 2) / 2.0), Error);
  CHECK_THROWS_AS(Povm(2, {Matrix::Identity(2, 2) * 0.5}), Error);
  try {
    DensityMatrix({2}, neg);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find("-0.1") != std::string::npos);
  }
}

TEST_CASE("tensor") {
  auto mm = tensor(DensityMatrix::maximally_mixed({2}), DensityMatrix::maximally_mixed({2}));
  CHECK(mm.dims() == Dims{2, 2});
  CHECK(oracle::max_abs(mm.data() - Matrix::Identity(4, 4) / 4.0) < 1e-15);
  auto p = tensor(ket(2, 0), ket(2, 1));
  CHECK(std::abs(p.data()(1, 1) - 1.0) < 1e-15);
  Rng rng(1);
  Matrix a = random_hermitian(3, rng), b = random_hermitian(2, rng);
  auto t = tensor(HermitianOp({3}, a), HermitianOp({2}, b));
  CHECK(std::abs(t.data().trace() - a.trace() * b.trace()) < 1e-12);
}

TEST_CASE("partial trace") {
  auto s = singlet();
  CHECK(oracle::max_abs(partial_trace(s, {0}).data() - Matrix::Identity(2, 2) / 2.0) < 1e-15);
  Rng rng(2);
  auto ra = oracle::random_state({2}, rng), rb = oracle::random_state({3}, rng);
  auto prod = tensor(ra, rb);
  CHECK(oracle::max_abs(partial_trace(prod, {0}).data() - ra.data()) < 1e-12);
  CHECK(oracle::max_abs(partial_trace(prod, {1}).data() - rb.data()) < 1e-12);
  auto r = oracle::random_state({2, 3, 2}, rng);
  auto m = partial_trace(r, {0, 2});
  CHECK(m.dims() == Dims{2, 2});
  CHECK(std::abs(m.data().trace().real() - 1.0) < 1e-12);
  CHECK(oracle::max_abs(m.data() - oracle::naive_partial_trace(r.data(), r.dims(), {0, 2})) < 1e-13);
  CHECK(oracle::max_abs(partial_trace(r, {1}).data() -
                        oracle::naive_partial_trace(r.data(), r.dims(), {1})) < 1e-13);
  CHECK_THROWS_AS(partial_trace(r, {3}), Error);
  // Keep order is normalised to ascending.
  CHECK(partial_trace(r, {2, 0}).data().isApprox(m.data()));
}

TEST_CASE("permute systems") {
  Rng rng(3);
  auto ra = oracle::random_state({2}, rng), rb = oracle::random_state({3}, rng);
  auto ab = tensor(ra, rb);
  CHECK(oracle::max_abs(permute_systems(ab, {0, 1}).data() - ab.data()) == 0.0);
  auto ba = permute_systems(ab, {1, 0});
  CHECK(ba.dims() == Dims{3, 2});
  CHECK(oracle::max_abs(ba.data() - tensor(rb, ra).data()) < 1e-15);
  auto r = oracle::random_state({2, 3, 2}, rng);
  Indices perm{2, 0, 1}, inv{1, 2, 0};
  auto back = permute_systems(permute_systems(r, perm), inv);
  CHECK(oracle::max_abs(back.data() - r.data()) < 1e-14);
  Matrix p = oracle::permutation_operator(r.dims(), perm);
  CHECK(oracle::max_abs(permute_systems(r, perm).data() - p * r.data() * p.adjoint()) < 1e-14);
  CHECK_THROWS_AS(permute_systems(r, {0, 0, 1}), Error);
}

TEST_CASE("qc channel") {
  CVector plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  QcChannel comp(Povm::computational(2));
  auto out = apply_qc_channel(DensityMatrix::pure({2}, plus), comp, 0);
  CHECK(oracle::max_abs(out.data() - Matrix::Identity(2, 2) / 2.0) < 1e-15);

  Rng rng(4);
  auto ra = oracle::random_state({3}, rng), rb = oracle::random_state({2}, rng);
  QcChannel ch(Povm(3, random_povm_elements(3, 4, rng)));
  auto lhs = apply_qc_channel(tensor(ra, rb), ch, 0);
  auto rhs = tensor(DensityMatrix::trusted({4}, ch.apply(ra.data())), rb);
  CHECK(lhs.dims() == Dims{4, 2});
  CHECK(oracle::max_abs(lhs.data() - rhs.data()) < 1e-13);

  for (int t = 0; t < 20; ++t) {
    HermitianOp x({2, 3}, random_hermitian(6, rng));
    QcChannel c2(Povm(3, random_povm_elements(3, 3, rng)));
    auto y = apply_qc_channel(x, c2, 1);
    CHECK(trace_norm(y) <= trace_norm(x) + 1e-12);
    auto st = oracle::random_state({2, 3}, rng);
    auto ys = apply_qc_channel(st, c2, 1);
    CHECK(std::abs(ys.data().trace().real() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(apply_qc_channel(ra, QcChannel(Povm::computational(2)), 0), Error);
}

TEST_CASE("conditional states") {
  Rng rng(5);
  auto ra = oracle::random_state({2}, rng), rb = oracle::random_state({3}, rng);
  QcChannel ch(Povm::from_basis(random_unitary(3, rng)));
  auto e = conditional_states(tensor(ra, rb), ch, {1});
  for (const auto& s : e.states) CHECK(oracle::max_abs(s.data() - ra.data()) < 1e-12);

  auto sc = conditional_states(singlet(), QcChannel(Povm::computational(2)), {1});
  REQUIRE(sc.size() == 2);
  CHECK(sc.weights[0] == doctest::Approx(0.5));
  CHECK(std::abs(sc.states[0].data()(1, 1) - 1.0) < 1e-14);
  CHECK(std::abs(sc.states[1].data()(0, 0) - 1.0) < 1e-14);

  for (int t = 0; t < 10; ++t) {
    auto r = oracle::random_state({2, 2, 3}, rng);
    QcChannel c(Povm(2, random_povm_elements(2, 3, rng)));
    auto ens = conditional_states(r, c, {0, 1});
    ens.validate();
    CHECK(oracle::max_abs(ens.average() - partial_trace(r, {2}).data()) < 1e-12);
  }
  // Zero-probability outcomes are dropped and nothing is NaN.
  auto z = conditional_states(tensor(ket(2, 0), ket(2, 0)), QcChannel(Povm::computational(2)), {1});
  CHECK(z.size() == 1);
  CHECK(z.weights[0] == 1.0);
}

TEST_CASE("measurement record order follows the listed subsystems") {
  auto r = tensor(tensor(ket(2, 0), ket(2, 1)), ket(2, 1));
  auto e = conditional_states(r, QcChannel(Povm::computational(2)), {1, 0});
  REQUIRE(e.size() == 1);
  CHECK(e.outcomes[0] == Indices{1, 0});
}

TEST_CASE("trace distance") {
  Rng rng(6);
  auto a = oracle::random_state({3}, rng), b = oracle::random_state({3}, rng);
  CHECK(trace_distance(a, a) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(trace_distance(ket(2, 0), ket(2, 1)) == doctest::Approx(2.0));
  Eigen::ComplexEigenSolver<Matrix> es(a.data() - b.data());
  double s = 0;
  for (int i = 0; i < 3; ++i) s += std::abs(es.eigenvalues()(i));
  CHECK(std::abs(trace_distance(a, b) - s) < 1e-12);
  auto c = oracle::random_state({3}, rng);
  CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
}

TEST_CASE("symmetric subspace projector") {
  CHECK(oracle::max_abs(symmetric_subspace_projector(4, 1).data() - Matrix::Identity(4, 4)) < 1e-15);
  for (auto [d, k, rank] : {std::tuple{2, 2, 3}, {3, 2, 6}, {2, 3, 4}, {3, 3, 10}}) {
    Matrix p = symmetric_subspace_projector(d, k).data();
    CHECK(oracle::max_abs(p * p - p) < 1e-13);
    CHECK(std::abs(p.trace().real() - rank) < 1e-12);
    CHECK(oracle::max_abs(p - oracle::symmetrizer_average(d, k)) < 1e-13);
  }
}

TEST_CASE("tensor then partial trace recovers factors") {
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    auto a = oracle::random_state({2, 2}, rng), b = oracle::random_state({3}, rng);
    auto ab = tensor(a, b);
    CHECK(oracle::max_abs(partial_trace(ab, {0, 1}).data() - a.data()) < 1e-12);
    CHECK(oracle::max_abs(partial_trace(ab, {2}).data() - b.data()) < 1e-12);
  }
}
