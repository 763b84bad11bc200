#include <doctest.h>

#include <cmath>

#include "definetti/errors.hpp"
#include "definetti/extension.hpp"
#include "definetti/linalg.hpp"
#include "definetti/random.hpp"
#include "definetti/subsystems.hpp"
#include "oracles.hpp"

using namespace definetti;

namespace {

CVector singlet_vector() {
  CVector v = CVector::Zero(4);
  v(1) = 1 / std::sqrt(2.0);
  v(2) = -1 / std::sqrt(2.0);
  return v;
}

Matrix max_entangled_projector() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1 / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("product state extends at every k") {
  Rng rng(3);
  const Matrix sa = random_density(2, rng), sb = random_density(2, rng);
  const DensityMatrix rho({2, 2}, kron(sa, sb));
  for (int k : {1, 2, 3, 4}) {
    CAPTURE(k);
    const ExtensionSpec spec{2, 2, k, ExtensionMode::PermutationInvariant};
    const SolveReport r = find_symmetric_extension(rho, spec);
    REQUIRE(r.status == SolveStatus::Feasible);
    REQUIRE(r.point);
    CHECK(r.point->rows() == static_cast<Eigen::Index>(std::pow(2, k + 1)));
    const ExtensionCheck c = verify_extension(rho, *r.point, spec);
    CHECK(c.worst(spec.mode) < 1e-6);
  }
}

TEST_CASE("symmetric-subspace mode on a pure product state") {
  Rng rng(4);
  const CVector a = random_unit_vector(2, rng), b = random_unit_vector(3, rng);
  const DensityMatrix rho = DensityMatrix::pure({2, 3}, CVector(kron(a, b)));
  const ExtensionSpec spec{2, 3, 3, ExtensionMode::SymmetricSubspace};
  const SolveReport r = find_symmetric_extension(rho, spec);
  REQUIRE(r.status == SolveStatus::Feasible);
  const ExtensionCheck c = verify_extension(rho, *r.point, spec);
  CHECK(c.worst(spec.mode) < 1e-6);
  CHECK(c.support < 1e-6);
}

TEST_CASE("singlet has no two-extension") {
  const DensityMatrix rho = DensityMatrix::pure({2, 2}, singlet_vector());
  for (ExtensionMode mode : {ExtensionMode::PermutationInvariant, ExtensionMode::SymmetricSubspace}) {
    const SolveReport r = find_symmetric_extension(rho, {2, 2, 2, mode});
    CHECK(r.status == SolveStatus::InfeasibleHeuristic);
  }
}

TEST_CASE("a pure AB_1 marginal forces the AB_2 marginal far from the singlet") {
  // Any state on A B_1 B_2 whose A B_1 marginal is pure equals that pure
  // state times some tau on B_2, so its A B_2 marginal is I/2 (x) tau.
  Rng rng(8);
  const Matrix singlet = DensityMatrix::pure({2, 2}, singlet_vector()).data();
  double closest = 10;
  for (int t = 0; t < 2000; ++t) {
    const Matrix tau = random_density(2, rng, 1 + t % 2);
    const Matrix full = kron(singlet, tau);
    CHECK(oracle::max_abs(oracle::naive_partial_trace(full, {2, 2, 2}, {0, 1}) - singlet) < 1e-12);
    const Matrix ab2 = oracle::naive_partial_trace(full, {2, 2, 2}, {0, 2});
    closest = std::min(closest, trace_norm(Matrix(ab2 - singlet)));
  }
  CHECK(closest > 1.0);
}

TEST_CASE("isotropic state at weight one half extends twice") {
  const Matrix iso = 0.5 * max_entangled_projector() + 0.5 * Matrix::Identity(4, 4) / 4;
  const DensityMatrix rho({2, 2}, iso);
  const ExtensionSpec spec{2, 2, 2, ExtensionMode::PermutationInvariant};
  const SolveReport r = find_symmetric_extension(rho, spec);
  REQUIRE(r.status == SolveStatus::Feasible);
  CHECK(verify_extension(rho, *r.point, spec).worst(spec.mode) < 1e-6);
}

TEST_CASE("marginal of a symmetrised random state extends") {
  Rng rng(12);
  for (int k : {2, 3}) {
    const Dims dims{2, 2, 2, 2};
    Dims d(dims.begin(), dims.begin() + k + 1);
    const Matrix big = random_density(static_cast<int>(product(d)), rng);
    std::vector<Indices> blocks;
    for (int j = 1; j <= k; ++j) blocks.push_back({j});
    const Matrix sym = BlockSymmetrizer(d, blocks).apply(big);
    const DensityMatrix rho({2, 2}, partial_trace(sym, d, {0, 1}));
    const ExtensionSpec spec{2, 2, k, ExtensionMode::PermutationInvariant};
    const SolveReport r = find_symmetric_extension(rho, spec);
    REQUIRE(r.status == SolveStatus::Feasible);
    CHECK(verify_extension(rho, *r.point, spec).worst(spec.mode) < 1e-6);
  }
}

TEST_CASE("extension spec validation") {
  const DensityMatrix rho = DensityMatrix::maximally_mixed({2, 2});
  CHECK_THROWS_AS(find_symmetric_extension(rho, {2, 3, 2, ExtensionMode::PermutationInvariant}), Error);
  CHECK_THROWS_AS(find_symmetric_extension(rho, {2, 2, 0, ExtensionMode::PermutationInvariant}), Error);
  Budget small;
  small.max_dim = 16;
  try {
    find_symmetric_extension(rho, {2, 2, 4, ExtensionMode::PermutationInvariant}, {}, small);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
}
