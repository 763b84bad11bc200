#pragma once

#include <vector>

#include "definetti/qstate.hpp"

namespace definetti {

// A state whose `classical` subsystems form a classical register: the joint
// operator is block diagonal in the register's computational basis.
class QqcState {
 public:
  QqcState(DensityMatrix state, Indices classical, double diag_tol = kDiagTol);
  const DensityMatrix& state() const { return state_; }
  const Indices& classical() const { return classical_; }

 private:
  DensityMatrix state_;
  Indices classical_;
};

// All entropies are in nats.
double shannon_entropy(const std::vector<double>& p);
double von_neumann_entropy(const DensityMatrix& x);
double von_neumann_entropy(const Matrix& x);
// +infinity when supp(rho) is not contained in supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
double relative_entropy(const Matrix& rho, const Matrix& sigma);

// Entropy of the marginal on `systems` (empty set gives 0).
double marginal_entropy(const DensityMatrix& x, const Indices& systems);

// I(A:B) for disjoint groups; other subsystems are traced out.
double mutual_information(const DensityMatrix& x, const Indices& a, const Indices& b);

// I(A:B|C) with C a set of classical subsystems: sum_c p(c) I(A:B)_{rho_c}.
double conditional_mutual_information(const QqcState& x, const Indices& a, const Indices& b,
                                      const Indices& cond);

// I(A_1:...:A_k) = sum_i S(A_i) - S(A_1...A_k).
double multipartite_mutual_information(const DensityMatrix& x, const std::vector<Indices>& groups);

double conditional_multipartite_mutual_information(const QqcState& x,
                                                   const std::vector<Indices>& groups,
                                                   const Indices& cond);

// Entries of the classical register indexed by `cond`: probability and the
// normalised conditional state on the remaining subsystems (ascending order).
struct ClassicalSlice {
  Indices value;
  double probability;
  DensityMatrix state;
};
std::vector<ClassicalSlice> classical_slices(const QqcState& x, const Indices& cond);

}  // namespace definetti

#include <string>

#include "definetti/random.hpp"

namespace definetti {

// Random state block diagonal in the `classical` subsystems: a random
// distribution over register values times random states on the rest.
QqcState random_qqc_state(const Dims& dims, const Indices& classical, Rng& rng);

struct IdentityCheck {
  std::string name;
  int trials = 0;
  double worst = 0.0;      // largest violation or residual seen
  double tolerance = 0.0;  // allowed value of `worst`
  bool passed() const { return worst <= tolerance; }
};

// Chain rule, Pinsker, multipartite Pinsker, multipartite-to-bipartite and
// monotonicity under qc channels on `states` random states with `channels`
// random channels each for the monotonicity check.
std::vector<IdentityCheck> check_information_identities(int states, int channels, Rng& rng);

}  // namespace definetti
