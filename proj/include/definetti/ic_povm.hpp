#pragma once

#include "definetti/qstate.hpp"
#include "definetti/types.hpp"

namespace definetti {

// Informationally complete rank-one POVM on C^d. d = 2 gives the six Pauli
// eigenprojectors / 3, prime d the d + 1 mutually unbiased bases / (d + 1),
// any other d a seeded random rank-one POVM redrawn until its Gram rank is d^2.
Povm informationally_complete_povm(int d);

// Gram matrix G_ij = tr(E_i E_j) of the POVM elements.
RMatrix povm_gram(const Povm& povm);
int povm_gram_rank(const Povm& povm, double tol = 1e-10);

// Inverse of X -> (tr(E_k X))_k on the span of the elements.
class IcReconstructor {
 public:
  explicit IcReconstructor(const Povm& povm);
  RVector probabilities(const Matrix& x) const;
  Matrix reconstruct(const RVector& p) const;

 private:
  int dim_;
  std::vector<Matrix> basis_;  // orthonormal Hermitian basis
  RMatrix pinv_;               // coordinates = pinv_ * p
  std::vector<Matrix> elements_;
};

}  // namespace definetti
