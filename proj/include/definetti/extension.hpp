#pragma once

#include <string>

#include "definetti/budget.hpp"
#include "definetti/qstate.hpp"
#include "definetti/solver.hpp"

namespace definetti {

enum class ExtensionMode { PermutationInvariant, SymmetricSubspace };
std::string to_string(ExtensionMode m);

struct ExtensionSpec {
  int dim_a = 2;
  int dim_b = 2;
  int k = 1;
  ExtensionMode mode = ExtensionMode::PermutationInvariant;

  Dims extended_dims() const;  // {dim_a, dim_b, ..., dim_b}
  double total_dim() const;
  void validate(const Budget& budget) const;
};

// Searches for a state on A (x) B^{(x)k} whose AB_j marginals all equal rho.
// PermutationInvariant: invariant under permuting the B systems.
// SymmetricSubspace: B systems supported on their symmetric subspace; solved
// in the compressed variable on A (x) Sym^k(B) and lifted.
// The returned point is always the full extension; residuals are recomputed
// on it by verify_extension.
SolveReport find_symmetric_extension(const DensityMatrix& rho, const ExtensionSpec& spec,
                                     const DykstraOptions& opts = {},
                                     const Budget& budget = Budget::from_environment());

struct ExtensionCheck {
  double marginal = 0.0;  // max over j of max-abs entry of ext^{AB_j} - rho
  double trace = 0.0;
  double psd = 0.0;
  double symmetry = 0.0;  // max-abs change under adjacent B transpositions
  double support = 0.0;   // weight of the B systems outside the symmetric subspace
  double worst(ExtensionMode mode) const;
};
ExtensionCheck verify_extension(const DensityMatrix& rho, const Matrix& ext, const ExtensionSpec& spec);

}  // namespace definetti
