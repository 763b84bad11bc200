#pragma once

#include <cstdint>

#include "definetti/budget.hpp"
#include "definetti/qstate.hpp"
#include "definetti/solver.hpp"

namespace definetti {

struct HsepResult {
  double value = 0.0;  // certified max of tr(M~ rho) within obj_tol
  double upper = 0.0;  // bisection upper end
  int k = 0;
  int l = 0;
  double sandwich_gap = 0.0;  // sqrt(2 l^3 ln n / (k - l)), infinite for k <= l
  bool unit_interval = true;  // 0 <= M <= I within 1e-9
  MaximizeResult solve;
};

// Maximises tr(M~ rho) over states rho on k blocks of l systems (one copy of
// M's parties per block) invariant under permuting blocks, where M~ applies M
// to party i of block i. This upper-bounds h_Sep(M).
HsepResult hsep_upper_bound(const HermitianOp& m, int k, double obj_tol = 1e-4, const DykstraOptions& opts = {},
                            const Budget& budget = Budget::from_environment());

// Exact value of the same relaxation: the largest eigenvalue of the block
// symmetrisation of M~.
double hsep_relaxation_exact(const HermitianOp& m, int k, const Budget& budget = Budget::from_environment());

// l * ceil(2 l^3 ln(n) / eps^2 + l), saturating at INT64_MAX.
std::int64_t sos_level_for(double n, int l, double eps);

}  // namespace definetti
