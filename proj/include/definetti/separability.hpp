#pragma once

#include <optional>
#include <string>

#include "definetti/budget.hpp"
#include "definetti/qstate.hpp"
#include "definetti/solver.hpp"

namespace definetti {

enum class SeparabilityVerdict { SeparableConsistent, FarFromSeparable };
std::string to_string(SeparabilityVerdict v);

struct SeparabilityResult {
  SeparabilityVerdict verdict = SeparabilityVerdict::FarFromSeparable;
  int k = 0;                 // extension level actually used
  double scheduled_k = 0.0;  // l + ceil(4 l^2 eps^-2 sum_j ln|A_j|)
  bool override_used = false;
  double mixing = 0.0;       // weight of I/d mixed into rho before the search
  SolveReport report;
};

// l + ceil(4 l^2 / eps^2 * sum_j ln d_j), as a double since it is usually huge.
double separability_schedule(const Dims& dims, double eps);

// Searches for a state on k blocks X^1..X^k, each a copy of A_1..A_l, that is
// invariant under permuting blocks and whose marginal on any l systems taking
// one copy of each A_i equals rho (one representative per pattern of shared
// blocks; the pattern X_1^1 X_2^2 ... X_l^l among them). Feasible means
// SeparableConsistent; a stalled search means FarFromSeparable at tolerance.
//
// The search runs on (1 - eps/4) rho + (eps/4) I/d, which is separable with
// full-rank extensions whenever rho is separable and stays eps/2-far in
// trace norm whenever rho is eps-far; the unforced level is therefore the
// schedule at eps/2.
SeparabilityResult separability_test(const DensityMatrix& rho, double eps, std::optional<int> k_override = {},
                                     const DykstraOptions& opts = {},
                                     const Budget& budget = Budget::from_environment());

}  // namespace definetti
