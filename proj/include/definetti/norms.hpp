#pragma once

#include <cstdint>
#include <vector>

#include "definetti/qstate.hpp"

namespace definetti {

// sqrt( sum over subsets I of the parts of ||tr_I X||_2^2 ), the empty subset
// and the full set included. `parts` must partition the subsystems of x.
double norm_2l(const HermitianOp& x, const std::vector<Indices>& parts);

struct LoccBound {
  double value = 0.0;  // sum_k ||tr_B((I (x) M_k) X)||_1 for the POVM below
  Povm measurement;    // on B
};

// See-saw lower bound on the one-way LOCC norm of X on A (x) B (measurement
// on B, outcome sent to A). Alternates the analytic A step Z_k = sign(X_k)
// with an LP over POVMs built from a frame of rank-one projectors.
LoccBound one_locc_lower_bound(const HermitianOp& x, int restarts = 32, int iters = 60,
                               std::uint64_t seed = 1);

// sum_k ||tr_B((I (x) M_k) X)||_1 for a given B measurement.
double one_locc_value(const Matrix& x, int dim_a, int dim_b, const Povm& b_measurement);

}  // namespace definetti
