#pragma once

#include <optional>
#include <string>
#include <vector>

#include "definetti/types.hpp"

namespace definetti {

// coeff (x) identity, with coeff acting on `systems` in the listed order.
// An empty system list with a 1x1 coeff c denotes c * identity.
struct LocalOperator {
  Indices systems;
  Matrix coeff;
};

// <coeff (x) I, X> = target.
struct LinearConstraint {
  Indices systems;
  Matrix coeff;
  double target = 0.0;
};

struct AffinePsdProblem {
  Dims dims;  // subsystem structure of the Hermitian variable
  std::vector<LinearConstraint> constraints;
  bool psd = true;
  std::optional<double> trace_value;
  // Groups of subsystems that X must be invariant under permuting (all blocks
  // of equal length with matching dims; the full symmetric group acts).
  std::vector<Indices> exchangeable_blocks;

  Eigen::Index side() const;
  void validate() const;
};

enum class SolveStatus { Feasible, InfeasibleHeuristic, IterationLimit };
std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::IterationLimit;
  std::optional<Matrix> point;
  double affine_residual = 0.0;
  double psd_residual = 0.0;
  double symmetry_residual = 0.0;
  double gap = 0.0;  // last distance between the affine and PSD iterates
  long iterations = 0;
  std::optional<double> objective;
  std::string note;
};

struct DykstraOptions {
  long max_iter = 200000;
  double feas_tol = 1e-7;
  double gap_tol = 1e-7;
  long stall_window = 500;
  double stall_rel = 1e-3;  // relative gap decrease over a window counted as a stall
  std::optional<Matrix> start;
};

SolveReport dykstra_feasibility(const AffinePsdProblem& p, const DykstraOptions& opts = {});

// Residuals of a candidate point, computed from dense embedded operators and
// explicit block transpositions, independently of the solver internals.
struct PointResiduals {
  double affine = 0.0;
  double psd = 0.0;  // max(0, -min eigenvalue)
  double symmetry = 0.0;
  double hermiticity = 0.0;
};
PointResiduals check_point(const AffinePsdProblem& p, const Matrix& x);

struct MaximizeResult {
  double value = 0.0;  // largest lambda certified feasible
  double upper = 0.0;  // smallest lambda found infeasible (or the bracket top)
  int steps = 0;
  SolveReport report;  // witness at `value`
};

// Bisection on lambda with the extra constraint <objective, X> = lambda.
MaximizeResult maximize_linear_psd(const AffinePsdProblem& p, const LocalOperator& objective,
                                   double lo, double hi, double obj_tol = 1e-4,
                                   const DykstraOptions& opts = {});

// Orthogonal projection onto matrices invariant under permuting the blocks.
class BlockSymmetrizer {
 public:
  BlockSymmetrizer() = default;
  BlockSymmetrizer(const Dims& dims, const std::vector<Indices>& blocks);
  bool trivial() const { return orbit_.empty(); }
  Matrix apply(const Matrix& x) const;

 private:
  Eigen::Index n_ = 0;
  std::vector<int> orbit_;  // orbit id of entry (r, c), stored at c * n + r
  std::vector<double> inv_size_;
};

}  // namespace definetti
