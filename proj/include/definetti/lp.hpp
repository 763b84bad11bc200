#pragma once

#include <string>
#include <vector>

#include "definetti/types.hpp"

namespace definetti {

// maximize c.x subject to A x = b, x >= 0.
struct LpProblem {
  RVector objective;
  RMatrix a;
  RVector b;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
std::string to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  RVector x;
  RVector duals;          // y with reduced costs c - A^T y <= 0 at optimality
  RVector reduced_costs;  // c - A^T y
  long pivots = 0;
};

struct LpOptions {
  double pivot_tol = 1e-9;
  double opt_tol = 1e-10;
  double harris_tol = 1e-9;
  long max_pivots = 5000000;
};

// Dense two-phase tableau simplex with Bland's rule.
LpSolution lp_solve(const LpProblem& p, const LpOptions& opts = {});

// Convenience layer: nonnegative variables and <=, >=, = rows.
class LpBuilder {
 public:
  int add_variable(double objective = 0.0);
  int add_variables(int count, double objective = 0.0);
  void set_objective(int var, double c);
  enum class Sense { Le, Ge, Eq };
  void add_row(const std::vector<std::pair<int, double>>& terms, Sense sense, double rhs);
  int num_variables() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  // Solves; the returned x is restricted to the user variables.
  LpSolution solve(const LpOptions& opts = {}) const;

 private:
  struct Row {
    std::vector<std::pair<int, double>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<double> objective_;
  std::vector<Row> rows_;
};

}  // namespace definetti
