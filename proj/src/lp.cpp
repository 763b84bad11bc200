#include "definetti/lp.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "definetti/errors.hpp"

namespace definetti {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

namespace {

// Tableau columns: n structural, m artificial, then the right-hand side.
struct Tableau {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t;  // m rows
  RMatrix t0;  // initial tableau, for reinversion
  RVector d;  // reduced costs z_j - c_j of the current phase
  std::vector<int> basis;
  int n = 0, m = 0;
  long pivots = 0;
  long last_reinvert = 0;

  double& rhs(int i) { return t(i, n + m); }

  void pivot(int row, int col) {
    const double pv = t(row, col);
    t.row(row) /= pv;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    const double f = d(col);
    if (f != 0.0) d -= f * t.row(row).head(n + m).transpose();
    basis[row] = col;
    ++pivots;
  }

  // Rebuilds the tableau as B^{-1} t0 from a fresh factorisation, discarding
  // accumulated rounding.
  void reinvert() {
    RMatrix b(m, m);
    for (int i = 0; i < m; ++i) b.col(i) = t0.col(basis[i]);
    Eigen::PartialPivLU<RMatrix> lu(b);
    t = lu.solve(t0);
    require(t.allFinite(), ErrorKind::IterationLimit, "simplex basis became singular");
    last_reinvert = pivots;
  }

  // Reduced costs z_j - c_j for a maximisation with costs c over all columns.
  RVector reduced(const RVector& c) const {
    RVector cb(m);
    for (int i = 0; i < m; ++i) cb(i) = c(basis[i]);
    return (cb.transpose() * t.leftCols(n + m)).transpose() - c;
  }

  // Dantzig pricing; after a run of degenerate pivots switches to Bland's
  // rule (smallest index) until progress resumes, which rules out cycling.
  // Returns false if unbounded.
  bool optimise(const RVector& c, int ncols, const LpOptions& o) {
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    d = reduced(c);
    int degenerate = 0;
    long since_refresh = 0;
    while (true) {
      require(pivots < o.max_pivots, ErrorKind::IterationLimit, "simplex pivot limit reached");
      if (++since_refresh == 200) {
        if (pivots - last_reinvert >= 1000) reinvert();
        d = reduced(c);
        since_refresh = 0;
      }
      const bool bland = degenerate > 50;
      int enter = -1;
      double most = -o.opt_tol * scale;
      for (int j = 0; j < ncols; ++j)
        if (d(j) < most) {
          enter = j;
          if (bland) break;
          most = d(j);
        }
      if (enter < 0) {
        // Confirm optimality on freshly computed reduced costs.
        if (since_refresh == 1 && pivots == last_reinvert) return true;
        if (pivots != last_reinvert) reinvert();
        d = reduced(c);
        since_refresh = 0;
        continue;
      }
      // Harris ratio test: bound the step with a small feasibility
      // allowance, then take the largest pivot among rows within it.
      double bound = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a > o.pivot_tol) bound = std::min(bound, (std::max(0.0, t(i, n + m)) + o.harris_tol) / a);
      }
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a <= o.pivot_tol || std::max(0.0, t(i, n + m)) / a > bound) continue;
        bool take = leave < 0 || (bland ? basis[i] < basis[leave] : a > best);
        if (take) {
          best = a;
          leave = i;
        }
      }
      if (leave < 0) return false;
      degenerate = std::max(0.0, t(leave, n + m)) / best <= 1e-11 ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }
};

}  // namespace

namespace {

// Rows of A that are linearly independent (rank-revealing QR of A^T), or
// nullopt when b is inconsistent with the dependent rows.
std::optional<std::vector<int>> independent_rows(const RMatrix& a, const RVector& b) {
  const Eigen::Index m = a.rows();
  if (m == 0) return std::vector<int>{};
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  Eigen::ColPivHouseholderQR<RMatrix> qr(a.transpose());
  qr.setThreshold(1e-10);
  const Eigen::Index r = qr.rank();
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < r; ++i) keep.push_back(static_cast<int>(qr.colsPermutation().indices()(i)));
  std::sort(keep.begin(), keep.end());
  if (r < m) {
    RMatrix ak(static_cast<Eigen::Index>(keep.size()), a.cols());
    RVector bk(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
      ak.row(i) = a.row(keep[i]);
      bk(i) = b(keep[i]);
    }
    // Least-norm solution of the kept rows must satisfy every row.
    const RVector x = ak.completeOrthogonalDecomposition().solve(bk);
    const double bscale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if ((a * x - b).cwiseAbs().maxCoeff() > 1e-8 * bscale * scale) return std::nullopt;
  }
  return keep;
}

}  // namespace

LpSolution lp_solve(const LpProblem& p, const LpOptions& opts) {
  require(p.objective.size() == p.a.cols() && p.b.size() == p.a.rows(), ErrorKind::DimensionMismatch,
          "LP dimensions inconsistent");
  require(p.a.allFinite() && p.b.allFinite() && p.objective.allFinite(), ErrorKind::InvalidInput,
          "LP has non-finite entries");
  const auto rows = independent_rows(p.a, p.b);
  if (!rows) return LpSolution{};  // Infeasible
  if (static_cast<Eigen::Index>(rows->size()) < p.a.rows()) {
    LpProblem q;
    q.objective = p.objective;
    q.a.resize(static_cast<Eigen::Index>(rows->size()), p.a.cols());
    q.b.resize(static_cast<Eigen::Index>(rows->size()));
    for (std::size_t i = 0; i < rows->size(); ++i) {
      q.a.row(i) = p.a.row((*rows)[i]);
      q.b(i) = p.b((*rows)[i]);
    }
    LpSolution sol = lp_solve(q, opts);
    if (sol.status == LpStatus::Optimal) {
      // Dependent rows get zero duals.
      RVector y = RVector::Zero(p.a.rows());
      for (std::size_t i = 0; i < rows->size(); ++i) y((*rows)[i]) = sol.duals(i);
      sol.duals = y;
    }
    return sol;
  }
  const int m = static_cast<int>(p.a.rows());
  const int n = static_cast<int>(p.a.cols());
  Tableau tab;
  tab.n = n;
  tab.m = m;
  tab.t = RMatrix::Zero(m, n + m + 1);
  RVector sign = RVector::Ones(m);
  for (int i = 0; i < m; ++i) {
    if (p.b(i) < 0) sign(i) = -1.0;
    tab.t.row(i).head(n) = sign(i) * p.a.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = sign(i) * p.b(i);
    tab.basis.push_back(n + i);
  }
  tab.t0 = tab.t;
  LpSolution sol;

  // Phase one: maximise minus the sum of artificials.
  RVector c1 = RVector::Zero(n + m);
  c1.tail(m).setConstant(-1.0);
  tab.optimise(c1, n + m, opts);
  double infeas = 0;
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] >= n) infeas += tab.rhs(i);
  const double bscale = std::max(1.0, p.b.size() ? p.b.cwiseAbs().maxCoeff() : 0.0);
  if (infeas > 1e-8 * bscale) {
    sol.status = LpStatus::Infeasible;
    sol.pivots = tab.pivots;
    return sol;
  }
  // Drive zero-level artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    int col = -1;
    double big = opts.pivot_tol;
    for (int j = 0; j < n; ++j)
      if (std::abs(tab.t(i, j)) > big) {
        big = std::abs(tab.t(i, j));
        col = j;
      }
    if (col >= 0) tab.pivot(i, col);  // otherwise the row is redundant
  }

  // Phase two on structural columns only.
  RVector c2 = RVector::Zero(n + m);
  c2.head(n) = p.objective;
  if (!tab.optimise(c2, n, opts)) {
    sol.status = LpStatus::Unbounded;
    sol.pivots = tab.pivots;
    return sol;
  }
  sol.status = LpStatus::Optimal;
  sol.x = RVector::Zero(n);
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < n) sol.x(tab.basis[i]) = std::max(0.0, tab.rhs(i));
  sol.value = p.objective.dot(sol.x);
  // y^T = c_B^T B^{-1}; B^{-1} sits in the artificial columns (row signs undone).
  RVector cb(m);
  for (int i = 0; i < m; ++i) cb(i) = c2(tab.basis[i]);
  RVector y = (cb.transpose() * tab.t.block(0, n, m, m)).transpose();
  sol.duals = y.cwiseProduct(sign);
  sol.reduced_costs = p.objective - p.a.transpose() * sol.duals;
  sol.pivots = tab.pivots;
  return sol;
}

int LpBuilder::add_variable(double objective) {
  objective_.push_back(objective);
  return static_cast<int>(objective_.size()) - 1;
}

int LpBuilder::add_variables(int count, double objective) {
  const int first = num_variables();
  for (int i = 0; i < count; ++i) objective_.push_back(objective);
  return first;
}

void LpBuilder::set_objective(int var, double c) { objective_.at(var) = c; }

void LpBuilder::add_row(const std::vector<std::pair<int, double>>& terms, Sense sense, double rhs) {
  for (const auto& [v, coef] : terms)
    require(v >= 0 && v < num_variables() && std::isfinite(coef), ErrorKind::InvalidInput,
            "LP row references an unknown variable");
  rows_.push_back({terms, sense, rhs});
}

LpSolution LpBuilder::solve(const LpOptions& opts) const {
  const int nv = num_variables();
  int slacks = 0;
  for (const auto& r : rows_)
    if (r.sense != Sense::Eq) ++slacks;
  LpProblem p;
  p.objective = RVector::Zero(nv + slacks);
  for (int j = 0; j < nv; ++j) p.objective(j) = objective_[j];
  p.a = RMatrix::Zero(static_cast<Eigen::Index>(rows_.size()), nv + slacks);
  p.b = RVector::Zero(static_cast<Eigen::Index>(rows_.size()));
  int s = nv;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& [v, coef] : rows_[i].terms) p.a(i, v) += coef;
    if (rows_[i].sense == Sense::Le) p.a(i, s++) = 1.0;
    if (rows_[i].sense == Sense::Ge) p.a(i, s++) = -1.0;
    p.b(i) = rows_[i].rhs;
  }
  LpSolution sol = lp_solve(p, opts);
  if (sol.status == LpStatus::Optimal) {
    sol.x.conservativeResize(nv);
    sol.reduced_costs.conservativeResize(nv);
  }
  return sol;
}

}  // namespace definetti
