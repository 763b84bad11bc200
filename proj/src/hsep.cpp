#include "definetti/hsep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"
#include "definetti/subsystems.hpp"

namespace definetti {

namespace {

struct RelaxationLayout {
  AffinePsdProblem problem;
  Indices positions;
};

RelaxationLayout relaxation_layout(const HermitianOp& m, int k, const Budget& budget) {
  const int l = m.num_systems();
  require(l >= 1, ErrorKind::InvalidInput, "operator has no subsystems");
  require(k >= l, ErrorKind::InvalidInput, "k must be at least the number of parties");
  budget.check_dim(std::pow(static_cast<double>(m.dim()), k), "relaxation over k blocks");
  RelaxationLayout out;
  out.problem.trace_value = 1.0;
  for (int j = 0; j < k; ++j) {
    Indices block;
    for (int i = 0; i < l; ++i) {
      block.push_back(j * l + i);
      out.problem.dims.push_back(m.dims()[i]);
    }
    out.problem.exchangeable_blocks.push_back(block);
  }
  if (k < 2) out.problem.exchangeable_blocks.clear();
  for (int i = 0; i < l; ++i) out.positions.push_back(i * l + i);
  return out;
}

}  // namespace

HsepResult hsep_upper_bound(const HermitianOp& m, int k, double obj_tol, const DykstraOptions& opts,
                            const Budget& budget) {
  RelaxationLayout lay = relaxation_layout(m, k, budget);
  HsepResult out;
  out.k = k;
  out.l = m.num_systems();
  const RVector ev = eigvalsh(m.data());
  out.unit_interval = ev.minCoeff() >= -1e-9 && ev.maxCoeff() <= 1 + 1e-9;
  int n = 1;
  for (int d : m.dims()) n = std::max(n, d);
  out.sandwich_gap = k > out.l ? std::sqrt(2.0 * std::pow(out.l, 3) * std::log(static_cast<double>(n)) / (k - out.l))
                               : std::numeric_limits<double>::infinity();
  // I / dim is feasible with value tr(M) / dim(M), which is at most the optimum.
  const double lo = m.data().trace().real() / static_cast<double>(m.dim());
  const double hi = ev.maxCoeff();
  out.solve = maximize_linear_psd(lay.problem, {lay.positions, m.data()}, lo, hi, obj_tol, opts);
  out.value = out.solve.value;
  out.upper = out.solve.upper;
  return out;
}

double hsep_relaxation_exact(const HermitianOp& m, int k, const Budget& budget) {
  RelaxationLayout lay = relaxation_layout(m, k, budget);
  const Matrix big = embed(m.data(), lay.problem.dims, lay.positions);
  if (lay.problem.exchangeable_blocks.empty()) return max_eigenvalue(big);
  BlockSymmetrizer sym(lay.problem.dims, lay.problem.exchangeable_blocks);
  return max_eigenvalue(hermitian_part(sym.apply(big)));
}

std::int64_t sos_level_for(double n, int l, double eps) {
  require(n >= 1 && l >= 1 && eps > 0 && std::isfinite(eps), ErrorKind::InvalidInput,
          "sos level needs n >= 1, l >= 1 and eps > 0");
  const double inner_count = std::ceil(2.0 * std::pow(l, 3) * std::log(n) / (eps * eps) + l);
  const double total = l * inner_count;
  if (!(total < 9.2e18)) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(total);
}

}  // namespace definetti
