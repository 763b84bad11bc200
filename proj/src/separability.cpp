#include "definetti/separability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"

namespace definetti {

std::string to_string(SeparabilityVerdict v) {
  return v == SeparabilityVerdict::SeparableConsistent ? "SeparableConsistent" : "FarFromSeparable";
}

double separability_schedule(const Dims& dims, double eps) {
  require(eps > 0 && std::isfinite(eps), ErrorKind::InvalidInput, "eps must be positive");
  const double l = static_cast<double>(dims.size());
  double logs = 0;
  for (int d : dims) logs += std::log(static_cast<double>(d));
  return l + std::ceil(4 * l * l * logs / (eps * eps));
}

namespace {

// Restricted growth strings: block index of each party, at most k blocks.
std::vector<Indices> block_patterns(int l, int k) {
  std::vector<Indices> out;
  Indices cur(l, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == l) {
      out.push_back(cur);
      return;
    }
    for (int b = 0; b <= used && b < k; ++b) {
      cur[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace

SeparabilityResult separability_test(const DensityMatrix& rho, double eps, std::optional<int> k_override,
                                     const DykstraOptions& opts, const Budget& budget) {
  const Dims& parties = rho.dims();
  const int l = static_cast<int>(parties.size());
  require(l >= 1, ErrorKind::InvalidInput, "state has no subsystems");
  SeparabilityResult out;
  out.scheduled_k = separability_schedule(parties, eps / 2);
  out.mixing = std::min(eps / 4, 0.5);
  const Matrix target = (1 - out.mixing) * rho.data() +
                        out.mixing * Matrix::Identity(rho.dim(), rho.dim()) / static_cast<double>(rho.dim());
  const double block_dim = static_cast<double>(rho.dim());
  if (k_override) {
    out.k = *k_override;
    out.override_used = true;
    require(out.k >= l, ErrorKind::InvalidInput, "k must be at least the number of parties");
  } else {
    budget.check_dim(std::pow(block_dim, out.scheduled_k), "scheduled extension level");
    out.k = static_cast<int>(out.scheduled_k);
  }
  budget.check_dim(std::pow(block_dim, out.k), "extension over k blocks");

  AffinePsdProblem p;
  p.trace_value = 1.0;
  for (int j = 0; j < out.k; ++j) {
    Indices block;
    for (int i = 0; i < l; ++i) {
      block.push_back(j * l + i);
      p.dims.push_back(parties[i]);
    }
    p.exchangeable_blocks.push_back(block);
  }
  if (out.k < 2) p.exchangeable_blocks.clear();
  const auto basis = hermitian_basis(static_cast<int>(rho.dim()));
  for (const Indices& pattern : block_patterns(l, out.k)) {
    Indices systems;
    for (int i = 0; i < l; ++i) systems.push_back(pattern[i] * l + i);
    for (const Matrix& h : basis) p.constraints.push_back({systems, h, inner(h, target)});
  }
  out.report = dykstra_feasibility(p, opts);
  switch (out.report.status) {
    case SolveStatus::Feasible: out.verdict = SeparabilityVerdict::SeparableConsistent; break;
    case SolveStatus::InfeasibleHeuristic: out.verdict = SeparabilityVerdict::FarFromSeparable; break;
    case SolveStatus::IterationLimit:
      fail(ErrorKind::IterationLimit, "separability search undecided: " + out.report.note);
  }
  return out;
}

}  // namespace definetti
