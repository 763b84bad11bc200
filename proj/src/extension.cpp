#include "definetti/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"
#include "definetti/subsystems.hpp"

namespace definetti {

std::string to_string(ExtensionMode m) {
  return m == ExtensionMode::PermutationInvariant ? "PermutationInvariant" : "SymmetricSubspace";
}

Dims ExtensionSpec::extended_dims() const {
  Dims d{dim_a};
  d.insert(d.end(), k, dim_b);
  return d;
}

double ExtensionSpec::total_dim() const { return dim_a * std::pow(static_cast<double>(dim_b), k); }

void ExtensionSpec::validate(const Budget& budget) const {
  require(dim_a >= 1 && dim_b >= 1, ErrorKind::InvalidInput, "extension dims must be positive");
  require(k >= 1, ErrorKind::InvalidInput, "extension count k must be at least 1");
  budget.check_dim(total_dim(), "extension of dimension dimA*dimB^k");
}

double ExtensionCheck::worst(ExtensionMode mode) const {
  double w = std::max({marginal, trace, psd, symmetry});
  if (mode == ExtensionMode::SymmetricSubspace) w = std::max(w, support);
  return w;
}

ExtensionCheck verify_extension(const DensityMatrix& rho, const Matrix& ext, const ExtensionSpec& spec) {
  const Dims dims = spec.extended_dims();
  require(ext.rows() == product(dims) && ext.cols() == ext.rows(), ErrorKind::DimensionMismatch,
          "extension has wrong size");
  ExtensionCheck c;
  for (int j = 1; j <= spec.k; ++j) {
    const Matrix m = partial_trace(ext, dims, {0, j});
    c.marginal = std::max(c.marginal, (m - rho.data()).cwiseAbs().maxCoeff());
  }
  c.trace = std::abs(ext.trace().real() - 1.0);
  c.psd = std::max(0.0, -min_eigenvalue(hermitian_part(ext)));
  for (int j = 1; j < spec.k; ++j) {
    Indices perm(dims.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[j], perm[j + 1]);
    c.symmetry = std::max(c.symmetry, (permute_matrix(ext, dims, perm) - ext).cwiseAbs().maxCoeff());
  }
  if (spec.k >= 2) {
    Indices bs(spec.k);
    std::iota(bs.begin(), bs.end(), 1);
    const Matrix rb = partial_trace(ext, dims, bs);
    const Matrix p = symmetric_subspace_projector(spec.dim_b, spec.k).data();
    c.support = std::abs((rb - p * rb).trace());
  }
  return c;
}

namespace {

std::vector<LinearConstraint> marginal_constraints(const DensityMatrix& rho, const Indices& systems) {
  std::vector<LinearConstraint> out;
  for (const Matrix& h : hermitian_basis(static_cast<int>(rho.dim())))
    out.push_back({systems, h, inner(h, rho.data())});
  return out;
}

SolveReport with_full_point(SolveReport rep, const DensityMatrix& rho, const Matrix& ext,
                            const ExtensionSpec& spec, double feas_tol) {
  const ExtensionCheck c = verify_extension(rho, ext, spec);
  rep.point = ext;
  rep.affine_residual = std::max(c.marginal, c.trace);
  rep.psd_residual = c.psd;
  rep.symmetry_residual = spec.mode == ExtensionMode::SymmetricSubspace ? std::max(c.symmetry, c.support)
                                                                        : c.symmetry;
  if (rep.status == SolveStatus::Feasible && c.worst(spec.mode) > feas_tol) {
    rep.status = SolveStatus::IterationLimit;
    rep.note = "solver point failed the independent extension check";
  }
  return rep;
}

}  // namespace

SolveReport find_symmetric_extension(const DensityMatrix& rho, const ExtensionSpec& spec,
                                     const DykstraOptions& opts, const Budget& budget) {
  spec.validate(budget);
  require(rho.dims() == Dims({spec.dim_a, spec.dim_b}), ErrorKind::DimensionMismatch,
          "state dims do not match the extension spec");
  AffinePsdProblem p;
  p.trace_value = 1.0;
  if (spec.mode == ExtensionMode::PermutationInvariant || spec.k == 1) {
    p.dims = spec.extended_dims();
    p.constraints = marginal_constraints(rho, {0, 1});
    if (spec.k >= 2)
      for (int j = 1; j <= spec.k; ++j) p.exchangeable_blocks.push_back({j});
    SolveReport rep = dykstra_feasibility(p, opts);
    const Matrix ext = rep.point ? *rep.point : Matrix::Zero(p.side(), p.side());
    return with_full_point(std::move(rep), rho, ext, spec, opts.feas_tol);
  }
  // Compressed variable Y on A (x) Sym^k(B); ext = (I (x) V) Y (I (x) V)^dag.
  const Matrix v = symmetric_subspace_isometry(spec.dim_b, spec.k);
  const Matrix w = kron(Matrix::Identity(spec.dim_a, spec.dim_a), v);
  const Eigen::Index rest = w.rows() / (spec.dim_a * spec.dim_b);
  p.dims = {spec.dim_a, static_cast<int>(v.cols())};
  for (const Matrix& h : hermitian_basis(spec.dim_a * spec.dim_b)) {
    const Matrix big = kron(h, Matrix::Identity(rest, rest));
    p.constraints.push_back({{0, 1}, hermitian_part(w.adjoint() * big * w), inner(h, rho.data())});
  }
  SolveReport rep = dykstra_feasibility(p, opts);
  const Matrix y = rep.point ? *rep.point : Matrix::Zero(p.side(), p.side());
  return with_full_point(std::move(rep), rho, hermitian_part(w * y * w.adjoint()), spec, opts.feas_tol);
}

}  // namespace definetti
