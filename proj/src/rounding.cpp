#include "definetti/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "definetti/errors.hpp"
#include "definetti/ic_povm.hpp"
#include "definetti/infotheory.hpp"
#include "definetti/linalg.hpp"
#include "definetti/subsystems.hpp"

namespace definetti {

void ProductEnsemble::add(double w, std::vector<Matrix> f) {
  weights.push_back(w);
  factors.push_back(std::move(f));
}

Matrix ProductEnsemble::mixture() const {
  const Eigen::Index n = product(dims);
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < size(); ++i) {
    Matrix t = factors[i][0];
    for (std::size_t j = 1; j < factors[i].size(); ++j) t = kron(t, factors[i][j]);
    out += weights[i] * t;
  }
  return out;
}

MeasurementFamily MeasurementFamily::identity(int dim_a) {
  MeasurementFamily f;
  f.weights = {1.0};
  f.channels = {std::nullopt};
  f.out_dim_a = dim_a;
  return f;
}

void MeasurementFamily::validate(int dim_a) const {
  require(!weights.empty() && weights.size() == channels.size(), ErrorKind::InvalidInput,
          "measurement family needs one weight per channel");
  double total = 0;
  for (double w : weights) {
    require(w >= 0 && std::isfinite(w), ErrorKind::InvalidInput, "measurement family weights must be >= 0");
    total += w;
  }
  require(std::abs(total - 1) <= 1e-9, ErrorKind::InvalidInput, "measurement family weights must sum to 1");
  require(out_dim_a >= 1, ErrorKind::InvalidInput, "measurement family output dimension must be positive");
  for (const auto& c : channels)
    if (c) require(c->in_dim() == dim_a, ErrorKind::DimensionMismatch, "family channel acts on the wrong dimension");
}

double fixed_measurement_guarantee(int out_dim_a, int k) {
  require(out_dim_a >= 1 && k >= 1, ErrorKind::InvalidInput, "need |A~| >= 1 and k >= 1");
  return std::sqrt(2 * std::log(static_cast<double>(out_dim_a)) / k);
}

double trace_norm_guarantee(int dim_b, int k) {
  require(dim_b >= 1 && k >= 1, ErrorKind::InvalidInput, "need |B| >= 1 and k >= 1");
  return 6.0 * dim_b * dim_b * std::sqrt(std::log(static_cast<double>(k)) / k);
}

double permutation_residual(const Matrix& x, const Dims& dims, const Indices& systems) {
  double r = 0;
  for (std::size_t i = 0; i + 1 < systems.size(); ++i) {
    Indices perm(dims.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[systems[i]], perm[systems[i + 1]]);
    r = std::max(r, (permute_matrix(x, dims, perm) - x).cwiseAbs().maxCoeff());
  }
  return r;
}

namespace {

Dims without(Dims d, int pos) {
  d.erase(d.begin() + pos);
  return d;
}

// Measures the system at position `pos` repeatedly (each measured system is
// removed, so the next one slides into `pos`), visiting every outcome prefix
// of length 0..max_depth whose probability is not negligible.
template <class Visit>
void measure_tree(const Matrix& op, const Dims& dims, int pos, const Povm& povm, int depth, int max_depth,
                  Indices& prefix, Visit& visit) {
  const double p = op.trace().real();
  if (p < kDropProbability) return;
  visit(depth, prefix, op, dims, p);
  if (depth == max_depth) return;
  const Dims next = without(dims, pos);
  for (int y = 0; y < povm.outcomes(); ++y) {
    prefix.push_back(y);
    measure_tree(contract_system(op, dims, pos, povm.element(y)), next, pos, povm, depth + 1, max_depth, prefix,
                 visit);
    prefix.pop_back();
  }
}

double tree_size(int outcomes, int max_depth) {
  double total = 0, level = 1;
  for (int t = 0; t <= max_depth; ++t, level *= outcomes) total += level;
  return total;
}

// ||(E (x) lambda)(x)||_1 for x on A (x) B.
double measured_norm(const Matrix& x, int a, int b, const std::optional<QcChannel>& e, const QcChannel& lambda) {
  double total = 0;
  for (int y = 0; y < lambda.out_dim(); ++y) {
    const Matrix xa = contract_system(x, {a, b}, 1, lambda.povm().element(y));
    if (e) {
      for (int z = 0; z < e->out_dim(); ++z) total += std::abs(inner(e->povm().element(z), xa));
    } else {
      total += trace_norm(hermitian_part(xa));
    }
  }
  return total;
}

struct ExtLayout {
  int a = 0, b = 0, k = 0;
  Dims dims;
};

ExtLayout ext_layout(const DensityMatrix& ext) {
  ExtLayout l;
  l.dims = ext.dims();
  require(l.dims.size() >= 2, ErrorKind::DimensionMismatch, "extension needs A and at least one B system");
  l.a = l.dims[0];
  l.b = l.dims[1];
  l.k = static_cast<int>(l.dims.size()) - 1;
  for (int j = 1; j <= l.k; ++j)
    require(l.dims[j] == l.b, ErrorKind::DimensionMismatch, "extension B systems have different dims");
  return l;
}

// Normalised A and B marginals of an operator on A (x) B.
std::pair<Matrix, Matrix> local_marginals(const Matrix& m, int a, int b) {
  return {partial_trace(m, {a, b}, {0}), partial_trace(m, {a, b}, {1})};
}

// Product ensemble sum_i q_i rho_i^A (x) rho_i^{B_j} from measuring B_1..B_{j-1}.
ProductEnsemble ensemble_at(const DensityMatrix& ext, const ExtLayout& l, const Povm& povm, int j) {
  ProductEnsemble ens;
  ens.dims = {l.a, l.b};
  Indices prefix;
  auto visit = [&](int depth, const Indices&, const Matrix& op, const Dims& dims, double p) {
    if (depth != j - 1) return;
    const Matrix m = partial_trace(op, dims, {0, 1}) / p;
    auto [ra, rb] = local_marginals(m, l.a, l.b);
    ens.add(p, {hermitian_part(ra), hermitian_part(rb)});
  };
  measure_tree(ext.data(), l.dims, 1, povm, 0, j - 1, prefix, visit);
  double total = std::accumulate(ens.weights.begin(), ens.weights.end(), 0.0);
  for (double& w : ens.weights) w /= total;
  return ens;
}

DensityMatrix ensemble_state(const ProductEnsemble& ens) {
  return DensityMatrix::trusted(ens.dims, hermitian_part(ens.mixture()));
}

}  // namespace

RoundingResult round_fixed_measurement(const DensityMatrix& ext, const QcChannel& lambda,
                                       const MeasurementFamily& fam, double sym_tol, const Budget& budget) {
  const ExtLayout l = ext_layout(ext);
  require(lambda.in_dim() == l.b, ErrorKind::DimensionMismatch, "measurement acts on the wrong dimension");
  fam.validate(l.a);
  Indices bs(l.k);
  std::iota(bs.begin(), bs.end(), 1);
  const double asym = permutation_residual(ext.data(), l.dims, bs);
  require(asym <= sym_tol, ErrorKind::SymmetryViolation,
          "extension is not invariant under permuting B systems (residual " + std::to_string(asym) + ")");
  budget.check_branches(tree_size(lambda.out_dim(), l.k - 1), "measuring B_1..B_{k-1}");

  const Matrix rho = partial_trace(ext.data(), l.dims, {0, 1});
  std::vector<Matrix> sigma(l.k, Matrix::Zero(l.a * l.b, l.a * l.b));
  std::vector<double> mass(l.k, 0.0);
  Indices prefix;
  auto visit = [&](int depth, const Indices&, const Matrix& op, const Dims& dims, double p) {
    const Matrix m = partial_trace(op, dims, {0, 1}) / p;
    auto [ra, rb] = local_marginals(m, l.a, l.b);
    sigma[depth] += p * kron(ra, rb);
    mass[depth] += p;
  };
  measure_tree(ext.data(), l.dims, 1, lambda.povm(), 0, l.k - 1, prefix, visit);

  RoundingResult out;
  out.errors.resize(l.k);
  for (int t = 0; t < l.k; ++t) {
    sigma[t] /= mass[t];
    const Matrix diff = rho - sigma[t];
    double e = 0;
    for (std::size_t m = 0; m < fam.weights.size(); ++m)
      if (fam.weights[m] > 0) e += fam.weights[m] * measured_norm(diff, l.a, l.b, fam.channels[m], lambda);
    out.errors[t] = e;
  }
  const int best = static_cast<int>(std::min_element(out.errors.begin(), out.errors.end()) - out.errors.begin());
  out.chosen_j = best + 1;
  out.achieved_error = out.errors[best];
  out.ensemble = ensemble_at(ext, l, lambda.povm(), out.chosen_j);
  out.sigma = ensemble_state(out.ensemble);
  out.guarantee = fixed_measurement_guarantee(fam.out_dim_a, l.k);
  out.guarantee_vacuous = out.guarantee > 2;
  out.measurement = lambda.povm();
  return out;
}

RoundingResult round_trace_norm(const DensityMatrix& ext, double support_tol, const Budget& budget) {
  const ExtLayout l = ext_layout(ext);
  require(l.k >= 2, ErrorKind::InvalidInput, "trace-norm rounding needs k >= 2");
  Indices bs(l.k);
  std::iota(bs.begin(), bs.end(), 1);
  {
    const Matrix rb = partial_trace(ext.data(), l.dims, bs);
    const Matrix p = symmetric_subspace_projector(l.b, l.k).data();
    const double outside = std::abs((rb - p * rb).trace());
    require(outside <= support_tol, ErrorKind::SupportViolation,
            "B systems have weight " + std::to_string(outside) + " outside the symmetric subspace");
  }
  const Povm povm = informationally_complete_povm(l.b);
  budget.check_branches(tree_size(povm.outcomes(), l.k - 1), "measuring B_1..B_{k-1}");

  const Matrix rho = partial_trace(ext.data(), l.dims, {0, 1});
  std::vector<Matrix> sigma(l.k, Matrix::Zero(l.a * l.b, l.a * l.b));
  std::vector<double> mass(l.k, 0.0), cmi(l.k, 0.0);
  Indices prefix;
  auto visit = [&](int depth, const Indices&, const Matrix& op, const Dims& dims, double p) {
    const Matrix m = partial_trace(op, dims, {0, 1}) / p;
    auto [ra, rb] = local_marginals(m, l.a, l.b);
    sigma[depth] += p * kron(ra, rb);
    mass[depth] += p;
    // I(A : Y) for the state of A and the outcome Y of measuring B_{depth+1}.
    double info = von_neumann_entropy(Matrix(hermitian_part(ra)));
    for (int y = 0; y < povm.outcomes(); ++y) {
      const Matrix cy = hermitian_part(contract_system(m, {l.a, l.b}, 1, povm.element(y)));
      const double py = cy.trace().real();
      if (py > kDropProbability) info -= py * von_neumann_entropy(Matrix(cy / py));
    }
    cmi[depth] += p * info;
  };
  measure_tree(ext.data(), l.dims, 1, povm, 0, l.k - 1, prefix, visit);

  RoundingResult out;
  for (int t = 0; t < l.k; ++t) cmi[t] /= mass[t];
  out.cmi = cmi;
  const int best = static_cast<int>(std::min_element(cmi.begin(), cmi.end()) - cmi.begin());
  out.chosen_j = best + 1;
  out.ensemble = ensemble_at(ext, l, povm, out.chosen_j);
  out.sigma = ensemble_state(out.ensemble);
  out.achieved_error = trace_norm(hermitian_part(rho - out.sigma.data()));
  out.errors.assign(l.k, 0.0);
  out.errors[best] = out.achieved_error;
  const double k = l.k;
  out.guarantee = trace_norm_guarantee(l.b, l.k);
  out.guarantee_vacuous = out.guarantee > 2;
  out.cmi_bound = l.b * std::log(k) / k;
  out.measurement = povm;
  return out;
}

double MultipartiteRounding::error(const std::vector<std::optional<QcChannel>>& channels) const {
  const int l = static_cast<int>(dims.size());
  require(static_cast<int>(channels.size()) == l - 1, ErrorKind::DimensionMismatch,
          "need one channel entry for each of systems 2..l");
  std::vector<Matrix> parts{target - ensemble.mixture()};
  Dims d = dims;
  for (int s = l - 1; s >= 1; --s) {
    const auto& ch = channels[s - 1];
    if (!ch) continue;
    require(ch->in_dim() == d[s], ErrorKind::DimensionMismatch, "channel acts on the wrong dimension");
    std::vector<Matrix> next;
    for (const Matrix& x : parts)
      for (int y = 0; y < ch->out_dim(); ++y) next.push_back(contract_system(x, d, s, ch->povm().element(y)));
    parts = std::move(next);
    d.erase(d.begin() + s);
  }
  double total = 0;
  for (const Matrix& x : parts) total += trace_norm(hermitian_part(x));
  return total;
}

MultipartiteRounding multipartite_round(const DensityMatrix& rho_sym, int l, const QcChannel& e, double sym_tol,
                                        const Budget& budget) {
  const Dims& dims = rho_sym.dims();
  const int k = static_cast<int>(dims.size());
  require(l >= 1 && l < k, ErrorKind::InvalidInput, "need 1 <= l < k");
  for (int d : dims) require(d == dims[0], ErrorKind::DimensionMismatch, "all systems must have the same dimension");
  require(e.in_dim() == dims[0], ErrorKind::DimensionMismatch, "channel acts on the wrong dimension");
  Indices all(k);
  std::iota(all.begin(), all.end(), 0);
  const double asym = permutation_residual(rho_sym.data(), dims, all);
  require(asym <= sym_tol, ErrorKind::SymmetryViolation,
          "state is not permutation invariant (residual " + std::to_string(asym) + ")");
  budget.check_branches(tree_size(e.out_dim(), k - l), "measuring systems l+1..k");

  MultipartiteRounding out;
  out.dims = Dims(l, dims[0]);
  out.ensemble.dims = out.dims;
  Indices keep(l);
  std::iota(keep.begin(), keep.end(), 0);
  out.target = partial_trace(rho_sym.data(), dims, keep);
  Indices prefix;
  auto visit = [&](int depth, const Indices&, const Matrix& op, const Dims& d, double p) {
    if (depth != k - l) return;
    const Matrix m = op / p;
    std::vector<Matrix> f;
    for (int i = 0; i < l; ++i) f.push_back(hermitian_part(partial_trace(m, d, {i})));
    out.ensemble.add(p, std::move(f));
  };
  measure_tree(rho_sym.data(), dims, l, e.povm(), 0, k - l, prefix, visit);
  double total = std::accumulate(out.ensemble.weights.begin(), out.ensemble.weights.end(), 0.0);
  for (double& w : out.ensemble.weights) w /= total;
  out.benchmark = std::sqrt(2.0 * l * l * std::log(static_cast<double>(dims[0])) / (k - l));
  return out;
}

}  // namespace definetti
