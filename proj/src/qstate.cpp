#include "definetti/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"
#include "definetti/subsystems.hpp"

namespace definetti {

namespace {

std::string num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

void check_shape(const Dims& dims, const Matrix& data) {
  require(!dims.empty(), ErrorKind::InvalidInput, "operator needs at least one subsystem");
  for (int d : dims) require(d >= 1, ErrorKind::InvalidInput, "subsystem dimension must be >= 1");
  require(data.rows() == data.cols(), ErrorKind::DimensionMismatch, "operator matrix not square");
  require(data.rows() == product(dims), ErrorKind::DimensionMismatch,
          "matrix side " + std::to_string(data.rows()) + " != product of dims " +
              std::to_string(product(dims)));
  require(data.allFinite(), ErrorKind::InvalidInput, "operator has non-finite entries");
}

}  // namespace

HermitianOp::HermitianOp(Dims dims, const Matrix& data, const Tolerances& tol) {
  check_shape(dims, data);
  const double h = hermiticity_residual(data);
  require(h <= tol.herm, ErrorKind::InvalidInput, "not Hermitian, residual " + num(h));
  dims_ = std::move(dims);
  data_ = hermitian_part(data);
}

HermitianOp HermitianOp::trusted(Dims dims, const Matrix& data) {
  HermitianOp x;
  x.dims_ = std::move(dims);
  x.data_ = hermitian_part(data);
  return x;
}

DensityMatrix::DensityMatrix(Dims dims, const Matrix& data, const Tolerances& tol) {
  check_shape(dims, data);
  const double h = hermiticity_residual(data);
  require(h <= tol.herm, ErrorKind::InvalidInput, "not Hermitian, residual " + num(h));
  Matrix herm = hermitian_part(data);
  const double tr = herm.trace().real();
  require(std::abs(tr - 1.0) <= tol.trace, ErrorKind::InvalidInput,
          "trace not 1, residual " + num(tr - 1.0));
  const double lmin = min_eigenvalue(herm);
  require(lmin >= -tol.psd, ErrorKind::InvalidInput, "not PSD, min eigenvalue " + num(lmin));
  dims_ = std::move(dims);
  data_ = std::move(herm);
}

DensityMatrix DensityMatrix::trusted(Dims dims, const Matrix& data) {
  DensityMatrix x;
  x.dims_ = std::move(dims);
  x.data_ = hermitian_part(data);
  return x;
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  const Eigen::Index n = product(dims);
  return trusted(std::move(dims), Matrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix DensityMatrix::pure(Dims dims, const CVector& psi) {
  require(psi.size() == product(dims), ErrorKind::DimensionMismatch, "state vector size mismatch");
  const double n = psi.norm();
  require(n > 0, ErrorKind::InvalidInput, "zero state vector");
  CVector v = psi / n;
  return trusted(std::move(dims), v * v.adjoint());
}

DensityMatrix DensityMatrix::nearest(Dims dims, const Matrix& h) {
  check_shape(dims, h);
  Matrix p = psd_projection(hermitian_part(h));
  const double tr = p.trace().real();
  require(tr > 0, ErrorKind::InvalidInput, "no positive part to normalise");
  return trusted(std::move(dims), p / tr);
}

Povm::Povm(int dim, std::vector<Matrix> elements, const Tolerances& tol) {
  require(dim >= 1, ErrorKind::InvalidInput, "POVM dimension must be >= 1");
  require(!elements.empty(), ErrorKind::InvalidInput, "POVM needs at least one element");
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const Matrix& m = elements[k];
    require(m.rows() == dim && m.cols() == dim, ErrorKind::DimensionMismatch,
            "POVM element " + std::to_string(k) + " has wrong size");
    const double h = hermiticity_residual(m);
    require(h <= tol.herm, ErrorKind::InvalidInput,
            "POVM element " + std::to_string(k) + " not Hermitian, residual " + num(h));
    elements[k] = hermitian_part(m);
    const double lmin = min_eigenvalue(elements[k]);
    require(lmin >= -tol.psd, ErrorKind::InvalidInput,
            "POVM element " + std::to_string(k) + " not PSD, min eigenvalue " + num(lmin));
    sum += elements[k];
  }
  const double res = (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  require(res <= tol.povm, ErrorKind::InvalidInput,
          "POVM elements do not sum to identity, residual " + num(res));
  dim_ = dim;
  elements_ = std::move(elements);
}

Povm Povm::computational(int dim) {
  std::vector<Matrix> e;
  for (int k = 0; k < dim; ++k) {
    Matrix m = Matrix::Zero(dim, dim);
    m(k, k) = 1.0;
    e.push_back(m);
  }
  return Povm(dim, std::move(e));
}

Povm Povm::from_basis(const Matrix& u) {
  require(u.rows() == u.cols(), ErrorKind::DimensionMismatch, "basis matrix not square");
  std::vector<Matrix> e;
  for (Eigen::Index k = 0; k < u.cols(); ++k) e.push_back(u.col(k) * u.col(k).adjoint());
  return Povm(static_cast<int>(u.rows()), std::move(e));
}

Matrix QcChannel::apply(const Matrix& x) const {
  require(x.rows() == in_dim() && x.cols() == in_dim(), ErrorKind::DimensionMismatch,
          "channel input has wrong size");
  Matrix out = Matrix::Zero(out_dim(), out_dim());
  for (int k = 0; k < out_dim(); ++k)
    out(k, k) = (povm_.element(k).cwiseProduct(x.transpose())).sum().real();
  return out;
}

Matrix Ensemble::average() const {
  require(!states.empty(), ErrorKind::InvalidInput, "empty ensemble");
  Matrix avg = Matrix::Zero(states[0].dim(), states[0].dim());
  for (std::size_t i = 0; i < states.size(); ++i) avg += weights[i] * states[i].data();
  return avg;
}

void Ensemble::validate(double tol) const {
  require(weights.size() == states.size(), ErrorKind::InvalidInput,
          "ensemble weights and states differ in length");
  require(!weights.empty(), ErrorKind::InvalidInput, "empty ensemble");
  double total = 0;
  for (double w : weights) {
    require(w >= 0, ErrorKind::InvalidInput, "negative ensemble weight");
    total += w;
  }
  require(std::abs(total - 1.0) <= tol, ErrorKind::InvalidInput,
          "ensemble weights do not sum to 1, residual " + num(total - 1.0));
  for (const auto& s : states)
    require(s.dims() == states[0].dims(), ErrorKind::DimensionMismatch,
            "ensemble members have different dims");
}

namespace {

template <class T>
Dims concat(const T& a, const T& b) {
  Dims d = a.dims();
  d.insert(d.end(), b.dims().begin(), b.dims().end());
  return d;
}

Indices sorted_keep(const Dims& dims, Indices keep) {
  Layout(dims).check_systems(keep);
  std::sort(keep.begin(), keep.end());
  return keep;
}

Matrix qc_matrix(const Matrix& x, const Dims& dims, const QcChannel& ch, int on) {
  Layout layout(dims);
  layout.check_systems({on});
  require(dims[on] == ch.in_dim(), ErrorKind::DimensionMismatch,
          "channel input dimension does not match subsystem " + std::to_string(on));
  Dims out_dims = dims;
  out_dims[on] = ch.out_dim();
  Layout out_layout(out_dims);
  const Indices rest = layout.complement({on});
  const IndexMap out_rest = out_layout.offsets(rest);
  const IndexMap out_reg = out_layout.offsets({on});
  Matrix out = Matrix::Zero(out_layout.total(), out_layout.total());
  for (int k = 0; k < ch.out_dim(); ++k) {
    Matrix block = contract_system(x, dims, on, ch.povm().element(k));
    for (Eigen::Index c = 0; c < block.cols(); ++c)
      for (Eigen::Index r = 0; r < block.rows(); ++r)
        out(out_rest[r] + out_reg[k], out_rest[c] + out_reg[k]) = block(r, c);
  }
  return out;
}

Dims qc_dims(Dims dims, const QcChannel& ch, int on) {
  dims[on] = ch.out_dim();
  return dims;
}

}  // namespace

HermitianOp tensor(const HermitianOp& a, const HermitianOp& b) {
  return HermitianOp::trusted(concat(a, b), kron(a.data(), b.data()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::trusted(concat(a, b), kron(a.data(), b.data()));
}

HermitianOp partial_trace(const HermitianOp& x, Indices keep) {
  keep = sorted_keep(x.dims(), std::move(keep));
  require(!keep.empty(), ErrorKind::InvalidInput, "partial trace must keep a subsystem");
  return HermitianOp::trusted(Layout(x.dims()).dims_of(keep),
                              definetti::partial_trace(x.data(), x.dims(), keep));
}

DensityMatrix partial_trace(const DensityMatrix& x, Indices keep) {
  keep = sorted_keep(x.dims(), std::move(keep));
  require(!keep.empty(), ErrorKind::InvalidInput, "partial trace must keep a subsystem");
  return DensityMatrix::trusted(Layout(x.dims()).dims_of(keep),
                                definetti::partial_trace(x.data(), x.dims(), keep));
}

HermitianOp permute_systems(const HermitianOp& x, const Indices& perm) {
  return HermitianOp::trusted(permute_dims(x.dims(), perm), permute_matrix(x.data(), x.dims(), perm));
}

DensityMatrix permute_systems(const DensityMatrix& x, const Indices& perm) {
  return DensityMatrix::trusted(permute_dims(x.dims(), perm),
                                permute_matrix(x.data(), x.dims(), perm));
}

HermitianOp apply_qc_channel(const HermitianOp& x, const QcChannel& ch, int on) {
  Matrix m = qc_matrix(x.data(), x.dims(), ch, on);
  return HermitianOp::trusted(qc_dims(x.dims(), ch, on), m);
}

DensityMatrix apply_qc_channel(const DensityMatrix& x, const QcChannel& ch, int on) {
  Matrix m = qc_matrix(x.data(), x.dims(), ch, on);
  return DensityMatrix::trusted(qc_dims(x.dims(), ch, on), m);
}

std::vector<Branch> measure_subsystems(const Matrix& x, const Dims& dims, const QcChannel& ch,
                                       const Indices& on, bool drop_negligible) {
  Layout layout(dims);
  layout.check_systems(on);
  require(static_cast<int>(on.size()) < layout.size(), ErrorKind::InvalidInput,
          "cannot measure every subsystem");
  for (int s : on)
    require(dims[s] == ch.in_dim(), ErrorKind::DimensionMismatch,
            "channel input dimension does not match subsystem " + std::to_string(s));

  // Measure in descending index order so lower indices stay valid.
  std::vector<std::pair<int, int>> order;  // (system, position in `on`)
  for (int i = 0; i < static_cast<int>(on.size()); ++i) order.emplace_back(on[i], i);
  std::sort(order.begin(), order.end(), std::greater<>());

  std::vector<Branch> current(1);
  current[0].outcome.assign(on.size(), -1);
  current[0].op = x;
  current[0].probability = x.trace().real();
  Dims cur_dims = dims;
  for (const auto& [s, pos] : order) {
    std::vector<Branch> next;
    next.reserve(current.size() * ch.out_dim());
    for (const Branch& b : current) {
      for (int k = 0; k < ch.out_dim(); ++k) {
        Branch nb;
        nb.outcome = b.outcome;
        nb.outcome[pos] = k;
        nb.op = contract_system(b.op, cur_dims, s, ch.povm().element(k));
        nb.probability = nb.op.trace().real();
        if (drop_negligible && nb.probability < kDropProbability) continue;
        next.push_back(std::move(nb));
      }
    }
    cur_dims.erase(cur_dims.begin() + s);
    current.swap(next);
  }
  return current;
}

Ensemble conditional_states(const DensityMatrix& x, const QcChannel& ch, const Indices& on) {
  std::vector<Branch> branches = measure_subsystems(x.data(), x.dims(), ch, on, true);
  Layout layout(x.dims());
  const Dims rest = layout.dims_of(layout.complement(on));
  Ensemble e;
  double total = 0;
  for (const Branch& b : branches) total += b.probability;
  require(total > 0, ErrorKind::InvalidInput, "all outcomes have negligible probability");
  for (Branch& b : branches) {
    e.weights.push_back(b.probability / total);
    e.states.push_back(DensityMatrix::trusted(rest, b.op / b.probability));
    e.outcomes.push_back(std::move(b.outcome));
  }
  return e;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dims() == b.dims(), ErrorKind::DimensionMismatch, "trace_distance: dims differ");
  return trace_norm(Matrix(a.data() - b.data()));
}

double trace_norm(const HermitianOp& x) { return trace_norm(x.data()); }

Matrix symmetric_subspace_isometry(int d, int k) {
  require(d >= 1 && k >= 1, ErrorKind::InvalidInput, "symmetric subspace needs d,k >= 1");
  Dims dims(k, d);
  const Eigen::Index n = product(dims);
  // Group basis strings by their occupation numbers (type classes).
  std::map<std::vector<int>, std::vector<Eigen::Index>> classes;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<int> occ(d, 0);
    Eigen::Index rem = i;
    for (int s = 0; s < k; ++s) {
      ++occ[rem % d];
      rem /= d;
    }
    classes[occ].push_back(i);
  }
  Matrix v = Matrix::Zero(n, static_cast<Eigen::Index>(classes.size()));
  Eigen::Index col = 0;
  for (auto it = classes.rbegin(); it != classes.rend(); ++it, ++col) {
    const double a = 1.0 / std::sqrt(static_cast<double>(it->second.size()));
    for (Eigen::Index i : it->second) v(i, col) = a;
  }
  return v;
}

HermitianOp symmetric_subspace_projector(int d, int k) {
  Matrix v = symmetric_subspace_isometry(d, k);
  return HermitianOp::trusted(Dims(k, d), v * v.adjoint());
}

}  // namespace definetti
