#include "definetti/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "definetti/errors.hpp"

namespace definetti {

namespace {

RVector zheevd(Matrix& a, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RVector w(n);
  if (n == 0) return w;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', n,
                     reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
  require(info == 0, ErrorKind::IterationLimit, "zheevd failed, info=" + std::to_string(info));
  return w;
}

}  // namespace

EigenDecomposition eigh(const Matrix& h) {
  require(h.rows() == h.cols(), ErrorKind::DimensionMismatch, "eigh: matrix not square");
  EigenDecomposition out;
  out.vectors = h;
  out.values = zheevd(out.vectors, true);
  return out;
}

RVector eigvalsh(const Matrix& h) {
  require(h.rows() == h.cols(), ErrorKind::DimensionMismatch, "eigvalsh: matrix not square");
  Matrix work = h;
  return zheevd(work, false);
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double hermiticity_residual(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

double trace_norm(const Matrix& h) { return eigvalsh(h).cwiseAbs().sum(); }

double min_eigenvalue(const Matrix& h) {
  RVector w = eigvalsh(h);
  return w.size() ? w(0) : 0.0;
}

double max_eigenvalue(const Matrix& h) {
  RVector w = eigvalsh(h);
  return w.size() ? w(w.size() - 1) : 0.0;
}

Matrix psd_projection(const Matrix& h) {
  EigenDecomposition e = eigh(h);
  Eigen::Index first = 0;
  while (first < e.values.size() && e.values(first) <= 0.0) ++first;
  const Eigen::Index r = e.values.size() - first;
  if (r == 0) return Matrix::Zero(h.rows(), h.cols());
  Matrix v = e.vectors.rightCols(r);
  Matrix scaled = v * e.values.tail(r).cwiseSqrt().asDiagonal();
  return scaled * scaled.adjoint();
}

Matrix spectral_map(const Matrix& h, const std::function<double(double)>& f) {
  EigenDecomposition e = eigh(h);
  RVector fv = e.values.unaryExpr(f);
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

RVector project_to_simplex(const RVector& v, double total) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += u[i];
    const double t = (cumulative - total) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

std::vector<Matrix> hermitian_basis(int d) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Matrix re = Matrix::Zero(d, d);
      re(i, j) = s;
      re(j, i) = s;
      basis.push_back(re);
      Matrix im = Matrix::Zero(d, d);
      im(i, j) = Complex(0, -s);
      im(j, i) = Complex(0, s);
      basis.push_back(im);
    }
  return basis;
}

}  // namespace definetti
