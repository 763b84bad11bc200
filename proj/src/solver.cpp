#include "definetti/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"
#include "definetti/subsystems.hpp"

namespace definetti {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::InfeasibleHeuristic: return "InfeasibleHeuristic";
    case SolveStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

Eigen::Index AffinePsdProblem::side() const { return product(dims); }

void AffinePsdProblem::validate() const {
  Layout layout(dims);
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    const auto& c = constraints[j];
    layout.check_systems(c.systems);
    const Eigen::Index d = layout.dim_of(c.systems);
    require(c.coeff.rows() == d && c.coeff.cols() == d, ErrorKind::DimensionMismatch,
            "constraint " + std::to_string(j) + " coefficient has wrong size");
    require(c.coeff.allFinite() && std::isfinite(c.target), ErrorKind::InvalidInput,
            "constraint " + std::to_string(j) + " is not finite");
    require(hermiticity_residual(c.coeff) <= 1e-9, ErrorKind::InvalidInput,
            "constraint " + std::to_string(j) + " coefficient not Hermitian");
  }
  if (trace_value) require(std::isfinite(*trace_value), ErrorKind::InvalidInput, "trace value not finite");
  if (!exchangeable_blocks.empty()) {
    Indices all;
    for (const auto& b : exchangeable_blocks) {
      require(b.size() == exchangeable_blocks[0].size() && !b.empty(), ErrorKind::InvalidInput,
              "exchangeable blocks must be nonempty and of equal length");
      for (std::size_t i = 0; i < b.size(); ++i) {
        layout.check_systems({b[i]});
        require(dims[b[i]] == dims[exchangeable_blocks[0][i]], ErrorKind::DimensionMismatch,
                "exchangeable blocks have mismatched dims");
      }
      all.insert(all.end(), b.begin(), b.end());
    }
    layout.check_systems(all);
  }
}

BlockSymmetrizer::BlockSymmetrizer(const Dims& dims, const std::vector<Indices>& blocks) {
  if (blocks.size() < 2) return;
  Layout layout(dims);
  n_ = layout.total();
  const int nsys = layout.size();
  const std::size_t bl = blocks[0].size();
  Eigen::Index block_dim = 1;
  for (int s : blocks[0]) block_dim *= dims[s];
  // Digit strides.
  std::vector<Eigen::Index> stride(nsys);
  {
    Eigen::Index s = 1;
    for (int i = nsys - 1; i >= 0; --i) {
      stride[i] = s;
      s *= dims[i];
    }
  }
  auto digit = [&](Eigen::Index idx, int s) { return (idx / stride[s]) % dims[s]; };
  // Index of block b's joint digits within an index.
  auto block_code = [&](Eigen::Index idx, const Indices& b) {
    Eigen::Index code = 0;
    for (std::size_t i = 0; i < bl; ++i) code = code * dims[b[i]] + digit(idx, b[i]);
    return code;
  };
  // Offset contributed by writing a joint code into block b.
  auto write_block = [&](Eigen::Index code, const Indices& b) {
    Eigen::Index off = 0;
    for (int i = static_cast<int>(bl) - 1; i >= 0; --i) {
      off += (code % dims[b[i]]) * stride[b[i]];
      code /= dims[b[i]];
    }
    return off;
  };
  std::vector<Eigen::Index> block_offset_part(n_);
  // Part of each index not belonging to any block.
  {
    std::vector<bool> in_block(nsys, false);
    for (const auto& b : blocks)
      for (int s : b) in_block[s] = true;
    for (Eigen::Index i = 0; i < n_; ++i) {
      Eigen::Index off = 0;
      for (int s = 0; s < nsys; ++s)
        if (!in_block[s]) off += digit(i, s) * stride[s];
      block_offset_part[i] = off;
    }
  }
  const std::size_t nb = blocks.size();
  std::vector<std::vector<Eigen::Index>> codes(nb, std::vector<Eigen::Index>(n_));
  for (std::size_t b = 0; b < nb; ++b)
    for (Eigen::Index i = 0; i < n_; ++i) codes[b][i] = block_code(i, blocks[b]);

  std::vector<int> canon_id(static_cast<std::size_t>(n_ * n_), -1);
  orbit_.assign(static_cast<std::size_t>(n_ * n_), 0);
  std::vector<double> sizes;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs(nb);
  for (Eigen::Index c = 0; c < n_; ++c)
    for (Eigen::Index r = 0; r < n_; ++r) {
      for (std::size_t b = 0; b < nb; ++b) pairs[b] = {codes[b][r], codes[b][c]};
      std::sort(pairs.begin(), pairs.end());
      Eigen::Index rr = block_offset_part[r], cc = block_offset_part[c];
      for (std::size_t b = 0; b < nb; ++b) {
        rr += write_block(pairs[b].first, blocks[b]);
        cc += write_block(pairs[b].second, blocks[b]);
      }
      int& id = canon_id[static_cast<std::size_t>(cc * n_ + rr)];
      if (id < 0) {
        id = static_cast<int>(sizes.size());
        sizes.push_back(0.0);
      }
      orbit_[static_cast<std::size_t>(c * n_ + r)] = id;
      sizes[id] += 1.0;
    }
  inv_size_.resize(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) inv_size_[i] = 1.0 / sizes[i];
  (void)block_dim;
}

Matrix BlockSymmetrizer::apply(const Matrix& x) const {
  if (trivial()) return x;
  std::vector<Complex> sums(inv_size_.size(), Complex(0));
  const Complex* px = x.data();
  const std::size_t total = orbit_.size();
  for (std::size_t i = 0; i < total; ++i) sums[orbit_[i]] += px[i];
  for (std::size_t o = 0; o < sums.size(); ++o) sums[o] *= inv_size_[o];
  Matrix out(n_, n_);
  Complex* po = out.data();
  for (std::size_t i = 0; i < total; ++i) po[i] = sums[orbit_[i]];
  return out;
}

namespace {

using Point = std::vector<Matrix>;

// Invariant Hermitian matrices written as X = sum_lambda I_{U_lambda} (x) B_lambda.
// One multiplicity block per irreducible representation of the block
// permutation group, found as a joint eigenspace of the Jucys-Murphy elements
// for a single standard tableau of each shape.
class ReducedSpace {
 public:
  ReducedSpace(const Dims& dims, const std::vector<Indices>& blocks)
      : n_(product(dims)), dims_(dims), blocks_(blocks), sym_(dims, blocks) {
    if (blocks.size() < 2) {
      sizes_ = {static_cast<int>(n_)};
      weights_ = {1.0};
      return;
    }
    const int k = static_cast<int>(blocks.size());
    // Index maps of the block transpositions (i j), i < j.
    transpositions_.assign(k, std::vector<IndexMap>(k));
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        Indices perm(dims.size());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t t = 0; t < blocks[i].size(); ++t) std::swap(perm[blocks[i][t]], perm[blocks[j][t]]);
        transpositions_[i][j] = permutation_index_map(dims, perm);
      }
    std::vector<std::pair<std::vector<int>, RMatrix>> leaves;
    split(1, RMatrix::Identity(n_, n_), {0}, leaves);
    std::map<std::vector<int>, std::pair<int, RMatrix>> by_shape;  // shape -> (count, basis)
    for (auto& [contents, q] : leaves) {
      std::vector<int> shape = shape_of(contents);
      require(!shape.empty(), ErrorKind::InvalidInput, "symmetry reduction produced an invalid tableau");
      auto it = by_shape.find(shape);
      if (it == by_shape.end())
        by_shape.emplace(shape, std::make_pair(1, std::move(q)));
      else {
        require(it->second.second.cols() == q.cols(), ErrorKind::InvalidInput,
                "symmetry reduction found inconsistent multiplicities");
        ++it->second.first;
      }
    }
    Eigen::Index total = 0;
    for (auto& [shape, cq] : by_shape) {
      weights_.push_back(cq.first);
      sizes_.push_back(static_cast<int>(cq.second.cols()));
      total += cq.first * cq.second.cols();
      q_.push_back(std::move(cq.second));
    }
    require(total == n_, ErrorKind::InvalidInput, "symmetry reduction lost dimensions");
  }

  bool trivial() const { return q_.empty(); }
  std::size_t num_blocks() const { return sizes_.size(); }
  const std::vector<int>& sizes() const { return sizes_; }
  const BlockSymmetrizer& symmetrizer() const { return sym_; }

  Point reduce(const Matrix& x) const {
    if (trivial()) return {hermitian_part(x)};
    Matrix g = sym_.apply(x);
    const RMatrix re = g.real(), im = g.imag();
    Point out;
    for (const RMatrix& q : q_) {
      const RMatrix qt = q.transpose();
      Matrix b(q.cols(), q.cols());
      b.real() = qt * re * q;
      b.imag() = qt * im * q;
      out.push_back(hermitian_part(b));
    }
    return out;
  }

  Matrix lift(const Point& b) const {
    if (trivial()) return b[0];
    RMatrix re = RMatrix::Zero(n_, n_), im = RMatrix::Zero(n_, n_);
    for (std::size_t l = 0; l < q_.size(); ++l) {
      re += weights_[l] * q_[l] * b[l].real() * q_[l].transpose();
      im += weights_[l] * q_[l] * b[l].imag() * q_[l].transpose();
    }
    Matrix x(n_, n_);
    x.real() = re;
    x.imag() = im;
    return hermitian_part(sym_.apply(x));
  }

  // Reduced forms of h (x) I for each h acting on `systems`, without forming
  // the embedded operators. With Q_s the rows of Q whose digits on the
  // systems read s, Q^T (h (x) I) Q = sum_{s,s'} h_{ss'} Q_s^T Q_{s'}; the
  // block average becomes an average over the images of `systems`.
  std::vector<Point> reduce_local(const std::vector<Matrix>& hs, const Indices& systems) const {
    std::vector<Point> out(hs.size());
    const Layout layout(dims_);
    const Eigen::Index d = layout.dim_of(systems);
    double largest = 0;
    for (int m : sizes_) largest = std::max(largest, static_cast<double>(m));
    if (trivial() || static_cast<double>(d * d) * largest * largest > 2e7) {
      for (std::size_t j = 0; j < hs.size(); ++j) out[j] = reduce(embed(hs[j], dims_, systems));
      return out;
    }
    std::vector<std::pair<int, int>> where(dims_.size(), {-1, -1});
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (std::size_t t = 0; t < blocks_[b].size(); ++t) where[blocks_[b][t]] = {static_cast<int>(b), static_cast<int>(t)};
    std::map<Indices, double> images;
    std::vector<int> perm(blocks_.size());
    std::iota(perm.begin(), perm.end(), 0);
    double count = 0;
    do {
      Indices img;
      for (int s : systems) {
        const auto [b, t] = where[s];
        img.push_back(b < 0 ? s : blocks_[perm[b]][t]);
      }
      images[img] += 1;
      count += 1;
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (const RMatrix& q : q_) {
      const Eigen::Index m = q.cols();
      std::vector<RMatrix> g(static_cast<std::size_t>(d * d), RMatrix::Zero(m, m));
      for (const auto& [img, c] : images) {
        const IndexMap so = layout.offsets(img), ro = layout.offsets(layout.complement(img));
        std::vector<RMatrix> qs(static_cast<std::size_t>(d), RMatrix(static_cast<Eigen::Index>(ro.size()), m));
        for (Eigen::Index a = 0; a < d; ++a)
          for (std::size_t r = 0; r < ro.size(); ++r) qs[a].row(static_cast<Eigen::Index>(r)) = q.row(so[a] + ro[r]);
        for (Eigen::Index a = 0; a < d; ++a)
          for (Eigen::Index b = 0; b < d; ++b) g[a * d + b].noalias() += (c / count) * qs[a].transpose() * qs[b];
      }
      for (std::size_t j = 0; j < hs.size(); ++j) {
        Matrix acc = Matrix::Zero(m, m);
        for (Eigen::Index a = 0; a < d; ++a)
          for (Eigen::Index b = 0; b < d; ++b) {
            const Complex h = hs[j](a, b);
            if (h.real() != 0) acc.real() += h.real() * g[a * d + b];
            if (h.imag() != 0) acc.imag() += h.imag() * g[a * d + b];
          }
        out[j].push_back(hermitian_part(acc));
      }
    }
    return out;
  }

  // Real coordinates in which inner() is the dot product: per block the
  // diagonal, then sqrt(2) times the real and imaginary upper triangle, all
  // scaled by sqrt(weight).
  Eigen::Index flat_size() const {
    Eigen::Index s = 0;
    for (int m : sizes_) s += static_cast<Eigen::Index>(m) * m;
    return s;
  }

  RVector flatten(const Point& b) const {
    RVector v(flat_size());
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < b.size(); ++l) {
      const double w = std::sqrt(weights_[l]), w2 = w * std::sqrt(2.0);
      const Matrix& x = b[l];
      for (Eigen::Index i = 0; i < x.rows(); ++i) v(k++) = w * x(i, i).real();
      for (Eigen::Index j = 1; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < j; ++i) {
          v(k++) = w2 * x(i, j).real();
          v(k++) = w2 * x(i, j).imag();
        }
    }
    return v;
  }

  Point unflatten(const RVector& v) const {
    Point out;
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < sizes_.size(); ++l) {
      const double w = 1 / std::sqrt(weights_[l]), w2 = w / std::sqrt(2.0);
      Matrix x(sizes_[l], sizes_[l]);
      for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, i) = w * v(k++);
      for (Eigen::Index j = 1; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < j; ++i) {
          x(i, j) = Complex(w2 * v(k), w2 * v(k + 1));
          x(j, i) = std::conj(x(i, j));
          k += 2;
        }
      out.push_back(std::move(x));
    }
    return out;
  }

  double inner(const Point& a, const Point& b) const {
    double s = 0;
    for (std::size_t l = 0; l < a.size(); ++l) s += weights_[l] * definetti::inner(a[l], b[l]);
    return s;
  }

  Point identity() const {
    Point out;
    for (int m : sizes_) out.push_back(Matrix::Identity(m, m));
    return out;
  }

 private:
  // Recursively splits span(q) into eigenspaces of the Jucys-Murphy element
  // X_{k+1} = sum_{i<=k} (i, k+1) (0-based block k).
  void split(int k, const RMatrix& q, std::vector<int> contents,
             std::vector<std::pair<std::vector<int>, RMatrix>>& leaves) const {
    const int nb = static_cast<int>(transpositions_.size());
    if (k == nb) {
      leaves.emplace_back(std::move(contents), q);
      return;
    }
    RMatrix xq = RMatrix::Zero(q.rows(), q.cols());
    for (int i = 0; i < k; ++i) {
      const IndexMap& map = transpositions_[i][k];
      for (Eigen::Index r = 0; r < q.rows(); ++r) xq.row(r) += q.row(map[r]);
    }
    RMatrix s = q.transpose() * xq;
    s = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(s);
    std::map<int, std::vector<Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      groups[static_cast<int>(std::lround(es.eigenvalues()(i)))].push_back(i);
    for (auto& [c, cols] : groups) {
      RMatrix v(s.rows(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t t = 0; t < cols.size(); ++t) v.col(t) = es.eigenvectors().col(cols[t]);
      std::vector<int> next = contents;
      next.push_back(c);
      split(k + 1, q * v, std::move(next), leaves);
    }
  }

  // Row lengths of the standard tableau with the given content sequence, or
  // empty if the sequence is not a valid content vector.
  static std::vector<int> shape_of(const std::vector<int>& contents) {
    std::vector<int> rows;
    for (int c : contents) {
      bool placed = false;
      for (std::size_t r = 0; r <= rows.size(); ++r) {
        const int len = r < rows.size() ? rows[r] : 0;
        if (len - static_cast<int>(r) != c) continue;
        if (r > 0 && rows[r - 1] <= len) continue;
        if (r == rows.size()) rows.push_back(0);
        ++rows[r];
        placed = true;
        break;
      }
      if (!placed) return {};
    }
    return rows;
  }

  Eigen::Index n_;
  Dims dims_;
  std::vector<Indices> blocks_;
  BlockSymmetrizer sym_;
  std::vector<std::vector<IndexMap>> transpositions_;
  std::vector<RMatrix> q_;
  std::vector<int> sizes_;
  std::vector<double> weights_;
};

double max_abs(const RVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// The affine constraints expressed on the reduced space, one row of c_ per
// constraint in flat coordinates.
class ReducedProblem {
 public:
  explicit ReducedProblem(const AffinePsdProblem& p) : space_(p.dims, p.exchangeable_blocks) {
    p.validate();
    const Eigen::Index rows = static_cast<Eigen::Index>(p.constraints.size()) + (p.trace_value ? 1 : 0);
    c_.resize(rows, space_.flat_size());
    t_.resize(rows);
    std::map<Indices, std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < p.constraints.size(); ++j) groups[p.constraints[j].systems].push_back(j);
    for (const auto& [systems, idx] : groups) {
      std::vector<Matrix> hs;
      for (std::size_t j : idx) hs.push_back(p.constraints[j].coeff);
      const std::vector<Point> red = space_.reduce_local(hs, systems);
      for (std::size_t t = 0; t < idx.size(); ++t) {
        c_.row(static_cast<Eigen::Index>(idx[t])) = space_.flatten(red[t]).transpose();
        t_(static_cast<Eigen::Index>(idx[t])) = p.constraints[idx[t]].target;
      }
    }
    if (p.trace_value) {
      c_.row(rows - 1) = space_.flatten(space_.identity()).transpose();
      t_(rows - 1) = *p.trace_value;
    }
    gram_ = c_ * c_.transpose();
    gram_pinv_ = pinv(static_cast<std::size_t>(-1));
  }

  const ReducedSpace& space() const { return space_; }
  void set_target(std::size_t j, double t) { t_(static_cast<Eigen::Index>(j)) = t; }
  double value(std::size_t j, const Point& b) const {
    return c_.row(static_cast<Eigen::Index>(j)).dot(space_.flatten(b));
  }

  // Projection onto the constraints other than `skip`.
  void enable_partial(std::size_t skip) { partial_pinv_ = pinv(skip); }
  Point project_partial(const Point& b) const { return apply(b, partial_pinv_, residuals(b)); }

  RVector residuals(const Point& b) const { return c_ * space_.flatten(b) - t_; }

  // r must be residuals(b).
  Point project(const Point& b, const RVector& r) const { return apply(b, gram_pinv_, r); }
  Point project(const Point& b) const { return project(b, residuals(b)); }

 private:
  Point apply(const Point& b, const RMatrix& inv, const RVector& r) const {
    if (c_.rows() == 0) return b;
    RVector v = space_.flatten(b);
    v.noalias() -= c_.transpose() * (inv * r);
    return space_.unflatten(v);
  }

  // Pseudo-inverse of the Gram matrix with row and column `skip` removed,
  // padded back with zeros.
  RMatrix pinv(std::size_t skip) const {
    const Eigen::Index m = gram_.rows();
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < m; ++j)
      if (static_cast<std::size_t>(j) != skip) idx.push_back(j);
    RMatrix out = RMatrix::Zero(m, m);
    const Eigen::Index r = static_cast<Eigen::Index>(idx.size());
    if (r == 0) return out;
    RMatrix g(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < r; ++j) g(i, j) = gram_(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
    const double cutoff = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    RVector inv = es.eigenvalues().unaryExpr([&](double v) { return v > cutoff ? 1.0 / v : 0.0; });
    const RMatrix sub = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < r; ++j) out(idx[i], idx[j]) = sub(i, j);
    return out;
  }

  ReducedSpace space_;
  RMatrix c_;
  RVector t_;
  RMatrix gram_;
  RMatrix gram_pinv_;
  RMatrix partial_pinv_;
};

Point psd_project(const Point& b) {
  Point out;
  out.reserve(b.size());
  for (const Matrix& m : b) out.push_back(psd_projection(m));
  return out;
}

double distance(const ReducedSpace& sp, const Point& a, const Point& b) {
  Point d = a;
  for (std::size_t l = 0; l < d.size(); ++l) d[l] -= b[l];
  return std::sqrt(std::max(0.0, sp.inner(d, d)));
}

SolveReport finish(const AffinePsdProblem& p, SolveStatus status, const Matrix& x, long it,
                   double gap, std::string note) {
  SolveReport rep;
  rep.status = status;
  rep.iterations = it;
  rep.gap = gap;
  PointResiduals res = check_point(p, x);
  rep.affine_residual = res.affine;
  rep.psd_residual = res.psd;
  rep.symmetry_residual = res.symmetry;
  rep.point = x;
  rep.note = std::move(note);
  return rep;
}

// A strictly feasible point for every constraint except the objective one.
// Mixing it into an affine-exact iterate gives a certified point at a
// slightly smaller objective value.
struct Blend {
  Point interior;
  double mu = 0.0;       // smallest eigenvalue of the interior point
  double value0 = 0.0;   // its objective value
  double lambda = 0.0;   // target of the current step
  double max_loss = 0.0;
  double floor = 0.0;  // current certified lower end
  std::size_t obj_index = 0;
};

double min_eigenvalue(const Point& b) {
  double m = std::numeric_limits<double>::infinity();
  for (const Matrix& x : b) m = std::min(m, eigvalsh(x).minCoeff());
  return m;
}

SolveReport run_dykstra(const AffinePsdProblem& p, const ReducedProblem& rp, const DykstraOptions& opts,
                        const Blend* blend = nullptr) {
  const ReducedSpace& sp = rp.space();
  const Eigen::Index n = p.side();
  Matrix start = opts.start ? *opts.start : Matrix(Matrix::Identity(n, n) / static_cast<double>(n));
  require(start.rows() == n && start.cols() == n, ErrorKind::DimensionMismatch, "start point has wrong size");
  Point x = sp.reduce(start);
  RVector rx = rp.residuals(x);
  Point y = rp.project(x, rx);
  const double affine0 = max_abs(rp.residuals(y));
  if (affine0 > std::max(opts.feas_tol, 1e-9) * 10.0)
    return finish(p, SolveStatus::InfeasibleHeuristic, sp.lift(y), 0, affine0,
                  "affine constraints inconsistent");
  if (!p.psd) return finish(p, SolveStatus::Feasible, sp.lift(y), 0, 0.0, "no cone constraint");

  Point q(y.size());
  for (std::size_t l = 0; l < y.size(); ++l) q[l] = Matrix::Zero(y[l].rows(), y[l].cols());
  std::deque<double> window;
  double gap = 0.0;
  for (long it = 1; it <= opts.max_iter; ++it) {
    if (it > 1) y = rp.project(x, rx);
    Point z = y;
    for (std::size_t l = 0; l < z.size(); ++l) z[l] += q[l];
    x = psd_project(z);
    for (std::size_t l = 0; l < z.size(); ++l) q[l] = z[l] - x[l];
    gap = distance(sp, y, x);
    if (blend && it % 10 == 0) {
      // The PSD iterate corrected onto the other constraints, mixed with the
      // interior point just enough to be PSD again; its objective value is
      // certified whatever it is.
      Point yb = rp.project_partial(x);
      const double eps = std::max(0.0, -min_eigenvalue(yb));
      const double theta = eps / (eps + blend->mu);
      const double value = (1 - theta) * rp.value(blend->obj_index, yb) + theta * blend->value0;
      if (value >= blend->lambda - blend->max_loss) {
        Point w = yb;
        for (std::size_t l = 0; l < w.size(); ++l) w[l] = (1 - theta) * yb[l] + theta * blend->interior[l];
        AffinePsdProblem shifted = p;
        shifted.constraints[blend->obj_index].target = value;
        SolveReport rep = finish(shifted, SolveStatus::Feasible, sp.lift(w), it, gap,
                                 "certified by mixing with an interior point");
        rep.objective = value;
        if (rep.affine_residual <= opts.feas_tol && rep.psd_residual <= opts.feas_tol &&
            rep.symmetry_residual <= opts.feas_tol)
          return rep;
      }
    }
    rx = rp.residuals(x);
    if (max_abs(rx) <= opts.feas_tol) {
      SolveReport rep = finish(p, SolveStatus::Feasible, sp.lift(x), it, gap, "");
      if (rep.affine_residual <= opts.feas_tol && rep.psd_residual <= opts.feas_tol &&
          rep.symmetry_residual <= opts.feas_tol)
        return rep;
    }
    window.push_back(gap);
    if (static_cast<long>(window.size()) > opts.stall_window) {
      const double old = window.front();
      window.pop_front();
      if (old - gap <= opts.stall_rel * old) {
        if (gap > opts.gap_tol)
          return finish(p, SolveStatus::InfeasibleHeuristic, sp.lift(x), it, gap,
                        "alternating-projection gap stalled above tolerance (heuristic)");
        return finish(p, SolveStatus::IterationLimit, sp.lift(x), it, gap,
                      "gap stalled below tolerance without meeting feas_tol");
      }
    }
  }
  return finish(p, SolveStatus::IterationLimit, sp.lift(x), opts.max_iter, gap, "iteration limit reached");
}

}  // namespace

PointResiduals check_point(const AffinePsdProblem& p, const Matrix& x) {
  PointResiduals r;
  Layout layout(p.dims);
  require(x.rows() == layout.total() && x.cols() == layout.total(), ErrorKind::DimensionMismatch,
          "point has wrong size");
  r.hermiticity = hermiticity_residual(x);
  for (const auto& c : p.constraints) {
    // Dense operator c (x) I_rest, reordered into place.
    Indices order = c.systems;
    const Indices rest = layout.complement(c.systems);
    order.insert(order.end(), rest.begin(), rest.end());
    Indices perm(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) perm[order[i]] = static_cast<int>(i);
    const Eigen::Index drest = layout.dim_of(rest);
    Matrix big = kron(c.coeff, Matrix::Identity(drest, drest));
    Dims kdims = layout.dims_of(order);
    Matrix e = permute_matrix(big, kdims, perm);
    const double v = (e * x).trace().real();
    r.affine = std::max(r.affine, std::abs(v - c.target));
  }
  if (p.trace_value) r.affine = std::max(r.affine, std::abs(x.trace().real() - *p.trace_value));
  if (p.psd) r.psd = std::max(0.0, -min_eigenvalue(hermitian_part(x)));
  const auto& blocks = p.exchangeable_blocks;
  for (std::size_t b = 0; b + 1 < blocks.size(); ++b) {
    Indices perm(p.dims.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 0; i < blocks[b].size(); ++i) std::swap(perm[blocks[b][i]], perm[blocks[b + 1][i]]);
    const Matrix y = permute_matrix(x, p.dims, perm);
    r.symmetry = std::max(r.symmetry, (y - x).cwiseAbs().maxCoeff());
  }
  return r;
}

SolveReport dykstra_feasibility(const AffinePsdProblem& p, const DykstraOptions& opts) {
  ReducedProblem rp(p);
  return run_dykstra(p, rp, opts);
}

MaximizeResult maximize_linear_psd(const AffinePsdProblem& p, const LocalOperator& objective,
                                   double lo, double hi, double obj_tol, const DykstraOptions& opts) {
  require(lo <= hi, ErrorKind::BracketError, "bracket lower end exceeds upper end");
  require(obj_tol > 0, ErrorKind::InvalidInput, "obj_tol must be positive");
  AffinePsdProblem q = p;
  q.constraints.push_back({objective.systems, objective.coeff, lo});
  DykstraOptions o = opts;

  ReducedProblem rp(q);
  const ReducedSpace& sp = rp.space();
  const std::size_t obj_index = q.constraints.size() - 1;
  rp.enable_partial(obj_index);
  const Point obj_reduced = sp.reduce_local({objective.coeff}, objective.systems)[0];
  std::optional<Blend> blend;
  auto solve_at = [&](double lambda, const DykstraOptions& opt) {
    q.constraints.back().target = lambda;
    rp.set_target(obj_index, lambda);
    if (blend) {
      // Any certified value above the current lower end is progress; the
      // allowed loss shrinks with the bracket.
      blend->lambda = lambda;
      blend->max_loss = std::max(0.25 * obj_tol, 0.25 * (lambda - blend->floor));
    }
    return run_dykstra(q, rp, opt, blend ? &*blend : nullptr);
  };

  MaximizeResult out;
  SolveReport best = solve_at(lo, o);
  ++out.steps;
  if (best.status == SolveStatus::IterationLimit)
    fail(ErrorKind::IterationLimit, "feasibility at the lower end of the bracket was not decided");
  require(best.status == SolveStatus::Feasible, ErrorKind::BracketError,
          "lower end of the bracket is infeasible");
  o.start = best.point;
  double a = lo, b = hi;
  // Weak duality: with tr X = T fixed, <C, X> <= T * lambda_max(G(C)) for
  // every invariant PSD X, whatever the remaining constraints are.
  if (p.trace_value && p.psd) {
    double top = -std::numeric_limits<double>::infinity();
    for (const Matrix& blk : obj_reduced) top = std::max(top, eigvalsh(blk).maxCoeff());
    b = std::max(a, std::min(b, *p.trace_value * top + 1e-12));
  }
  {
    Point x0 = sp.reduce(*best.point);
    const double mu = min_eigenvalue(x0);
    if (mu > 1e-9) {
      Blend bl;
      bl.interior = std::move(x0);
      bl.mu = mu;
      bl.value0 = lo;
      bl.floor = lo;
      bl.obj_index = obj_index;
      blend = std::move(bl);
    }
  }
  if (b > a) {
    // Cheap attempt at the top of the bracket; undecided counts as not certified.
    DykstraOptions capped = o;
    capped.max_iter = std::min<long>(o.max_iter, 1000);
    SolveReport top = solve_at(b, capped);
    ++out.steps;
    if (top.status == SolveStatus::Feasible) {
      best = top;
      a = top.objective.value_or(b);
      if (blend) blend->floor = a;
    }
  }
  // Steps that are not certified feasible (including undecided ones near the
  // boundary) move the upper end, so `value` is always certified.
  while (b - a > obj_tol) {
    const double mid = 0.5 * (a + b);
    SolveReport rep = solve_at(mid, o);
    ++out.steps;
    if (rep.status == SolveStatus::Feasible) {
      a = std::max(a, rep.objective.value_or(mid));
      if (blend) blend->floor = a;
      best = rep;
      o.start = rep.point;
    } else {
      b = mid;
    }
  }
  out.value = a;
  out.upper = b;
  Matrix e = embed(objective.coeff, p.dims, objective.systems);
  best.objective = inner(e, *best.point);
  out.report = best;
  return out;
}

}  // namespace definetti
