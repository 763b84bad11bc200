#include "definetti/subsystems.hpp"

#include <algorithm>
#include <string>

#include "definetti/errors.hpp"

namespace definetti {

Eigen::Index product(const Dims& dims) {
  Eigen::Index p = 1;
  for (int d : dims) p *= d;
  return p;
}

Layout::Layout(Dims dims) : dims_(std::move(dims)), strides_(dims_.size()) {
  for (int d : dims_) require(d >= 1, ErrorKind::InvalidInput, "subsystem dimension must be >= 1");
  Eigen::Index stride = 1;
  for (int i = size() - 1; i >= 0; --i) {
    strides_[i] = stride;
    stride *= dims_[i];
  }
  total_ = stride;
}

void Layout::check_systems(const Indices& systems) const {
  std::vector<bool> seen(dims_.size(), false);
  for (int s : systems) {
    require(s >= 0 && s < size(), ErrorKind::IndexOutOfRange,
            "subsystem index " + std::to_string(s) + " out of range");
    require(!seen[s], ErrorKind::InvalidInput, "repeated subsystem index " + std::to_string(s));
    seen[s] = true;
  }
}

Indices Layout::complement(const Indices& systems) const {
  std::vector<bool> in(dims_.size(), false);
  for (int s : systems) in[s] = true;
  Indices out;
  for (int i = 0; i < size(); ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

Dims Layout::dims_of(const Indices& systems) const {
  Dims out;
  for (int s : systems) out.push_back(dims_[s]);
  return out;
}

Eigen::Index Layout::dim_of(const Indices& systems) const { return product(dims_of(systems)); }

IndexMap Layout::offsets(const Indices& systems) const {
  IndexMap out{0};
  for (int s : systems) {
    IndexMap next;
    next.reserve(out.size() * dims_[s]);
    for (Eigen::Index base : out)
      for (int a = 0; a < dims_[s]; ++a) next.push_back(base + a * strides_[s]);
    out.swap(next);
  }
  return out;
}

namespace {

void check_square(const Matrix& x, const Layout& layout) {
  require(x.rows() == x.cols() && x.rows() == layout.total(), ErrorKind::DimensionMismatch,
          "operator side " + std::to_string(x.rows()) + " does not match subsystem dims product " +
              std::to_string(layout.total()));
}

}  // namespace

Matrix partial_trace(const Matrix& x, const Dims& dims, const Indices& keep) {
  Layout layout(dims);
  check_square(x, layout);
  layout.check_systems(keep);
  const IndexMap k = layout.offsets(keep);
  const IndexMap t = layout.offsets(layout.complement(keep));
  const Eigen::Index n = static_cast<Eigen::Index>(k.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) {
      Complex acc = 0;
      for (Eigen::Index off : t) acc += x(k[r] + off, k[c] + off);
      out(r, c) = acc;
    }
  return out;
}

Matrix embed(const Matrix& local, const Dims& dims, const Indices& systems) {
  Layout layout(dims);
  layout.check_systems(systems);
  const IndexMap k = layout.offsets(systems);
  const IndexMap t = layout.offsets(layout.complement(systems));
  require(local.rows() == static_cast<Eigen::Index>(k.size()) && local.cols() == local.rows(),
          ErrorKind::DimensionMismatch, "embed: local operator has wrong size");
  Matrix out = Matrix::Zero(layout.total(), layout.total());
  for (Eigen::Index off : t)
    for (Eigen::Index c = 0; c < local.cols(); ++c)
      for (Eigen::Index r = 0; r < local.rows(); ++r) out(k[r] + off, k[c] + off) = local(r, c);
  return out;
}

void check_permutation(const Indices& perm, int n) {
  require(static_cast<int>(perm.size()) == n, ErrorKind::InvalidInput,
          "permutation length does not match number of subsystems");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    require(p >= 0 && p < n && !seen[p], ErrorKind::InvalidInput, "not a permutation");
    seen[p] = true;
  }
}

Dims permute_dims(const Dims& dims, const Indices& perm) {
  check_permutation(perm, static_cast<int>(dims.size()));
  Dims out;
  for (int p : perm) out.push_back(dims[p]);
  return out;
}

IndexMap permutation_index_map(const Dims& dims, const Indices& perm) {
  check_permutation(perm, static_cast<int>(dims.size()));
  return Layout(dims).offsets(perm);
}

Matrix permute_matrix(const Matrix& x, const Dims& dims, const Indices& perm) {
  Layout layout(dims);
  check_square(x, layout);
  const IndexMap map = permutation_index_map(dims, perm);
  const Eigen::Index n = layout.total();
  Matrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = x(map[r], map[c]);
  return out;
}

Matrix contract_system(const Matrix& x, const Dims& dims, int s, const Matrix& m) {
  Layout layout(dims);
  check_square(x, layout);
  layout.check_systems({s});
  require(m.rows() == dims[s] && m.cols() == dims[s], ErrorKind::DimensionMismatch,
          "contract_system: local operator has wrong size");
  const IndexMap rest = layout.offsets(layout.complement({s}));
  const IndexMap loc = layout.offsets({s});
  const Eigen::Index n = static_cast<Eigen::Index>(rest.size());
  const int d = dims[s];
  Matrix out = Matrix::Zero(n, n);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const Complex w = m(b, a);
      if (w == Complex(0)) continue;
      for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index col = rest[c] + loc[b];
        for (Eigen::Index r = 0; r < n; ++r) out(r, c) += w * x(rest[r] + loc[a], col);
      }
    }
  return out;
}

}  // namespace definetti
