#include "definetti/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"
#include "definetti/subsystems.hpp"

namespace definetti {

QqcState::QqcState(DensityMatrix state, Indices classical, double diag_tol)
    : state_(std::move(state)), classical_(std::move(classical)) {
  Layout layout(state_.dims());
  layout.check_systems(classical_);
  std::sort(classical_.begin(), classical_.end());
  const IndexMap reg = layout.offsets(classical_);
  const IndexMap rest = layout.offsets(layout.complement(classical_));
  const Matrix& m = state_.data();
  double worst = 0;
  for (std::size_t i = 0; i < reg.size(); ++i)
    for (std::size_t j = 0; j < reg.size(); ++j) {
      if (i == j) continue;
      for (Eigen::Index r : rest)
        for (Eigen::Index c : rest) worst = std::max(worst, std::abs(m(reg[i] + r, reg[j] + c)));
    }
  require(worst <= diag_tol, ErrorKind::NotClassical,
          "register is not classical, off-diagonal magnitude " + std::to_string(worst));
}

double shannon_entropy(const std::vector<double>& p) {
  double h = 0;
  for (double x : p)
    if (x > kEntropyCutoff) h -= x * std::log(x);
  return h;
}

double von_neumann_entropy(const Matrix& x) {
  RVector w = eigvalsh(x);
  return shannon_entropy(std::vector<double>(w.data(), w.data() + w.size()));
}

double von_neumann_entropy(const DensityMatrix& x) { return von_neumann_entropy(x.data()); }

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  require(rho.rows() == sigma.rows() && rho.cols() == sigma.cols(), ErrorKind::DimensionMismatch,
          "relative_entropy: size mismatch");
  EigenDecomposition s = eigh(sigma);
  double cross = 0;
  double leak = rho.trace().real();
  for (Eigen::Index j = 0; j < s.values.size(); ++j) {
    if (s.values(j) <= kSupportCutoff) continue;
    const double w = (s.vectors.col(j).adjoint() * rho * s.vectors.col(j))(0).real();
    leak -= w;
    cross += w * std::log(s.values(j));
  }
  if (leak > kSupportCutoff) return std::numeric_limits<double>::infinity();
  return -von_neumann_entropy(rho) - cross;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require(rho.dims() == sigma.dims(), ErrorKind::DimensionMismatch, "relative_entropy: dims differ");
  return relative_entropy(rho.data(), sigma.data());
}

double marginal_entropy(const DensityMatrix& x, const Indices& systems) {
  if (systems.empty()) return 0.0;
  return von_neumann_entropy(partial_trace(x, systems));
}

namespace {

void check_disjoint(const DensityMatrix& x, const std::vector<Indices>& groups) {
  Layout layout(x.dims());
  Indices all;
  for (const auto& g : groups) {
    require(!g.empty(), ErrorKind::InvalidInput, "empty subsystem group");
    all.insert(all.end(), g.begin(), g.end());
  }
  layout.check_systems(all);
}

Indices join(const std::vector<Indices>& groups) {
  Indices all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  return all;
}

// Maps original subsystem indices to positions after removing `removed`.
Indices relabel(const Indices& systems, const Indices& removed) {
  Indices out;
  for (int s : systems) {
    int shift = 0;
    for (int r : removed)
      if (r < s) ++shift;
    out.push_back(s - shift);
  }
  return out;
}

}  // namespace

double mutual_information(const DensityMatrix& x, const Indices& a, const Indices& b) {
  check_disjoint(x, {a, b});
  return marginal_entropy(x, a) + marginal_entropy(x, b) - marginal_entropy(x, join({a, b}));
}

double multipartite_mutual_information(const DensityMatrix& x, const std::vector<Indices>& groups) {
  check_disjoint(x, groups);
  double total = 0;
  for (const auto& g : groups) total += marginal_entropy(x, g);
  return total - marginal_entropy(x, join(groups));
}

std::vector<ClassicalSlice> classical_slices(const QqcState& x, const Indices& cond) {
  const DensityMatrix& s = x.state();
  Layout(s.dims()).check_systems(cond);
  for (int c : cond)
    require(std::find(x.classical().begin(), x.classical().end(), c) != x.classical().end(),
            ErrorKind::NotClassical, "conditioning subsystem " + std::to_string(c) + " is not classical");
  if (cond.empty()) return {{{}, 1.0, s}};
  // All conditioning registers share nothing but their basis; measure each in
  // its own computational basis.
  std::vector<std::pair<Indices, Matrix>> cur{{{}, s.data()}};
  Dims dims = s.dims();
  Indices sorted = cond;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (int c : sorted) {
    QcChannel ch(Povm::computational(dims[c]));
    std::vector<std::pair<Indices, Matrix>> next;
    for (auto& [val, op] : cur) {
      for (int k = 0; k < dims[c]; ++k) {
        Matrix m = contract_system(op, dims, c, ch.povm().element(k));
        if (m.trace().real() < kDropProbability) continue;
        Indices v = val;
        v.insert(v.begin(), k);
        next.emplace_back(std::move(v), std::move(m));
      }
    }
    dims.erase(dims.begin() + c);
    cur.swap(next);
  }
  // Reorder recorded values to follow `cond` as given.
  Indices asc = cond;
  std::sort(asc.begin(), asc.end());
  std::vector<ClassicalSlice> out;
  for (auto& [val, op] : cur) {
    Indices v(cond.size());
    for (std::size_t i = 0; i < cond.size(); ++i) {
      const auto pos = std::find(asc.begin(), asc.end(), cond[i]) - asc.begin();
      v[i] = val[pos];
    }
    const double p = op.trace().real();
    out.push_back({v, p, DensityMatrix::trusted(dims, op / p)});
  }
  return out;
}

double conditional_mutual_information(const QqcState& x, const Indices& a, const Indices& b,
                                      const Indices& cond) {
  check_disjoint(x.state(), cond.empty() ? std::vector<Indices>{a, b}
                                         : std::vector<Indices>{a, b, cond});
  Indices sorted = cond;
  std::sort(sorted.begin(), sorted.end());
  const Indices ra = relabel(a, sorted);
  const Indices rb = relabel(b, sorted);
  double total = 0;
  for (const auto& slice : classical_slices(x, cond))
    total += slice.probability * mutual_information(slice.state, ra, rb);
  return total;
}

double conditional_multipartite_mutual_information(const QqcState& x,
                                                   const std::vector<Indices>& groups,
                                                   const Indices& cond) {
  std::vector<Indices> all = groups;
  if (!cond.empty()) all.push_back(cond);
  check_disjoint(x.state(), all);
  Indices sorted = cond;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Indices> rg;
  for (const auto& g : groups) rg.push_back(relabel(g, sorted));
  double total = 0;
  for (const auto& slice : classical_slices(x, cond))
    total += slice.probability * multipartite_mutual_information(slice.state, rg);
  return total;
}

}  // namespace definetti

namespace definetti {

QqcState random_qqc_state(const Dims& dims, const Indices& classical, Rng& rng) {
  Layout layout(dims);
  layout.check_systems(classical);
  Indices cl = classical;
  std::sort(cl.begin(), cl.end());
  const Indices qu = layout.complement(cl);
  const IndexMap reg = layout.offsets(cl);
  const IndexMap rest = layout.offsets(qu);
  const auto p = random_probability_vector(static_cast<int>(reg.size()), rng);
  std::uniform_int_distribution<int> rank_pick(1, static_cast<int>(rest.size()));
  Matrix m = Matrix::Zero(layout.total(), layout.total());
  for (std::size_t c = 0; c < reg.size(); ++c) {
    Matrix block = random_density(static_cast<int>(rest.size()), rng, rank_pick(rng));
    for (std::size_t i = 0; i < rest.size(); ++i)
      for (std::size_t j = 0; j < rest.size(); ++j) m(reg[c] + rest[i], reg[c] + rest[j]) = p[c] * block(i, j);
  }
  return QqcState(DensityMatrix(dims, m), cl);
}

std::vector<IdentityCheck> check_information_identities(int states, int channels, Rng& rng) {
  IdentityCheck chain{"chain_rule", 0, 0.0, 1e-9};
  IdentityCheck pinsker{"pinsker", 0, 0.0, 1e-12};
  IdentityCheck multi_pinsker{"multipartite_pinsker", 0, 0.0, 1e-12};
  IdentityCheck tobi{"multipartite_to_bipartite", 0, 0.0, 1e-9};
  IdentityCheck relent{"mutual_information_as_relative_entropy", 0, 0.0, 1e-10};
  IdentityCheck mono{"monotonicity_under_qc_channels", 0, 0.0, 1e-10};
  std::uniform_int_distribution<int> dim23(2, 3);
  for (int t = 0; t < states; ++t) {
    // A, B1 (classical), B2, M (classical).
    const Dims dims{dim23(rng), dim23(rng), 2, dim23(rng)};
    QqcState x = random_qqc_state(dims, {1, 3}, rng);
    const double lhs = conditional_mutual_information(x, {0}, {1, 2}, {3});
    const double rhs = conditional_mutual_information(x, {0}, {1}, {3}) +
                       conditional_mutual_information(x, {0}, {2}, {1, 3});
    chain.worst = std::max(chain.worst, std::abs(lhs - rhs));
    ++chain.trials;

    const DensityMatrix ab = partial_trace(x.state(), {0, 2});
    const DensityMatrix pa = partial_trace(ab, {0}), pb = partial_trace(ab, {1});
    const double mi = mutual_information(ab, {0}, {1});
    const DensityMatrix prod = tensor(pa, pb);
    const double dist = trace_distance(ab, prod);
    pinsker.worst = std::max(pinsker.worst, 0.5 * dist * dist - mi);
    relent.worst = std::max(relent.worst, std::abs(mi - relative_entropy(ab, prod)));
    ++pinsker.trials;
    ++relent.trials;

    // Three quantum parties plus a classical register R.
    QqcState y = random_qqc_state({2, dim23(rng), 2, 2}, {3}, rng);
    const double whole = conditional_multipartite_mutual_information(y, {{0}, {1}, {2}}, {3});
    const double tele = conditional_mutual_information(y, {0}, {1}, {3}) +
                        conditional_mutual_information(y, {0, 1}, {2}, {3});
    tobi.worst = std::max(tobi.worst, std::abs(whole - tele));
    ++tobi.trials;
    const DensityMatrix q = partial_trace(y.state(), {0, 1, 2});
    const DensityMatrix qprod = tensor(tensor(partial_trace(q, {0}), partial_trace(q, {1})),
                                       partial_trace(q, {2}));
    const double mmi = multipartite_mutual_information(q, {{0}, {1}, {2}});
    const double qd = trace_distance(q, qprod);
    multi_pinsker.worst = std::max(multi_pinsker.worst, 0.5 * qd * qd - mmi);
    relent.worst = std::max(relent.worst, std::abs(mmi - relative_entropy(q, qprod)));
    ++multi_pinsker.trials;

    for (int c = 0; c < channels; ++c) {
      std::uniform_int_distribution<int> outs(2, 4);
      QcChannel ch(Povm(ab.dims()[1], random_povm_elements(ab.dims()[1], outs(rng), rng)));
      const double after = mutual_information(apply_qc_channel(ab, ch, 1), {0}, {1});
      mono.worst = std::max(mono.worst, after - mi);
      ++mono.trials;
    }
  }
  return {chain, pinsker, multi_pinsker, tobi, relent, mono};
}

}  // namespace definetti
