#include "definetti/norms.hpp"

#include <algorithm>
#include <cmath>

#include "definetti/errors.hpp"
#include "definetti/ic_povm.hpp"
#include "definetti/linalg.hpp"
#include "definetti/lp.hpp"
#include "definetti/random.hpp"
#include "definetti/subsystems.hpp"

namespace definetti {

double norm_2l(const HermitianOp& x, const std::vector<Indices>& parts) {
  const int n = x.num_systems();
  const int l = static_cast<int>(parts.size());
  require(l >= 1 && l <= 20, ErrorKind::InvalidInput, "need between 1 and 20 parts");
  std::vector<int> owner(n, -1);
  for (int i = 0; i < l; ++i)
    for (int s : parts[i]) {
      require(s >= 0 && s < n, ErrorKind::IndexOutOfRange, "part refers to a missing subsystem");
      require(owner[s] < 0, ErrorKind::InvalidInput, "parts overlap");
      owner[s] = i;
    }
  for (int s = 0; s < n; ++s) require(owner[s] >= 0, ErrorKind::InvalidInput, "parts do not cover every subsystem");
  double total = 0;
  for (unsigned mask = 0; mask < (1u << l); ++mask) {
    Indices keep;
    for (int s = 0; s < n; ++s)
      if (!(mask >> owner[s] & 1u)) keep.push_back(s);
    if (keep.empty()) {
      total += std::norm(x.data().trace());
    } else {
      total += partial_trace(x.data(), x.dims(), keep).squaredNorm();
    }
  }
  return std::sqrt(total);
}

double one_locc_value(const Matrix& x, int dim_a, int dim_b, const Povm& b_measurement) {
  require(b_measurement.dim() == dim_b, ErrorKind::DimensionMismatch, "measurement acts on the wrong dimension");
  double v = 0;
  for (const Matrix& m : b_measurement.elements())
    v += trace_norm(hermitian_part(contract_system(x, {dim_a, dim_b}, 1, m)));
  return v;
}

namespace {

// Renormalises nonnegative operators summing to roughly I into an exact POVM.
Povm normalise(std::vector<Matrix> el, int d) {
  Matrix s = Matrix::Zero(d, d);
  for (auto& m : el) {
    m = psd_projection(m);
    s += m;
  }
  const Matrix r = spectral_map(s, [](double v) { return v > 1e-300 ? 1.0 / std::sqrt(v) : 0.0; });
  for (auto& m : el) m = hermitian_part(r * m * r);
  return Povm(d, std::move(el), Tolerances{1e-9, 1e-9, 1e-9, 1e-7});
}

struct SeeSaw {
  const Matrix& x;
  int a, b, outcomes;
  std::vector<CVector> fixed;  // IC and random directions
  std::vector<Matrix> hbasis;

  double run(Povm povm, int iters) const {
    double best = one_locc_value(x, a, b, povm);
    for (int it = 0; it < iters; ++it) {
      // A step: Z_k = sign(X_k), then the B-side weights Y_k = tr_A((Z_k (x) I) X).
      std::vector<Matrix> y;
      for (const Matrix& m : povm.elements()) {
        const Matrix xk = hermitian_part(contract_system(x, {a, b}, 1, m));
        const Matrix z = spectral_map(xk, [](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
        y.push_back(hermitian_part(contract_system(x, {a, b}, 0, z)));
      }
      // Frame: fixed directions, eigenvectors of each Y_k, of each Y_j - Y_k
      // and of each current M_k.
      std::vector<CVector> frame = fixed;
      auto add_eigenvectors = [&](const Matrix& h) {
        const auto e = eigh(h);
        for (int i = 0; i < b; ++i) frame.push_back(e.vectors.col(i));
      };
      for (int k = 0; k < outcomes; ++k) {
        add_eigenvectors(y[k]);
        add_eigenvectors(povm.element(k));
        for (int j = 0; j < k; ++j) add_eigenvectors(y[j] - y[k]);
      }
      const int f = static_cast<int>(frame.size());
      std::vector<Matrix> proj(f);
      for (int i = 0; i < f; ++i) proj[i] = frame[i] * frame[i].adjoint();
      LpBuilder lp;
      const int base = lp.add_variables(outcomes * f);
      for (int k = 0; k < outcomes; ++k)
        for (int i = 0; i < f; ++i) lp.set_objective(base + k * f + i, inner(proj[i], y[k]));
      for (const Matrix& h : hbasis) {
        std::vector<std::pair<int, double>> terms;
        for (int k = 0; k < outcomes; ++k)
          for (int i = 0; i < f; ++i) terms.push_back({base + k * f + i, inner(h, proj[i])});
        lp.add_row(terms, LpBuilder::Sense::Eq, h.trace().real());
      }
      const LpSolution sol = lp.solve();
      if (sol.status != LpStatus::Optimal) break;
      std::vector<Matrix> el(outcomes, Matrix::Zero(b, b));
      for (int k = 0; k < outcomes; ++k)
        for (int i = 0; i < f; ++i) el[k] += std::max(0.0, sol.x(base + k * f + i)) * proj[i];
      Povm next = normalise(std::move(el), b);
      const double v = one_locc_value(x, a, b, next);
      const bool improved = v > best + 1e-12;
      if (v > best) {
        best = v;
        povm = next;
      }
      if (!improved) break;
    }
    last = povm;
    return best;
  }
  mutable Povm last;
};

}  // namespace

LoccBound one_locc_lower_bound(const HermitianOp& x, int restarts, int iters, std::uint64_t seed) {
  require(x.num_systems() == 2, ErrorKind::DimensionMismatch, "one-way LOCC norm needs a bipartite operator");
  require(restarts >= 1 && iters >= 0, ErrorKind::InvalidInput, "restarts must be >= 1 and iters >= 0");
  const int a = x.dims()[0], b = x.dims()[1];
  const int outcomes = std::max(2, b * b);
  Rng rng(seed);
  SeeSaw s{x.data(), a, b, outcomes, {}, hermitian_basis(b), {}};
  if (b >= 2) {
    const Povm ic = informationally_complete_povm(b);
    for (const Matrix& e : ic.elements()) {
      const auto ed = eigh(e);
      s.fixed.push_back(ed.vectors.col(b - 1));
    }
  } else {
    s.fixed.push_back(CVector::Ones(1));
  }
  for (int i = 0; i < 2 * b * b; ++i) s.fixed.push_back(random_unit_vector(b, rng));

  LoccBound out;
  out.value = -1;
  for (int r = 0; r < restarts; ++r) {
    Povm start;
    if (r == 0) {
      std::vector<Matrix> el(outcomes, Matrix::Zero(b, b));
      for (int i = 0; i < b; ++i) el[i % outcomes](i, i) = 1.0;
      start = Povm(b, std::move(el));
    } else if (r % 2) {
      // Random orthonormal basis, padded with zero outcomes.
      const Matrix u = random_unitary(b, rng);
      std::vector<Matrix> el(outcomes, Matrix::Zero(b, b));
      for (int i = 0; i < b; ++i) el[i % outcomes] += u.col(i) * u.col(i).adjoint();
      start = Povm(b, std::move(el));
    } else {
      start = Povm(b, random_povm_elements(b, outcomes, rng));
    }
    const double v = s.run(start, iters);
    if (v > out.value) {
      out.value = v;
      out.measurement = s.last;
    }
  }
  return out;
}

}  // namespace definetti
