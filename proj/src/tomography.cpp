#include "definetti/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "definetti/errors.hpp"
#include "definetti/linalg.hpp"
#include "definetti/subsystems.hpp"

namespace definetti {

void TrainingSet::validate(int dim, double psd_tol) const {
  require(effects.size() == outcomes.size(), ErrorKind::DimensionMismatch,
          "training set has different numbers of effects and outcomes");
  for (std::size_t i = 0; i < effects.size(); ++i) {
    const Matrix& e = effects[i];
    require(e.rows() == dim && e.cols() == dim, ErrorKind::DimensionMismatch, "effect has wrong size");
    require(hermiticity_residual(e) <= psd_tol, ErrorKind::InvalidInput, "effect is not Hermitian");
    const RVector ev = eigvalsh(hermitian_part(e));
    require(ev.minCoeff() >= -psd_tol && ev.maxCoeff() <= 1 + psd_tol, ErrorKind::InvalidInput,
            "effect is not between 0 and I");
    require(outcomes[i] == 0 || outcomes[i] == 1, ErrorKind::InvalidInput, "outcome must be 0 or 1");
  }
}

double training_loss(const TrainingSet& t, const Matrix& sigma) {
  double s = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = inner(t.effects[i], sigma) - t.outcomes[i];
    s += r * r;
  }
  return s;
}

namespace {

Matrix project_to_states(const Matrix& x) {
  const EigenDecomposition es = eigh(hermitian_part(x));
  const RVector p = project_to_simplex(es.values);
  return es.vectors * p.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

Matrix loss_gradient(const TrainingSet& t, const Matrix& sigma) {
  Matrix g = Matrix::Zero(sigma.rows(), sigma.cols());
  for (std::size_t i = 0; i < t.size(); ++i) g += 2 * (inner(t.effects[i], sigma) - t.outcomes[i]) * t.effects[i];
  return g;
}

// <g, sigma> - lambda_min(g) bounds loss(sigma) - min loss by convexity.
double frank_wolfe_gap(const Matrix& g, const Matrix& sigma) {
  return std::max(0.0, inner(g, sigma) - min_eigenvalue(hermitian_part(g)));
}

FitResult fit_from(const TrainingSet& t, int dim, Matrix sigma, const FitOptions& o) {
  FitResult out;
  double lip = 0;
  for (const Matrix& e : t.effects) lip += 2 * e.squaredNorm();
  double step = 1.0 / std::max(lip, 1e-12);
  double f = training_loss(t, sigma);
  out.loss_trace.push_back(f);
  Matrix g = loss_gradient(t, sigma);
  double gap = frank_wolfe_gap(g, sigma);
  long it = 0;
  while (gap > 0.1 * o.fit_tol && it < o.max_iter) {
    ++it;
    double s = 2 * step;
    Matrix cand;
    double fc = 0;
    while (true) {
      cand = project_to_states(sigma - s * g);
      fc = training_loss(t, cand);
      const Matrix d = cand - sigma;
      if (fc <= f + inner(g, d) + d.squaredNorm() / (2 * s) || s < 1e-16) break;
      s *= 0.5;
    }
    if (fc > f) break;  // no descent left at machine precision
    step = s;
    const bool stalled = (cand - sigma).norm() < 1e-15;
    sigma = cand;
    f = fc;
    out.loss_trace.push_back(f);
    g = loss_gradient(t, sigma);
    gap = frank_wolfe_gap(g, sigma);
    if (stalled) break;
  }
  out.state = DensityMatrix::nearest({dim}, sigma);
  out.loss = training_loss(t, out.state.data());
  out.gap = frank_wolfe_gap(loss_gradient(t, out.state.data()), out.state.data());
  out.iterations = it;
  return out;
}

}  // namespace

FitResult fit_hypothesis_state(const TrainingSet& t, int dim, Rng& rng, const FitOptions& opts) {
  require(dim >= 1, ErrorKind::InvalidInput, "dimension must be positive");
  require(opts.restarts >= 1 && opts.fit_tol > 0, ErrorKind::InvalidInput, "bad fit options");
  t.validate(dim);
  const Matrix mixed = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  if (t.size() == 0) {
    FitResult out;
    out.state = DensityMatrix::maximally_mixed({dim});
    out.loss_trace = {0.0};
    return out;
  }
  FitResult best = fit_from(t, dim, mixed, opts);
  for (int r = 1; r < opts.restarts; ++r) {
    FitResult cur = fit_from(t, dim, random_density(dim, rng), opts);
    if (cur.loss < best.loss) best = std::move(cur);
  }
  return best;
}

int sample_outcome(const Matrix& effect, const Matrix& rho, Rng& rng) {
  const double p = std::clamp(inner(effect, rho), 0.0, 1.0);
  return std::bernoulli_distribution(p)(rng) ? 1 : 0;
}

std::string to_string(EffectFamily f) {
  switch (f) {
    case EffectFamily::RandomRank1: return "random-rank1";
    case EffectFamily::RandomEffect: return "random-effect";
    case EffectFamily::PauliProjector: return "pauli";
  }
  return "unknown";
}

EffectFamily effect_family_from_string(const std::string& s) {
  for (EffectFamily f : {EffectFamily::RandomRank1, EffectFamily::RandomEffect, EffectFamily::PauliProjector})
    if (to_string(f) == s) return f;
  fail(ErrorKind::InvalidInput, "unknown effect family '" + s + "'");
}

Matrix EffectDistribution::sample(Rng& rng) const {
  switch (family) {
    case EffectFamily::RandomRank1: {
      const CVector v = random_unit_vector(dim, rng);
      return v * v.adjoint();
    }
    case EffectFamily::RandomEffect: {
      const Matrix u = random_unitary(dim, rng);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      CVector d(dim);
      for (int i = 0; i < dim; ++i) d(i) = unif(rng);
      return hermitian_part(u * d.asDiagonal() * u.adjoint());
    }
    case EffectFamily::PauliProjector: {
      require(dim == 2, ErrorKind::InvalidInput, "Pauli effects need a qubit");
      std::uniform_int_distribution<int> axis(0, 2), sign(0, 1);
      const int a = axis(rng);
      const double s = sign(rng) ? 1.0 : -1.0;
      Matrix p = Matrix::Zero(2, 2);
      if (a == 0) p << 0, 1, 1, 0;
      if (a == 1) p << 0, Complex(0, -1), Complex(0, 1), 0;
      if (a == 2) p << 1, 0, 0, -1;
      return (Matrix::Identity(2, 2) + s * p) / 2.0;
    }
  }
  fail(ErrorKind::InvalidInput, "unknown effect family");
}

int IidMixture::dim() const { return states.empty() ? 0 : static_cast<int>(states[0].rows()); }

void IidMixture::validate() const {
  require(!states.empty() && weights.size() == states.size(), ErrorKind::InvalidInput,
          "mixture needs one weight per state");
  double total = 0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    require(weights[j] >= 0, ErrorKind::InvalidInput, "mixture weights must be nonnegative");
    total += weights[j];
    require(states[j].rows() == dim(), ErrorKind::DimensionMismatch, "mixture states differ in size");
    DensityMatrix({dim()}, states[j]);
  }
  require(std::abs(total - 1) <= 1e-9, ErrorKind::InvalidInput, "mixture weights must sum to one");
}

double learning_schedule(int dim, double gamma, double eps, double delta) {
  require(dim >= 2 && gamma > 0 && eps > 0 && delta > 0 && delta < 1 && gamma * eps < 1, ErrorKind::InvalidInput,
          "need dim >= 2, gamma, eps > 0, gamma eps < 1 and 0 < delta < 1");
  const double ge = std::pow(gamma, 4) * eps * eps;
  const double l = std::log(1 / (gamma * eps));
  return (1 / ge) * (std::log(static_cast<double>(dim)) / ge * l * l + std::log(1 / delta));
}

double learning_nu(int dim, int m, int n, int k) {
  require(dim >= 1 && m >= 0 && n >= 0 && k >= 0, ErrorKind::InvalidInput, "counts must be nonnegative");
  if (k == 0) return std::numeric_limits<double>::infinity();
  const double mn = m + n;
  return std::sqrt(4 * mn * mn * std::log(static_cast<double>(dim)) / k);
}

namespace {

// Computational-basis distribution of the held-out state minus that of the
// reference mixture, in trace norm.
double fixed_channel_distance(const RVector& held_out_diag, const std::vector<double>& w,
                              const std::vector<Matrix>& states, int n, int dim) {
  const Eigen::Index size = held_out_diag.size();
  double s = 0;
  for (Eigen::Index idx = 0; idx < size; ++idx) {
    double ref = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      double p = w[j];
      Eigen::Index rest = idx;
      for (int t = 0; t < n; ++t) {
        p *= states[j](rest % dim, rest % dim).real();
        rest /= dim;
      }
      ref += p;
    }
    s += std::abs(held_out_diag(idx) - ref);
  }
  return s;
}

}  // namespace

TomographyReport definetti_tomography_run(const SymmetricSource& source, const EffectDistribution& dist,
                                          const TomographyParams& params, Rng& rng, const Budget& budget) {
  require(params.m >= 0 && params.n >= 0 && params.k >= 0, ErrorKind::InvalidInput,
          "m, n and k must be nonnegative");
  require(params.gamma > 0 && params.test_samples >= 1, ErrorKind::InvalidInput,
          "need gamma > 0 and at least one test sample");
  TomographyReport rep;
  rep.params = params;
  const int total = params.m + params.n + params.k;
  const bool explicit_state = std::holds_alternative<DensityMatrix>(source);
  int dim = 0;
  if (explicit_state) {
    const DensityMatrix& w = std::get<DensityMatrix>(source);
    require(w.num_systems() == total, ErrorKind::DimensionMismatch,
            "explicit state must have m + n + k systems");
    dim = w.dims()[0];
    for (int d : w.dims()) require(d == dim, ErrorKind::DimensionMismatch, "systems differ in dimension");
    budget.check_dim(static_cast<double>(w.dim()), "explicit symmetric state");
  } else {
    const IidMixture& mix = std::get<IidMixture>(source);
    mix.validate();
    dim = mix.dim();
  }
  require(dist.dim == dim, ErrorKind::DimensionMismatch, "effect distribution has the wrong dimension");
  rep.dim = dim;
  rep.m_schedule = dim >= 2 && params.gamma * params.eps < 1 && params.eps > 0 && params.delta > 0 &&
                           params.delta < 1
                       ? learning_schedule(dim, params.gamma, params.eps, params.delta)
                       : std::numeric_limits<double>::quiet_NaN();
  rep.nu_implied = learning_nu(dim, params.m, params.n, params.k);

  rep.permutation.resize(total);
  std::iota(rep.permutation.begin(), rep.permutation.end(), 0);
  std::shuffle(rep.permutation.begin(), rep.permutation.end(), rng);

  if (explicit_state) {
    const DensityMatrix& w = std::get<DensityMatrix>(source);
    Matrix cur = total > 0 ? permute_matrix(w.data(), w.dims(), rep.permutation) : w.data();
    Dims dims(total, dim);
    Indices keep(params.m + params.n);
    std::iota(keep.begin(), keep.end(), 0);
    if (params.k > 0) {
      cur = partial_trace(cur, dims, keep);
      dims.resize(keep.size());
    }
    const Matrix id = Matrix::Identity(dim, dim);
    for (int i = 0; i < params.m; ++i) {
      const Matrix e = dist.sample(rng);
      const Matrix on1 = contract_system(cur, dims, 0, e);
      const double p1 = std::clamp(on1.trace().real(), 0.0, 1.0);
      const int b = std::bernoulli_distribution(p1)(rng) ? 1 : 0;
      Matrix next = b ? on1 : contract_system(cur, dims, 0, id - e);
      const double p = next.trace().real();
      require(p > 0, ErrorKind::InvalidInput, "sampled a zero-probability outcome");
      cur = next / p;
      dims.erase(dims.begin());
      rep.training.effects.push_back(e);
      rep.training.outcomes.push_back(b);
    }
    if (params.n >= 1) {
      rep.branch_weights = {1.0};
      rep.branch_states = {hermitian_part(partial_trace(cur, dims, {0}))};
      if (params.n <= 12)
        rep.fixed_channel_distance =
            fixed_channel_distance(cur.diagonal().real(), rep.branch_weights, rep.branch_states, params.n, dim);
    }
  } else {
    const IidMixture& mix = std::get<IidMixture>(source);
    std::vector<double> w = mix.weights;
    for (int i = 0; i < params.m; ++i) {
      const Matrix e = dist.sample(rng);
      std::vector<double> p1(w.size());
      double p = 0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        p1[j] = std::clamp(inner(e, mix.states[j]), 0.0, 1.0);
        p += w[j] * p1[j];
      }
      const int b = std::bernoulli_distribution(std::clamp(p, 0.0, 1.0))(rng) ? 1 : 0;
      double norm = 0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] *= b ? p1[j] : 1 - p1[j];
        norm += w[j];
      }
      require(norm > 0, ErrorKind::InvalidInput, "sampled a zero-probability outcome");
      for (double& x : w) x /= norm;
      rep.training.effects.push_back(e);
      rep.training.outcomes.push_back(b);
    }
    if (params.n >= 1) {
      rep.branch_weights = w;
      rep.branch_states = mix.states;
      rep.fixed_channel_distance = 0.0;
    }
  }

  if (params.m == 0) return rep;
  rep.fit = fit_hypothesis_state(rep.training, dim, rng, params.fit);
  if (params.n == 0) return rep;

  const Matrix& sigma = rep.fit->state.data();
  rep.branch_rates.assign(rep.branch_states.size(), 0.0);
  for (int s = 0; s < params.test_samples; ++s) {
    const Matrix e = dist.sample(rng);
    const double fs = inner(e, sigma);
    for (std::size_t j = 0; j < rep.branch_states.size(); ++j)
      if (std::abs(inner(e, rep.branch_states[j]) - fs) > params.gamma) rep.branch_rates[j] += 1;
  }
  double rate = 0;
  for (std::size_t j = 0; j < rep.branch_rates.size(); ++j) {
    rep.branch_rates[j] /= params.test_samples;
    rate += rep.branch_weights[j] * rep.branch_rates[j];
  }
  rep.deviation_rate = rate;
  return rep;
}

}  // namespace definetti
