#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "definetti/budget.hpp"
#include "definetti/qstate.hpp"
#include "definetti/random.hpp"

namespace definetti {

// Two-outcome effects E_i with observed outcomes b_i in {0, 1}.
struct TrainingSet {
  std::vector<Matrix> effects;
  std::vector<int> outcomes;

  std::size_t size() const { return effects.size(); }
  // Throws unless every effect is d x d Hermitian with 0 <= E <= I within tol
  // and every outcome is 0 or 1.
  void validate(int dim, double psd_tol = 1e-9) const;
};

// sum_i (tr(E_i sigma) - b_i)^2
double training_loss(const TrainingSet& t, const Matrix& sigma);

struct FitOptions {
  int restarts = 5;
  double fit_tol = 1e-6;
  long max_iter = 20000;
};

struct FitResult {
  DensityMatrix state;
  double loss = 0.0;
  // Frank-Wolfe gap at the output; the loss is within this of the minimum.
  double gap = 0.0;
  long iterations = 0;
  std::vector<double> loss_trace;  // per accepted step of the returned run
};

// Least-squares hypothesis state by projected gradient descent over density
// matrices (Armijo backtracking, factor 0.5), best over restarts. The first
// run starts at I/d; the others at random states drawn from rng. An empty
// training set gives I/d.
FitResult fit_hypothesis_state(const TrainingSet& t, int dim, Rng& rng, const FitOptions& opts = {});

// Outcome 1 with probability tr(E rho).
int sample_outcome(const Matrix& effect, const Matrix& rho, Rng& rng);

enum class EffectFamily {
  RandomRank1,     // |psi><psi| with psi Haar random
  RandomEffect,    // U diag(u) U^dag, U Haar, u_j uniform on [0, 1]
  PauliProjector,  // (I + s P) / 2 on one qubit-sized Pauli axis, uniform
};
std::string to_string(EffectFamily f);
EffectFamily effect_family_from_string(const std::string& s);

struct EffectDistribution {
  EffectFamily family = EffectFamily::RandomRank1;
  int dim = 2;
  Matrix sample(Rng& rng) const;
};

// Mixture of i.i.d. powers sum_j w_j rho_j^{(x) N}, for any N.
struct IidMixture {
  std::vector<double> weights;
  std::vector<Matrix> states;
  int dim() const;
  void validate() const;
};

// Either an explicit permutation-symmetric state on H^{(x) (m+n+k)} or a
// mixture of i.i.d. powers.
using SymmetricSource = std::variant<DensityMatrix, IidMixture>;

struct TomographyParams {
  int m = 0;  // measured systems
  int n = 0;  // held-out systems
  int k = 0;  // discarded systems
  double gamma = 0.2;
  double eps = 0.1;
  double delta = 0.1;
  int test_samples = 2000;  // fresh effects for the deviation estimate
  FitOptions fit;
};

struct TomographyReport {
  TomographyParams params;
  int dim = 0;
  std::vector<int> permutation;  // output system i was input system permutation[i]
  TrainingSet training;
  std::optional<FitResult> fit;  // absent when m = 0
  // Held-out state as a mixture of i.i.d. components: posterior weights and
  // states. For an explicit input this is the single-site marginal of the
  // conditional state on the n held-out systems.
  std::vector<double> branch_weights;
  std::vector<Matrix> branch_states;
  std::vector<double> branch_rates;  // Pr_E[|tr(E rho_j) - tr(E sigma)| > gamma]
  // sum_j w_j * rate_j, present when m >= 1 and n >= 1.
  std::optional<double> deviation_rate;
  // Fixed-channel check: ||Z^{(x) n}(held-out - sum_j w_j rho_j^{(x) n})||_1
  // with Z the computational-basis measurement; zero for mixture inputs.
  std::optional<double> fixed_channel_distance;
  double m_schedule = 0.0;   // training-set size with K = 1
  double nu_implied = 0.0;   // sqrt(4 (m+n)^2 ln|H| / k), infinite when k = 0
};

// (1 / (g^4 e^2)) ((ln|H| / (g^4 e^2)) ln^2(1 / (g e)) + ln(1 / delta)), the
// training-set size with the unspecified constant set to 1.
double learning_schedule(int dim, double gamma, double eps, double delta);
double learning_nu(int dim, int m, int n, int k);

// Permutes the systems at random, discards k, measures the first m with
// effects drawn from M, fits the hypothesis state and estimates its
// deviation rate against the held-out conditionals with fresh effects.
TomographyReport definetti_tomography_run(const SymmetricSource& source, const EffectDistribution& dist,
                                          const TomographyParams& params, Rng& rng,
                                          const Budget& budget = Budget::from_environment());

}  // namespace definetti
