#pragma once

#include <optional>
#include <vector>

#include "definetti/budget.hpp"
#include "definetti/qstate.hpp"

namespace definetti {

// sum_i w_i factors_i[0] (x) factors_i[1] (x) ...
struct ProductEnsemble {
  Dims dims;
  std::vector<double> weights;
  std::vector<std::vector<Matrix>> factors;

  std::size_t size() const { return weights.size(); }
  void add(double w, std::vector<Matrix> f);
  Matrix mixture() const;
};

// Distribution over maps E_m on A; an empty channel stands for the identity.
struct MeasurementFamily {
  std::vector<double> weights;
  std::vector<std::optional<QcChannel>> channels;
  int out_dim_a = 0;  // |A~|

  static MeasurementFamily identity(int dim_a);
  void validate(int dim_a) const;
};

struct RoundingResult {
  DensityMatrix sigma;
  ProductEnsemble ensemble;
  double achieved_error = 0.0;
  double guarantee = 0.0;
  bool guarantee_vacuous = false;  // guarantee above the trivial value 2
  int chosen_j = 0;                // 1-based B system left unmeasured
  std::vector<double> errors;      // per j (fixed-measurement rounding)
  std::vector<double> cmi;         // per j (trace-norm rounding)
  double cmi_bound = 0.0;          // |B| ln k / k (trace-norm rounding)
  Povm measurement;                // applied to B_1 .. B_{j-1}
};

// ext lives on A (x) B^{(x)k} with dims {a, b, ..., b}. For each j the
// systems B_1..B_{j-1} are measured with lambda; the conditional states give
// sigma_j = sum_i q_i rho_i^A (x) rho_i^{B_j}, scored by
// E_m ||(E_m (x) lambda)(rho - sigma_j)||_1 with rho = ext^{AB_1}. The best j
// is returned with guarantee sqrt(2 ln|A~| / k).
RoundingResult round_fixed_measurement(const DensityMatrix& ext, const QcChannel& lambda,
                                       const MeasurementFamily& fam, double sym_tol = 1e-7,
                                       const Budget& budget = Budget::from_environment());

// Rounding with an informationally complete measurement on B_1..B_{j-1},
// where j minimises the measured I(A : Y_j | Y_1 .. Y_{j-1}). The error is
// ||rho - sigma||_1 and the guarantee 6 |B|^2 sqrt(ln k / k). Needs k >= 2
// and the B systems supported on the symmetric subspace within support_tol.
RoundingResult round_trace_norm(const DensityMatrix& ext, double support_tol = 1e-7,
                                const Budget& budget = Budget::from_environment());

struct MultipartiteRounding {
  ProductEnsemble ensemble;  // l-fold products of conditional single-system marginals
  Matrix target;             // rho^{A_1 .. A_l}
  Dims dims;                 // l copies of the local dimension
  double benchmark = 0.0;    // sqrt(2 l^2 ln|A| / (k - l))

  // ||(id (x) L_2 (x) ... (x) L_l)(target - mixture)||_1; channels has l - 1
  // entries for systems 2..l, an empty entry meaning identity.
  double error(const std::vector<std::optional<QcChannel>>& channels) const;
};

// rho_sym on A^{(x)k}, permutation invariant within sym_tol; systems l+1..k
// are measured with e.
MultipartiteRounding multipartite_round(const DensityMatrix& rho_sym, int l, const QcChannel& e,
                                        double sym_tol = 1e-7,
                                        const Budget& budget = Budget::from_environment());

// sqrt(2 ln|A~| / k).
double fixed_measurement_guarantee(int out_dim_a, int k);
// 6 |B|^2 sqrt(ln k / k).
double trace_norm_guarantee(int dim_b, int k);

// Max-abs change of x under transposing adjacent systems among `systems`.
double permutation_residual(const Matrix& x, const Dims& dims, const Indices& systems);

}  // namespace definetti
