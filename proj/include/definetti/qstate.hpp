#pragma once

#include <optional>
#include <vector>

#include "definetti/types.hpp"

namespace definetti {

class HermitianOp {
 public:
  HermitianOp() = default;
  // Rejects non-square data, dims mismatch or |X - X^dag| > herm_tol.
  HermitianOp(Dims dims, const Matrix& data, const Tolerances& tol = {});
  // Skips validation; the stored matrix is the Hermitian part of data.
  static HermitianOp trusted(Dims dims, const Matrix& data);

  const Dims& dims() const { return dims_; }
  const Matrix& data() const { return data_; }
  Eigen::Index dim() const { return data_.rows(); }
  int num_systems() const { return static_cast<int>(dims_.size()); }

 private:
  Dims dims_;
  Matrix data_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  // Rejects data that is not Hermitian, PSD and unit trace within tolerance.
  DensityMatrix(Dims dims, const Matrix& data, const Tolerances& tol = {});
  static DensityMatrix trusted(Dims dims, const Matrix& data);
  static DensityMatrix maximally_mixed(Dims dims);
  static DensityMatrix pure(Dims dims, const CVector& psi);
  // PSD part of h renormalised to unit trace.
  static DensityMatrix nearest(Dims dims, const Matrix& h);

  const Dims& dims() const { return dims_; }
  const Matrix& data() const { return data_; }
  Eigen::Index dim() const { return data_.rows(); }
  int num_systems() const { return static_cast<int>(dims_.size()); }
  HermitianOp op() const { return HermitianOp::trusted(dims_, data_); }

 private:
  Dims dims_;
  Matrix data_;
};

class Povm {
 public:
  Povm() = default;
  // Elements must be PSD and sum to the identity within povm_tol.
  Povm(int dim, std::vector<Matrix> elements, const Tolerances& tol = {});
  static Povm computational(int dim);
  static Povm from_basis(const Matrix& unitary);  // projectors onto columns

  int dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const std::vector<Matrix>& elements() const { return elements_; }
  const Matrix& element(int k) const { return elements_[k]; }

 private:
  int dim_ = 0;
  std::vector<Matrix> elements_;
};

// X -> sum_k tr(M_k X) |k><k|.
class QcChannel {
 public:
  QcChannel() = default;
  explicit QcChannel(Povm povm) : povm_(std::move(povm)) {}
  const Povm& povm() const { return povm_; }
  int in_dim() const { return povm_.dim(); }
  int out_dim() const { return povm_.outcomes(); }
  Matrix apply(const Matrix& x) const;

 private:
  Povm povm_;
};

struct Ensemble {
  std::vector<double> weights;
  std::vector<DensityMatrix> states;
  std::vector<Indices> outcomes;  // measurement record per member, if any

  std::size_t size() const { return weights.size(); }
  Matrix average() const;
  void validate(double tol = 1e-9) const;
};

// Unnormalised post-measurement operator on the unmeasured subsystems.
struct Branch {
  Indices outcome;  // one entry per measured subsystem, in the order given
  double probability = 0.0;
  Matrix op;
};

HermitianOp tensor(const HermitianOp& a, const HermitianOp& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// keep is an index set; the result lists kept subsystems in ascending order.
HermitianOp partial_trace(const HermitianOp& x, Indices keep);
DensityMatrix partial_trace(const DensityMatrix& x, Indices keep);

// Output subsystem i is input subsystem perm[i].
HermitianOp permute_systems(const HermitianOp& x, const Indices& perm);
DensityMatrix permute_systems(const DensityMatrix& x, const Indices& perm);

// Replaces subsystem `on` by a classical register of dimension ch.out_dim().
HermitianOp apply_qc_channel(const HermitianOp& x, const QcChannel& ch, int on);
DensityMatrix apply_qc_channel(const DensityMatrix& x, const QcChannel& ch, int on);

// Measures each listed subsystem with ch. Branches with probability below the
// drop threshold are discarded only if drop_negligible is set.
std::vector<Branch> measure_subsystems(const Matrix& x, const Dims& dims, const QcChannel& ch,
                                       const Indices& on, bool drop_negligible = true);

// Conditional states of the unmeasured subsystems, renormalised after dropping
// negligible outcomes.
Ensemble conditional_states(const DensityMatrix& x, const QcChannel& ch, const Indices& on);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);  // ||a-b||_1
double trace_norm(const HermitianOp& x);

// Projector onto the symmetric subspace of (C^d)^{(x)k}.
HermitianOp symmetric_subspace_projector(int d, int k);
// Orthonormal basis of the symmetric subspace as columns (d^k x C(d+k-1,k)).
Matrix symmetric_subspace_isometry(int d, int k);

}  // namespace definetti
