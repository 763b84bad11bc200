#pragma once

#include <cstddef>
#include <vector>

#include "definetti/types.hpp"

namespace definetti {

using IndexMap = std::vector<Eigen::Index>;

class Layout {
 public:
  explicit Layout(Dims dims);

  const Dims& dims() const { return dims_; }
  int size() const { return static_cast<int>(dims_.size()); }
  Eigen::Index total() const { return total_; }

  // Throws unless the systems are distinct and in range.
  void check_systems(const Indices& systems) const;
  Indices complement(const Indices& systems) const;
  Dims dims_of(const Indices& systems) const;
  Eigen::Index dim_of(const Indices& systems) const;

  // Full-space offset of every joint index of the listed systems, enumerated
  // row-major in the listed order.
  IndexMap offsets(const Indices& systems) const;

 private:
  Dims dims_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index total_ = 1;
};

// Reduced operator on `keep`, subsystems ordered as listed.
Matrix partial_trace(const Matrix& x, const Dims& dims, const Indices& keep);

// local (x) identity, with local acting on `systems` in the listed order.
Matrix embed(const Matrix& local, const Dims& dims, const Indices& systems);

// Output subsystem i is input subsystem perm[i]. map[out] = in.
IndexMap permutation_index_map(const Dims& dims, const Indices& perm);
Matrix permute_matrix(const Matrix& x, const Dims& dims, const Indices& perm);
Dims permute_dims(const Dims& dims, const Indices& perm);
void check_permutation(const Indices& perm, int n);

// tr_s[(m on s) x], an operator on the remaining subsystems.
Matrix contract_system(const Matrix& x, const Dims& dims, int s, const Matrix& m);

Eigen::Index product(const Dims& dims);

}  // namespace definetti
