#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace definetti {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Local dimensions of a tensor product space, first factor most significant.
using Dims = std::vector<int>;
using Indices = std::vector<int>;

struct Tolerances {
  double herm = 1e-9;
  double psd = 1e-9;
  double trace = 1e-9;
  double povm = 1e-9;
};

// Eigenvalues below this are treated as zero inside entropies.
inline constexpr double kEntropyCutoff = 1e-14;
// Eigenvalues of sigma above this define its support in relative entropy.
inline constexpr double kSupportCutoff = 1e-12;
// Off-diagonal tolerance for classical registers.
inline constexpr double kDiagTol = 1e-10;
// Outcomes with probability below this are dropped when conditioning.
inline constexpr double kDropProbability = 1e-14;

}  // namespace definetti
