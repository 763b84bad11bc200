#pragma once

#include <functional>
#include <vector>

#include "definetti/types.hpp"

namespace definetti {

struct EigenDecomposition {
  RVector values;  // ascending
  Matrix vectors;  // columns are eigenvectors
};

// Spectral decomposition of a Hermitian matrix (upper triangle is read).
EigenDecomposition eigh(const Matrix& h);
RVector eigvalsh(const Matrix& h);

Matrix hermitian_part(const Matrix& m);
double hermiticity_residual(const Matrix& m);  // max |m - m^dag|

Matrix kron(const Matrix& a, const Matrix& b);

// Frobenius inner product Re tr(a^dag b).
double inner(const Matrix& a, const Matrix& b);

double trace_norm(const Matrix& h);
double min_eigenvalue(const Matrix& h);
double max_eigenvalue(const Matrix& h);

// Projection of a Hermitian matrix onto the PSD cone in Frobenius norm.
Matrix psd_projection(const Matrix& h);

// f applied to the spectrum of a Hermitian matrix.
Matrix spectral_map(const Matrix& h, const std::function<double(double)>& f);

// Euclidean projection of v onto {x >= 0, sum x = total}.
RVector project_to_simplex(const RVector& v, double total = 1.0);

// Frobenius-orthonormal basis of d x d Hermitian matrices (d^2 elements).
std::vector<Matrix> hermitian_basis(int d);

}  // namespace definetti
