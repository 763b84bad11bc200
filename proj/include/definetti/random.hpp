#pragma once

#include <cstdint>
#include <random>

#include "definetti/types.hpp"

namespace definetti {

using Rng = std::mt19937_64;

// Deterministic child seed for a named sub-stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

CVector random_unit_vector(int d, Rng& rng);
Matrix random_unitary(int d, Rng& rng);  // Haar
Matrix random_hermitian(int d, Rng& rng);  // GUE-like, unit scale
// Ginibre-induced density matrix of the given rank (rank <= 0 means full).
Matrix random_density(int d, Rng& rng, int rank = 0);
Matrix random_pure_density(int d, Rng& rng);
// Random POVM with the given number of outcomes, elements S^{-1/2} G_k S^{-1/2}.
std::vector<Matrix> random_povm_elements(int d, int outcomes, Rng& rng);
std::vector<double> random_probability_vector(int n, Rng& rng);

}  // namespace definetti
