// Seeded random matrices for property tests and the validation suite.
#pragma once

#include "qtraj/numerics.hpp"
#include "qtraj/states.hpp"

#include <cstdint>
#include <random>

namespace qtraj {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t splitmix64(std::uint64_t x);

Matrix ginibre(int d, Rng& rng);
// Haar-distributed unitary (QR of a Ginibre matrix with the R-phase fixed).
Matrix random_unitary(int d, Rng& rng);
// G G^dagger / tr, full rank with probability one; eigenvalues kept above floor.
DensityMatrix random_density(int d, Rng& rng, double floor = 1e-3);
DensityMatrix random_pure(int d, Rng& rng);
// Levels drawn uniformly from [-1, 1].
HamiltonianSpec random_hamiltonian(int d, Rng& rng);

}  // namespace qtraj
