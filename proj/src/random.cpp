#include "qtraj/random.hpp"

#include <cmath>
#include <numbers>

namespace qtraj {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {
// Box-Muller on our own uniform draws keeps the corpus platform independent.
double gaussian(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}
}  // namespace

Matrix ginibre(int d, Rng& rng) {
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Complex(gaussian(rng), gaussian(rng)) / std::sqrt(2.0);
    return g;
}

Matrix random_unitary(int d, Rng& rng) {
    const Matrix g = ginibre(d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < d; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) q.col(k) *= r(k, k) / mag;
    }
    return q;
}

DensityMatrix random_density(int d, Rng& rng, double floor) {
    const Matrix g = ginibre(d, rng);
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    // Mix in a little of the identity so that logs stay well conditioned.
    m = (1.0 - d * floor) * m + floor * Matrix::Identity(d, d);
    return DensityMatrix(m);
}

DensityMatrix random_pure(int d, Rng& rng) {
    Vector psi(d);
    for (int i = 0; i < d; ++i) psi(i) = Complex(gaussian(rng), gaussian(rng));
    return DensityMatrix::pure(psi);
}

HamiltonianSpec random_hamiltonian(int d, Rng& rng) {
    RealVector l(d);
    for (int i = 0; i < d; ++i) l(i) = 2.0 * uniform01(rng) - 1.0;
    return HamiltonianSpec(l);
}

}  // namespace qtraj
