// numerics.hpp: dense complex linear algebra for small Hermitian and unitary matrices
//
// Everything here works on Eigen's dynamic complex matrices. The Hermitian
// eigensolver is a cyclic complex Jacobi iteration with a deterministic
// ordering and phase convention, so that downstream labels (eigenstates,
// trajectory indices, CSV rows) are reproducible bit for bit.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>

namespace qtraj {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double unitary = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double min_eigenvalue = -1e-12;
inline constexpr double degenerate = 1e-10;
// Eigenvalues below this are treated as exact zeros (0 log 0 = 0).
inline constexpr double negligible_eigenvalue = 1e-15;
}  // namespace tol

struct EigenSystem {
    RealVector values;  // ascending
    Matrix vectors;     // column i pairs with values(i)

    Eigen::Index dim() const { return values.size(); }
    // True when two eigenvalues lie within tol::degenerate of each other.
    bool degenerate() const;
    Matrix reconstruct() const;
};

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Eigenvalues are returned in ascending order. Each eigenvector is rescaled by
/// a global phase so that its first non-negligible component is real and
/// positive; vectors inside a degenerate cluster are ordered by descending
/// lexicographic (real, imaginary) comparison of their components.
/// Throws NonHermitianInput when max|A - A^dagger| exceeds tol::hermitian.
EigenSystem hermitian_eig(const Matrix& a);

enum class Positivity {
    none,     // f is evaluated on every eigenvalue
    strict,   // DomainError if an eigenvalue is <= tol::negligible_eigenvalue
    lenient,  // eigenvalues <= tol::negligible_eigenvalue contribute nothing
};

Matrix matrix_function(const EigenSystem& eig, const std::function<double(double)>& f,
                       Positivity positivity = Positivity::none);
Matrix matrix_function(const Matrix& a, const std::function<double(double)>& f,
                       Positivity positivity = Positivity::none);

// Spectral data of a unitary: U = V diag(exp(i phases)) V^dagger, phases in (-pi, pi].
struct UnitarySpectrum {
    RealVector phases;
    Matrix vectors;
};

UnitarySpectrum unitary_spectrum(const Matrix& u);

/// Principal logarithm of a unitary. The result G is skew-Hermitian with
/// eigenphases in (-pi, pi]; an eigenvalue of exactly -1 maps to +i*pi.
Matrix unitary_log_principal(const Matrix& u);

/// exp(G) for skew-Hermitian G, computed through the Hermitian solver on -iG.
Matrix exp_skew_hermitian(const Matrix& g);

enum class MatrixKind { hermitian, unitary, density };

struct Validation {
    bool ok{false};
    double residual{0.0};
    std::string diagnostic;

    explicit operator bool() const { return ok; }
};

Validation validate(const Matrix& a, MatrixKind kind);

double max_abs(const Matrix& a);
double hermiticity_residual(const Matrix& a);
double unitarity_residual(const Matrix& a);
Matrix projector(const Vector& psi);

}  // namespace qtraj
