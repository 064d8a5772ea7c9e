#include "qtraj/error.hpp"
#include "qtraj/numerics.hpp"
#include "qtraj/random.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

using namespace qtraj;

namespace {
Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

double orthonormality(const Matrix& v) {
    return max_abs(v.adjoint() * v - Matrix::Identity(v.cols(), v.cols()));
}
}  // namespace

TEST_CASE("hermitian_eig on Pauli x") {
    const EigenSystem es = hermitian_eig(pauli_x());
    CHECK(es.values(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(es.values(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(orthonormality(es.vectors) <= 1e-12);
    // first component real and positive
    for (int i = 0; i < 2; ++i) {
        CHECK(es.vectors(0, i).real() > 0.0);
        CHECK(es.vectors(0, i).imag() == 0.0);
    }
    CHECK(max_abs(es.reconstruct() - pauli_x()) <= 1e-12);
}

TEST_CASE("hermitian_eig on the identity") {
    const EigenSystem es = hermitian_eig(Matrix::Identity(3, 3));
    for (int i = 0; i < 3; ++i) CHECK(es.values(i) == doctest::Approx(1.0));
    CHECK(orthonormality(es.vectors) <= 1e-12);
    CHECK(es.degenerate());
}

TEST_CASE("hermitian_eig agrees with Eigen's solver on random matrices") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + trial % 8;
        const Matrix g = ginibre(d, rng);
        const Matrix a = g + g.adjoint();
        const EigenSystem es = hermitian_eig(a);
        CHECK(max_abs(a - es.reconstruct()) <= 1e-10);
        CHECK(orthonormality(es.vectors) <= 1e-12);
        for (int i = 1; i < d; ++i) CHECK(es.values(i) >= es.values(i - 1));
        Eigen::SelfAdjointEigenSolver<Matrix> ref(a);
        CHECK((ref.eigenvalues() - es.values).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("hermitian_eig is deterministic inside degenerate clusters") {
    Rng rng(11);
    const Matrix u = random_unitary(4, rng);
    RealVector lam(4);
    lam << 0.1, 0.3, 0.3, 0.3;
    const Matrix a = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
    const EigenSystem first = hermitian_eig(a);
    const EigenSystem second = hermitian_eig(a);
    CHECK(max_abs(first.vectors - second.vectors) == 0.0);
    CHECK(first.degenerate());
    CHECK(max_abs(a - first.reconstruct()) <= 1e-10);
    for (int i = 0; i < 4; ++i) {
        Eigen::Index k = 0;
        while (std::abs(first.vectors(k, i)) <= 1e-10) ++k;
        CHECK(first.vectors(k, i).imag() == 0.0);
        CHECK(first.vectors(k, i).real() > 0.0);
    }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    Matrix a(2, 2);
    a << 0, 1, 0, 0;
    try {
        hermitian_eig(a);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonHermitianInput);
    }
    Matrix nearly = pauli_x();
    nearly(0, 1) += 5e-11;
    CHECK_NOTHROW(hermitian_eig(nearly));
}

TEST_CASE("matrix_function examples") {
    Matrix a = Matrix::Zero(2, 2);
    a(1, 1) = 1.0;
    const Matrix e = matrix_function(a, [](double x) { return std::exp(x); });
    CHECK(std::abs(e(0, 0) - 1.0) <= 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(1.0)) <= 1e-14);

    const Matrix half = 0.5 * Matrix::Identity(2, 2);
    const Matrix root = matrix_function(half, [](double x) { return std::sqrt(x); });
    CHECK(max_abs(root - Matrix::Identity(2, 2) / std::sqrt(2.0)) <= 1e-14);
}

TEST_CASE("matrix_function log round trips against Eigen's exponential") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + trial % 5;
        const Matrix g = ginibre(d, rng);
        const Matrix a = g * g.adjoint() + 0.1 * Matrix::Identity(d, d);
        const Matrix lg = matrix_function(a, [](double x) { return std::log(x); }, Positivity::strict);
        const Matrix back = lg.exp();
        CHECK(max_abs(back - a) <= 1e-10);
        CHECK(max_abs(matrix_function(a, [](double x) { return x; }) - a) <= 1e-12);
    }
}

TEST_CASE("matrix_function positivity modes") {
    Matrix a = Matrix::Zero(2, 2);
    a(1, 1) = 1.0;
    auto lg = [](double x) { return std::log(x); };
    try {
        matrix_function(a, lg, Positivity::strict);
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DomainError);
    }
    const Matrix lenient = matrix_function(a, [](double x) { return x * std::log(x); }, Positivity::lenient);
    CHECK(max_abs(lenient) <= 1e-15);
}

TEST_CASE("unitary_log_principal examples") {
    CHECK(max_abs(unitary_log_principal(Matrix::Identity(3, 3))) <= 1e-15);

    Matrix z = Matrix::Identity(2, 2);
    z(1, 1) = -1.0;
    const Matrix g = unitary_log_principal(z);
    CHECK(std::abs(g(0, 0)) <= 1e-15);
    CHECK(std::abs(g(1, 1) - Complex(0.0, std::numbers::pi)) <= 1e-15);

    Matrix f(2, 2);
    f << 1, 1, 1, -1;
    f /= std::sqrt(2.0);
    const UnitarySpectrum sp = unitary_spectrum(f);
    const double lo = sp.phases.minCoeff(), hi = sp.phases.maxCoeff();
    CHECK(std::abs(lo) <= 1e-12);
    CHECK(std::abs(hi - std::numbers::pi) <= 1e-12);
    const Matrix half = exp_skew_hermitian(0.5 * unitary_log_principal(f));
    CHECK(std::norm(half(0, 1)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("unitary log and exp round trip, and match Eigen's log") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + trial % 6;
        const Matrix u = random_unitary(d, rng);
        const Matrix g = unitary_log_principal(u);
        CHECK(max_abs(g + g.adjoint()) <= 1e-10);
        CHECK(max_abs(exp_skew_hermitian(g) - u) <= 1e-10);
        CHECK(max_abs(g.exp() - u) <= 1e-10);
        const Matrix ref = u.log();
        CHECK(max_abs(ref - g) <= 1e-8);
    }
}

TEST_CASE("unitary functions reject non-unitary input") {
    try {
        unitary_log_principal(2.0 * Matrix::Identity(2, 2));
        FAIL("expected NonUnitaryInput");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonUnitaryInput);
    }
}

TEST_CASE("validate") {
    CHECK(validate(Matrix::Identity(3, 3) / 3.0, MatrixKind::density).ok);
    const Validation px = validate(pauli_x(), MatrixKind::density);
    CHECK_FALSE(px.ok);
    CHECK(px.diagnostic.find("trace") != std::string::npos);
    CHECK(validate(pauli_x(), MatrixKind::hermitian).ok);
    CHECK(validate(pauli_x(), MatrixKind::unitary).ok);
    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        const Matrix g = ginibre(4, rng);
        Matrix rho = g * g.adjoint();
        rho /= rho.trace();
        CHECK(validate(rho, MatrixKind::density).ok);
    }
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.1;
    neg(1, 1) = -0.1;
    CHECK_FALSE(validate(neg, MatrixKind::density).ok);
    CHECK_FALSE(validate(Matrix::Zero(2, 3), MatrixKind::hermitian).ok);
}
