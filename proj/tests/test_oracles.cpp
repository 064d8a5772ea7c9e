#include "qtraj/error.hpp"
#include "qtraj/oracles.hpp"
#include "qtraj/states.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qtraj;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("qubit closed forms") {
    const QubitParams a{0.95, 0.0, pi / 3, 1.0, 0.85};
    CHECK(a.coh() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(a.r() == doctest::Approx(0.725).epsilon(1e-15));
    CHECK(qubit_var_qheat(a) == doctest::Approx(0.1875).epsilon(1e-15));
    CHECK(qubit_var_clheat(0.2, 0.3, 1.0) == doctest::Approx(0.37).epsilon(1e-15));
    CHECK(qubit_var_clheat(0.85, 0.85, 1.0) == doctest::Approx(0.255).epsilon(1e-15));
}

TEST_CASE("closed forms agree with brute-force sums") {
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
            const double p = 0.52 + 0.048 * i;  // p = 1/2 has no preferred eigenbasis
            const double tt = -pi / 2 + pi * j / 10;
            const double q1 = 0.6 + 0.03 * i;
            const double omega = 0.5 + 0.1 * j;
            const QubitParams par{p, 0.0, tt, omega, q1};
            const DensityMatrix rho = DensityMatrix::qubit_angle_state(p, tt);
            RealVector levels(2);
            levels << -omega / 2, omega / 2;
            const double t = omega / std::log(q1 / (1 - q1));
            const MomentTable m = brute_force_moments(rho.matrix(), levels, t, 2);
            CHECK(std::abs(m.var_q - qubit_var_qheat(par)) <= 1e-12);
            CHECK(std::abs(m.var_cl - qubit_var_clheat(par)) <= 1e-12);
            CHECK(std::abs(m.mean_q) <= 1e-12);
            CHECK(std::abs(m.total_probability - 1.0) <= 1e-12);
        }
}

TEST_CASE("quantum heat variance does not depend on p") {
    const double base = qubit_var_qheat({0.5, 0.0, 0.7, 1.0, 0.8});
    for (double p : {0.6, 0.75, 0.9, 1.0}) CHECK(std::abs(qubit_var_qheat({p, 0.0, 0.7, 1.0, 0.8}) - base) <= 1e-15);
}

TEST_CASE("oracle argument checks") {
    CHECK_THROWS_AS(QubitParams({1.2, 0.0, 0.1, 1.0, 0.5}).check(), Error);
    CHECK_THROWS_AS(QubitParams({0.8, 0.0, 2.0, 1.0, 0.5}).check(), Error);
    const Matrix rho = Matrix::Identity(6, 6) / 6.0;
    try {
        brute_force_moments(rho, RealVector::LinSpaced(6, 0.0, 1.0), 1.0);
        FAIL("expected DimensionTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionTooLarge);
    }
}
