#include "qtraj/channels.hpp"
#include "qtraj/error.hpp"
#include "qtraj/random.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

using namespace qtraj;

namespace {
constexpr double pi = std::numbers::pi;

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no exception thrown");
    return ErrorKind::InvalidArgument;
}
}  // namespace

TEST_CASE("full thermalization") {
    const HamiltonianSpec h = HamiltonianSpec::qubit(1.0);
    const double t = 1.0 / std::log(0.85 / 0.15);
    Rng rng(31);
    const DensityMatrix out = full_thermalization(random_density(2, rng), h, t);
    CHECK(std::abs(out.matrix()(0, 0) - 0.85) <= 1e-13);
    CHECK(std::abs(out.matrix()(0, 1)) == 0.0);
    const DensityMatrix tau = thermal_state(h, t);
    CHECK(max_abs(full_thermalization(tau, h, t).matrix() - tau.matrix()) <= 1e-15);
    const HamiltonianSpec h3 = HamiltonianSpec::uniform(3, 1.0);
    CHECK(full_thermalization(random_density(3, rng), h3, 1.0).populations().isApprox(thermal_populations(h3, 1.0)));
}

TEST_CASE("dephasing semigroup") {
    const HamiltonianSpec h = HamiltonianSpec::qubit(1.0);
    const DensityMatrix rho = DensityMatrix::qubit_angle_state(0.9, pi / 3);
    CHECK(max_abs(dephasing_semigroup(rho, h, 0.0).matrix() - rho.matrix()) == 0.0);
    CHECK(max_abs(dephasing_semigroup(rho, h, 50.0).matrix() - decohere(rho, h).matrix()) <= 1e-12);
    const DensityMatrix one = dephasing_semigroup(rho, h, 1.0);
    CHECK(std::abs(one.matrix()(0, 1) - rho.matrix()(0, 1) * std::exp(-1.0)) <= 1e-15);
    CHECK(one.matrix()(0, 0) == rho.matrix()(0, 0));
    CHECK(kind_of([&] { dephasing_semigroup(rho, h, -0.1); }) == ErrorKind::NegativeTime);
}

TEST_CASE("depolarize") {
    Rng rng(32);
    const DensityMatrix rho = random_density(2, rng);
    CHECK(max_abs(depolarize(rho, 0.0).matrix() - rho.matrix()) == 0.0);
    CHECK(max_abs(depolarize(rho, 1.0).matrix() - Matrix::Identity(2, 2) / 2.0) <= 1e-15);
    const Eigen::Vector3d n = bloch_vector(rho);
    const Eigen::Vector3d m = bloch_vector(depolarize(rho, 0.3));
    CHECK((m - 0.7 * n).norm() <= 1e-14);
    CHECK(kind_of([&] { depolarize(rho, 1.1); }) == ErrorKind::MixingOutOfRange);
}

TEST_CASE("Fourier family") {
    const FourierFamily f2 = fourier_unitary_family(2);
    Matrix ref(2, 2);
    ref << 1, 1, 1, -1;
    ref /= std::sqrt(2.0);
    CHECK(max_abs(f2.F - ref) <= 1e-15);
    for (int d = 2; d <= 6; ++d) {
        const FourierFamily f = fourier_unitary_family(d);
        CHECK((f.F.cwiseAbs2().array() - 1.0 / d).abs().maxCoeff() <= 1e-14);
        CHECK(max_abs(interpolated_unitary(f, 0.0) - Matrix::Identity(d, d)) <= 1e-12);
        CHECK(max_abs(interpolated_unitary(f, 1.0) - f.F) <= 1e-10);
        // U(a) U(b) = U(a + b)
        CHECK(max_abs(interpolated_unitary(f, 0.3) * interpolated_unitary(f, 0.4) - interpolated_unitary(f, 0.7)) <=
              1e-10);
        // agrees with Eigen's matrix exponential of the generator
        const Matrix e = (0.37 * f.G).exp();
        CHECK(max_abs(e - interpolated_unitary(f, 0.37)) <= 1e-10);
    }
    const Matrix u = interpolated_unitary(f2, 0.5);
    CHECK(std::norm(u(0, 1)) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(kind_of([&] { interpolated_unitary(f2, 1.5); }) == ErrorKind::ThetaOutOfRange);
}

TEST_CASE("transition matrix") {
    const StochasticMatrix id = transition_matrix(Matrix::Identity(3, 3));
    CHECK((id.entries - RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    const StochasticMatrix f = transition_matrix(fourier_unitary_family(3).F);
    CHECK((f.entries.array() - 1.0 / 3.0).abs().maxCoeff() <= 1e-14);
    CHECK(kind_of([] { transition_matrix(2.0 * Matrix::Identity(2, 2)); }) == ErrorKind::NonUnitaryInput);

    Rng rng(33);
    for (int i = 0; i < 100; ++i) {
        const int d = 2 + i % 5;
        const StochasticMatrix m = transition_matrix(random_unitary(d, rng));
        CHECK(m.stochasticity_residual() <= 1e-12);
        CHECK((m.entries.array() >= 0.0).all());
    }
    // d = 2 interpolation is symmetric with off-diagonal sin^2(Theta pi/2)/2
    const FourierFamily f2 = fourier_unitary_family(2);
    for (double th : {0.1, 0.4, 0.8}) {
        const StochasticMatrix m = transition_matrix(interpolated_unitary(f2, th));
        CHECK(m.symmetry_residual() <= 1e-12);
        CHECK(std::abs(m.entries(0, 1) - 0.5 * std::pow(std::sin(th * pi / 2), 2)) <= 1e-12);
    }
}

TEST_CASE("theta tilde from Theta") {
    CHECK(theta_tilde_from_Theta(0.0) == 0.0);
    CHECK(theta_tilde_from_Theta(1.0) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(theta_tilde_from_Theta(0.5) == doctest::Approx(pi / 3).epsilon(1e-14));
}

TEST_CASE("covariance check") {
    const HamiltonianSpec h = HamiltonianSpec::qubit(1.0);
    const Channel deph = [&](const DensityMatrix& r) { return dephasing_semigroup(r, h, 0.7); };
    const Channel depol = [](const DensityMatrix& r) { return depolarize(r, 0.4); };
    CHECK(covariance_check(deph, h, 50, 1).covariant);
    CHECK(covariance_check(depol, h, 50, 2).covariant);
    Rng rng(34);
    const Matrix u = random_unitary(2, rng);
    const Channel conj = [&](const DensityMatrix& r) { return DensityMatrix(u * r.matrix() * u.adjoint()); };
    const CovarianceResult bad = covariance_check(conj, h, 50, 3);
    CHECK_FALSE(bad.covariant);
    CHECK(bad.max_residual > 1e-6);
}

TEST_CASE("covariant qubit channel") {
    Rng rng(35);
    CovariantQubitChannel haar{1.0, {}, true};
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix rho = random_density(2, rng);
        const CoherenceCertificate c = coh_monotonicity_certificate(haar, rho);
        CHECK(c.coh_out == 0.0);
        CHECK(c.coh_out <= c.coh_in);
    }

    CovariantQubitChannel depol{0.6, {{1.0, 0.3}}, false, 0.5, 0.5, 0.0};
    for (int i = 0; i < 20; ++i) {
        const CoherenceCertificate c = coh_monotonicity_certificate(depol, random_density(2, rng));
        CHECK(c.v == 0.0);
        CHECK(c.beta_sq == doctest::Approx(1.0));
        CHECK(c.verdict);
        CHECK(c.coh_out <= c.coh_in + 1e-12);
    }

    CovariantQubitChannel bad_weights{0.5, {{0.5, 0.1}}, false};
    CHECK(kind_of([&] { bad_weights.check(); }) == ErrorKind::InvalidArgument);
    CovariantQubitChannel bad_lambda{1.5, {{1.0, 0.1}}, false};
    CHECK(kind_of([&] { bad_lambda.check(); }) == ErrorKind::MixingOutOfRange);
}

TEST_CASE("coherence certificate is sound on seeded channels") {
    Rng rng(36);
    int positive = 0;
    for (int i = 0; i < 500; ++i) {
        CovariantQubitChannel ch;
        ch.lambda = uniform01(rng);
        const double w = uniform01(rng);
        ch.rotations = {{w, 2 * pi * uniform01(rng)}, {1.0 - w, 2 * pi * uniform01(rng)}};
        double a = uniform01(rng), b = uniform01(rng), c = uniform01(rng);
        const double s = a + b + c;
        ch.q1 = a / s;
        ch.q2 = b / s;
        ch.q3 = 1.0 - ch.q1 - ch.q2;
        const CoherenceCertificate cert = coh_monotonicity_certificate(ch, random_density(2, rng));
        if (cert.verdict) {
            ++positive;
            CHECK(cert.coh_out <= cert.coh_in + 1e-12);
        }
    }
    CHECK(positive > 0);
}
