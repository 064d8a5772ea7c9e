#include "qtraj/channels.hpp"

#include "qtraj/error.hpp"
#include "qtraj/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qtraj {

namespace {

constexpr double kCovarianceTolerance = 1e-10;
constexpr double kWeightSlack = 1e-12;

Matrix time_evolution(const HamiltonianSpec& h, double t) {
    Vector d(h.dim());
    for (Eigen::Index k = 0; k < h.dim(); ++k) d(k) = std::polar(1.0, -t * h.levels(k));
    return d.asDiagonal();
}

Matrix z_rotation(double phase) {
    // exp(i phase sigma_3) with sigma_3 = diag(-1, 1)
    Matrix u = Matrix::Zero(2, 2);
    u(0, 0) = std::polar(1.0, -phase);
    u(1, 1) = std::polar(1.0, phase);
    return u;
}

}  // namespace

DensityMatrix full_thermalization(const DensityMatrix& rho, const HamiltonianSpec& h, double temperature) {
    require(rho.dim() == h.dim(), ErrorKind::DimensionMismatch, "full_thermalization: dimensions differ");
    return thermal_state(h, temperature);
}

DensityMatrix dephasing_semigroup(const DensityMatrix& rho, const HamiltonianSpec& h, double t) {
    if (!(t >= 0.0)) {
        std::ostringstream os;
        os << "dephasing time " << t << " is negative";
        fail(ErrorKind::NegativeTime, os.str());
    }
    require(rho.dim() == h.dim(), ErrorKind::DimensionMismatch, "dephasing_semigroup: dimensions differ");
    const double decay = std::exp(-t);
    Matrix m = rho.matrix() * decay;
    m.diagonal() = rho.matrix().diagonal();
    return DensityMatrix(m);
}

DensityMatrix depolarize(const DensityMatrix& rho, double mu) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
        std::ostringstream os;
        os << "depolarizing weight " << mu << " outside [0, 1]";
        fail(ErrorKind::MixingOutOfRange, os.str());
    }
    const Eigen::Index d = rho.dim();
    return DensityMatrix((1.0 - mu) * rho.matrix() + mu * Matrix::Identity(d, d) / static_cast<double>(d));
}

FourierFamily fourier_unitary_family(int d) {
    require(d >= 2, ErrorKind::DimensionError, "Fourier family needs d >= 2");
    FourierFamily fam;
    fam.dim = d;
    fam.F.resize(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            // Reduce the exponent mod d before scaling to keep the entries exact.
            const int e = (k * l) % d;
            fam.F(k, l) = std::polar(norm, 2.0 * std::numbers::pi * e / d);
        }
    fam.spectrum = unitary_spectrum(fam.F);
    const Vector diag = fam.spectrum.phases.cast<Complex>() * Complex(0.0, 1.0);
    fam.G = fam.spectrum.vectors * diag.asDiagonal() * fam.spectrum.vectors.adjoint();
    return fam;
}

Matrix interpolated_unitary(const FourierFamily& fam, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        std::ostringstream os;
        os << "Theta " << theta << " outside [0, 1]";
        fail(ErrorKind::ThetaOutOfRange, os.str());
    }
    Vector d(fam.dim);
    for (int k = 0; k < fam.dim; ++k) d(k) = std::polar(1.0, theta * fam.spectrum.phases(k));
    return fam.spectrum.vectors * d.asDiagonal() * fam.spectrum.vectors.adjoint();
}

double StochasticMatrix::stochasticity_residual() const {
    const double rows = (entries.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double cols = (entries.colwise().sum().array() - 1.0).abs().maxCoeff();
    return std::max(rows, cols);
}

double StochasticMatrix::symmetry_residual() const {
    return (entries - entries.transpose()).cwiseAbs().maxCoeff();
}

StochasticMatrix transition_matrix(const Matrix& u) {
    require(u.rows() == u.cols(), ErrorKind::DimensionMismatch, "transition_matrix: not square");
    const double res = unitarity_residual(u);
    if (res > tol::unitary) {
        std::ostringstream os;
        os << "max |U^dagger U - I| = " << res;
        fail(ErrorKind::NonUnitaryInput, os.str());
    }
    return StochasticMatrix{u.cwiseAbs2()};
}

double theta_tilde_from_Theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
        std::ostringstream os;
        os << "Theta " << theta << " outside [0, 1]";
        fail(ErrorKind::ThetaOutOfRange, os.str());
    }
    const double s = std::sin(theta * std::numbers::pi / 2.0) / std::sqrt(2.0);
    return 2.0 * std::asin(std::min(1.0, s));
}

CovarianceResult covariance_check(const Channel& channel, const HamiltonianSpec& h, int samples,
                                  std::uint64_t seed) {
    require(samples >= 1, ErrorKind::InvalidArgument, "covariance_check needs at least one sample");
    Rng rng(seed);
    const int d = static_cast<int>(h.dim());
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const DensityMatrix rho = random_density(d, rng);
        const double t = 10.0 * uniform01(rng);
        const Matrix ut = time_evolution(h, t);
        const Matrix lhs = channel(DensityMatrix(ut * rho.matrix() * ut.adjoint())).matrix();
        const Matrix rhs = ut * channel(rho).matrix() * ut.adjoint();
        worst = std::max(worst, max_abs(lhs - rhs));
    }
    return {worst <= kCovarianceTolerance, worst};
}

void CovariantQubitChannel::check() const {
    require(lambda >= 0.0 && lambda <= 1.0, ErrorKind::MixingOutOfRange, "lambda outside [0, 1]");
    require(q1 >= 0.0 && q2 >= 0.0 && q3 >= 0.0 && std::abs(q1 + q2 + q3 - 1.0) <= kWeightSlack,
            ErrorKind::InvalidArgument, "nonunitary weights must be a probability vector");
    if (!haar) {
        double total = 0.0;
        for (const auto& r : rotations) {
            require(r.weight >= 0.0, ErrorKind::InvalidArgument, "negative rotation weight");
            total += r.weight;
        }
        require(!rotations.empty() && std::abs(total - 1.0) <= kWeightSlack, ErrorKind::InvalidArgument,
                "rotation weights must sum to 1");
    }
}

double CovariantQubitChannel::delta() const {
    if (haar) return 0.0;
    Complex z = 0.0;
    for (const auto& r : rotations) z += r.weight * std::polar(1.0, 2.0 * r.phase);
    return std::norm(z);
}

DensityMatrix CovariantQubitChannel::apply(const DensityMatrix& rho) const {
    check();
    require(rho.dim() == 2, ErrorKind::DimensionError, "covariant qubit channel acts on qubits");
    Matrix unitary_part = Matrix::Zero(2, 2);
    if (haar) {
        unitary_part = decohere(rho, HamiltonianSpec::qubit(1.0)).matrix();
    } else {
        for (const auto& r : rotations) {
            const Matrix u = z_rotation(r.phase);
            unitary_part += r.weight * u * rho.matrix() * u.adjoint();
        }
    }
    const double n3 = bloch_vector(rho)(2);
    const Matrix id = Matrix::Identity(2, 2);
    const Matrix s3 = pauli(3);
    const Matrix nonunitary = q1 * 0.5 * (id + s3) + q2 * 0.5 * (id - s3) + q3 * 0.5 * (id - n3 * s3);
    return DensityMatrix(lambda * unitary_part + (1.0 - lambda) * nonunitary);
}

CoherenceCertificate coh_monotonicity_certificate(const CovariantQubitChannel& ch, const DensityMatrix& rho) {
    if (rho.dim() != 2) fail(ErrorKind::DimensionError, "certificate is defined for qubits");
    ch.check();
    const Eigen::Vector3d n = bloch_vector(rho);
    const double n3 = n(2);
    CoherenceCertificate c{};
    c.v = ch.q1 - ch.q2 - ch.q3 * n3;
    c.delta = ch.delta();
    if (ch.lambda == 0.0) {
        // Output is diagonal, so its coherence vanishes.
        c.beta_sq = std::numeric_limits<double>::infinity();
        c.verdict = true;
    } else if (n3 == 0.0) {
        c.beta_sq = c.v == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        c.verdict = c.beta_sq >= c.delta;
    } else {
        const double beta = 1.0 + ((1.0 - ch.lambda) / ch.lambda) * (c.v / n3);
        c.beta_sq = beta * beta;
        c.verdict = c.beta_sq >= c.delta;
    }
    c.coh_in = bloch_coherence(n);
    c.coh_out = bloch_coherence(bloch_vector(ch.apply(rho)));
    return c;
}

}  // namespace qtraj
