#include "qtraj/states.hpp"

#include "qtraj/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qtraj {

namespace {

constexpr double kSupportCutoff = 1e-14;
constexpr double kSupportWeight = 1e-12;
constexpr double kBlochSlack = 1e-12;

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* who) {
    if (a != b) {
        std::ostringstream os;
        os << who << ": dimensions " << a << " and " << b << " differ";
        fail(ErrorKind::DimensionMismatch, os.str());
    }
}

void require_temperature(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        std::ostringstream os;
        os << "temperature must be positive and finite, got " << t;
        fail(ErrorKind::NonpositiveTemperature, os.str());
    }
}

double xlogx(double x) { return x > tol::negligible_eigenvalue ? x * std::log(x) : 0.0; }

}  // namespace

HamiltonianSpec::HamiltonianSpec(RealVector l) : levels(std::move(l)) {
    require(levels.size() >= 1, ErrorKind::DimensionError, "Hamiltonian needs at least one level");
    require(levels.allFinite(), ErrorKind::InvalidArgument, "Hamiltonian levels must be finite");
}

Matrix HamiltonianSpec::matrix() const { return levels.cast<Complex>().asDiagonal(); }

HamiltonianSpec HamiltonianSpec::qubit(double omega) {
    RealVector l(2);
    l << -omega / 2.0, omega / 2.0;
    return HamiltonianSpec(l);
}

HamiltonianSpec HamiltonianSpec::uniform(int d, double omega) {
    require(d >= 1, ErrorKind::DimensionError, "dimension must be positive");
    RealVector l(d);
    for (int k = 0; k < d; ++k) l(k) = omega * (k - (d - 1) / 2.0);
    return HamiltonianSpec(l);
}

DensityMatrix::DensityMatrix(const Matrix& m) {
    const Validation v = validate(m, MatrixKind::density);
    if (!v) fail(ErrorKind::InvalidDensity, v.diagnostic);
    matrix_ = 0.5 * (m + m.adjoint());
    eig_ = hermitian_eig(matrix_);
    degenerate_ = eig_.degenerate();
}

RealVector DensityMatrix::populations() const { return matrix_.diagonal().real(); }

DensityMatrix DensityMatrix::diagonal(const RealVector& probs) {
    return DensityMatrix(Matrix(probs.cast<Complex>().asDiagonal()));
}

DensityMatrix DensityMatrix::from_spectrum(const RealVector& probs, const Matrix& vectors) {
    require(vectors.cols() == probs.size() && vectors.rows() == probs.size(),
            ErrorKind::DimensionMismatch, "spectrum and eigenvectors disagree in size");
    return DensityMatrix(vectors * probs.cast<Complex>().asDiagonal() * vectors.adjoint());
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    const double n = psi.norm();
    require(n > 0.0, ErrorKind::InvalidDensity, "zero state vector");
    return DensityMatrix(projector(psi / n));
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
    require(d >= 1, ErrorKind::DimensionError, "dimension must be positive");
    return DensityMatrix(Matrix(Matrix::Identity(d, d) / static_cast<double>(d)));
}

Vector qubit_angle_vector(double theta, bool upper) {
    Vector v(2);
    if (upper)
        v << std::sin(theta / 2.0), std::cos(theta / 2.0);
    else
        v << std::cos(theta / 2.0), -std::sin(theta / 2.0);
    return v;
}

DensityMatrix DensityMatrix::qubit_angle_state(double p, double theta) {
    if (!(std::abs(theta) <= std::numbers::pi / 2.0 + 1e-15)) {
        std::ostringstream os;
        os << "qubit angle " << theta << " outside [-pi/2, pi/2]";
        fail(ErrorKind::ThetaOutOfRange, os.str());
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream os;
        os << "mixing probability " << p << " outside [0, 1]";
        fail(ErrorKind::MixingOutOfRange, os.str());
    }
    const Vector lo = qubit_angle_vector(theta, false);
    const Vector hi = qubit_angle_vector(theta, true);
    return DensityMatrix(p * projector(lo) + (1.0 - p) * projector(hi));
}

Configuration::Configuration(DensityMatrix s, HamiltonianSpec h, double t)
    : state(std::move(s)), hamiltonian(std::move(h)), temperature(t) {
    require_same_dim(state.dim(), hamiltonian.dim(), "Configuration");
    require_temperature(temperature);
}

RealVector thermal_populations(const HamiltonianSpec& h, double temperature) {
    require_temperature(temperature);
    const double emin = h.levels.minCoeff();
    RealVector w = (-(h.levels.array() - emin) / temperature).exp().matrix();
    return w / w.sum();
}

DensityMatrix thermal_state(const HamiltonianSpec& h, double temperature) {
    return DensityMatrix::diagonal(thermal_populations(h, temperature));
}

DensityMatrix decohere(const DensityMatrix& rho, const HamiltonianSpec& h) {
    require_same_dim(rho.dim(), h.dim(), "decohere");
    return DensityMatrix::diagonal(rho.populations());
}

double shannon_entropy(const RealVector& probs) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) s -= xlogx(probs(i));
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return std::max(0.0, shannon_entropy(rho.eig().values));
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    require_same_dim(rho.dim(), sigma.dim(), "relative_entropy");
    const EigenSystem& es = sigma.eig();
    double cross = 0.0;
    for (Eigen::Index j = 0; j < es.dim(); ++j) {
        const Vector vj = es.vectors.col(j);
        const double weight = vj.dot(rho.matrix() * vj).real();
        if (es.values(j) < kSupportCutoff) {
            if (weight > kSupportWeight) return std::numeric_limits<double>::infinity();
            continue;
        }
        cross += weight * std::log(es.values(j));
    }
    return -von_neumann_entropy(rho) - cross;
}

PythagoreanSplit pythagorean_split(const DensityMatrix& rho_tilde, const HamiltonianSpec& h,
                                   double temperature) {
    const DensityMatrix tau = thermal_state(h, temperature);
    const DensityMatrix eta = decohere(rho_tilde, h);
    return {relative_entropy(rho_tilde, tau), relative_entropy(rho_tilde, eta),
            relative_entropy(eta, tau)};
}

double energy(const HamiltonianSpec& h, const DensityMatrix& rho) {
    require_same_dim(rho.dim(), h.dim(), "energy");
    return h.levels.dot(rho.populations());
}

double energy(const HamiltonianSpec& h, const Vector& psi) {
    require_same_dim(psi.size(), h.dim(), "energy");
    return h.levels.dot(psi.cwiseAbs2()) / psi.squaredNorm();
}

double free_energy(const Configuration& c) {
    return energy(c.hamiltonian, c.state) - c.temperature * von_neumann_entropy(c.state);
}

namespace {
double variance_of(const RealVector& levels, const RealVector& weights) {
    const double m1 = levels.dot(weights);
    const double m2 = levels.cwiseAbs2().dot(weights);
    return std::max(0.0, m2 - m1 * m1);
}
}  // namespace

double observable_variance(const HamiltonianSpec& h, const DensityMatrix& rho) {
    require_same_dim(rho.dim(), h.dim(), "observable_variance");
    return variance_of(h.levels, rho.populations());
}

double observable_variance(const HamiltonianSpec& h, const Vector& psi) {
    require_same_dim(psi.size(), h.dim(), "observable_variance");
    return variance_of(h.levels, psi.cwiseAbs2() / psi.squaredNorm());
}

double skew_information(const HamiltonianSpec& h, const DensityMatrix& rho, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream os;
        os << "alpha " << alpha << " outside (0, 1)";
        fail(ErrorKind::AlphaOutOfRange, os.str());
    }
    require_same_dim(rho.dim(), h.dim(), "skew_information");
    const Matrix hm = h.matrix();
    const Matrix ra = matrix_function(rho.eig(), [alpha](double x) { return std::pow(x, alpha); },
                                      Positivity::lenient);
    const Matrix rb = matrix_function(
        rho.eig(), [alpha](double x) { return std::pow(x, 1.0 - alpha); }, Positivity::lenient);
    const double first = h.levels.cwiseAbs2().dot(rho.populations());
    const double second = (hm * ra * hm * rb).trace().real();
    return std::max(0.0, first - second);
}

CoherenceValue coherence_measure(const DensityMatrix& rho, const HamiltonianSpec& h) {
    require_same_dim(rho.dim(), h.dim(), "coherence_measure");
    const EigenSystem& es = rho.eig();
    // The complete mixture has no preferred basis; its coherence is zero by continuity.
    if (es.values.maxCoeff() - es.values.minCoeff() <= tol::degenerate) return {0.0, true};
    const double value = es.vectors.cwiseAbs2().minCoeff();
    return {value, rho.degenerate()};
}

double nonthermality(double q1, double r) {
    if (!(r > kSupportCutoff)) {
        std::ostringstream os;
        os << "ground population " << r << " is zero";
        fail(ErrorKind::InfiniteNonthermality, os.str());
    }
    return std::log(q1 / r);
}

double nonthermality_measure(const DensityMatrix& rho, const HamiltonianSpec& h, double temperature) {
    if (rho.dim() != 2 || h.dim() != 2) fail(ErrorKind::DimensionError, "nonthermality is defined for qubits");
    const double q1 = thermal_populations(h, temperature)(0);
    return nonthermality(q1, rho.populations()(0));
}

Matrix pauli(int k) {
    Matrix s(2, 2);
    const Complex i(0.0, 1.0);
    switch (k) {
        case 1: s << 0.0, 1.0, 1.0, 0.0; break;
        case 2: s << 0.0, i, -i, 0.0; break;
        case 3: s << -1.0, 0.0, 0.0, 1.0; break;
        default: s = Matrix::Identity(2, 2); break;
    }
    return s;
}

Eigen::Vector3d bloch_vector(const DensityMatrix& rho) {
    if (rho.dim() != 2) fail(ErrorKind::DimensionError, "Bloch vector requires a qubit");
    Eigen::Vector3d n;
    for (int k = 1; k <= 3; ++k) n(k - 1) = (rho.matrix() * pauli(k)).trace().real();
    return n;
}

DensityMatrix from_bloch(const Eigen::Vector3d& n) {
    if (!(n.norm() <= 1.0 + kBlochSlack)) {
        std::ostringstream os;
        os << "Bloch vector norm " << n.norm() << " exceeds 1";
        fail(ErrorKind::BlochNormExceeded, os.str());
    }
    Matrix m = Matrix::Identity(2, 2);
    for (int k = 1; k <= 3; ++k) m += n(k - 1) * pauli(k);
    return DensityMatrix(0.5 * m);
}

double bloch_coherence(const Eigen::Vector3d& n) {
    const double norm = n.norm();
    if (norm <= tol::degenerate) return 0.0;
    return 0.5 * (1.0 - std::abs(n(2)) / norm);
}

}  // namespace qtraj
