// states.hpp: density matrices, Hamiltonians and the entropic/energetic functionals
//
// Units: hbar = k_B = 1, energies in units of the first qubit gap, entropies in nats.
// Hamiltonians are diagonal in the fixed canonical basis {|e_k>}; for a qubit
// index 0 is |e_-> (energy -omega/2) and index 1 is |e_+>.

#pragma once

#include "qtraj/numerics.hpp"

#include <Eigen/Dense>

namespace qtraj {

struct HamiltonianSpec {
    RealVector levels;  // E_k paired with |e_k>; not necessarily sorted

    HamiltonianSpec() = default;
    explicit HamiltonianSpec(RealVector levels);

    Eigen::Index dim() const { return levels.size(); }
    Matrix matrix() const;

    // levels (-omega/2, +omega/2)
    static HamiltonianSpec qubit(double omega);
    // d levels spaced by omega and centred on zero
    static HamiltonianSpec uniform(int d, double omega);
};

class DensityMatrix {
public:
    // Throws InvalidDensity when validate(m, density) fails.
    explicit DensityMatrix(const Matrix& m);

    const Matrix& matrix() const { return matrix_; }
    const EigenSystem& eig() const { return eig_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    bool degenerate() const { return degenerate_; }
    // Diagonal entries in the canonical basis.
    RealVector populations() const;

    static DensityMatrix diagonal(const RealVector& probs);
    // sum_l probs(l) |v_l><v_l| for orthonormal columns v_l
    static DensityMatrix from_spectrum(const RealVector& probs, const Matrix& vectors);
    static DensityMatrix pure(const Vector& psi);
    static DensityMatrix maximally_mixed(int d);
    // p Pi[theta_-] + (1-p) Pi[theta_+] with |theta_-> = (cos(theta/2), -sin(theta/2)),
    // |theta_+> = (sin(theta/2), cos(theta/2)); theta in [-pi/2, pi/2], p in [0, 1].
    static DensityMatrix qubit_angle_state(double p, double theta);

private:
    Matrix matrix_;
    EigenSystem eig_;
    bool degenerate_{false};
};

struct Configuration {
    DensityMatrix state;
    HamiltonianSpec hamiltonian;
    double temperature;

    Configuration(DensityMatrix state, HamiltonianSpec hamiltonian, double temperature);
};

Vector qubit_angle_vector(double theta, bool upper);

RealVector thermal_populations(const HamiltonianSpec& h, double temperature);
DensityMatrix thermal_state(const HamiltonianSpec& h, double temperature);
DensityMatrix decohere(const DensityMatrix& rho, const HamiltonianSpec& h);

double shannon_entropy(const RealVector& probs);
double von_neumann_entropy(const DensityMatrix& rho);
// +infinity when supp(rho) is not contained in supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

struct PythagoreanSplit {
    double total;      // D[rho~ || tau]
    double quantum;    // D[rho~ || eta~]
    double classical;  // D[eta~ || tau]
};

PythagoreanSplit pythagorean_split(const DensityMatrix& rho_tilde, const HamiltonianSpec& h,
                                   double temperature);

double energy(const HamiltonianSpec& h, const DensityMatrix& rho);
double energy(const HamiltonianSpec& h, const Vector& psi);
double free_energy(const Configuration& config);
// tr[H^2 rho] - tr[H rho]^2, clamped at zero.
double observable_variance(const HamiltonianSpec& h, const DensityMatrix& rho);
double observable_variance(const HamiltonianSpec& h, const Vector& psi);
double skew_information(const HamiltonianSpec& h, const DensityMatrix& rho, double alpha);

struct CoherenceValue {
    double value;
    bool degenerate;  // eigenbasis of rho was not unique; value uses the solver basis
};

CoherenceValue coherence_measure(const DensityMatrix& rho, const HamiltonianSpec& h);

// log(q1 / r) for a qubit, q1 and r the ground populations of tau and rho.
double nonthermality_measure(const DensityMatrix& rho, const HamiltonianSpec& h, double temperature);
double nonthermality(double q1, double r);

// Qubit Bloch representation rho = (I + n.sigma)/2 in the (|e_->, |e_+>) ordering,
// where sigma_3 = diag(-1, 1).
Eigen::Vector3d bloch_vector(const DensityMatrix& rho);
DensityMatrix from_bloch(const Eigen::Vector3d& n);
// (1 - |n_3|/|n|)/2, with the complete mixture mapped to 0.
double bloch_coherence(const Eigen::Vector3d& n);

Matrix pauli(int k);

}  // namespace qtraj
