// channels.hpp: the quantum channels used by the trajectory framework
#pragma once

#include "qtraj/numerics.hpp"
#include "qtraj/states.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qtraj {

using Channel = std::function<DensityMatrix(const DensityMatrix&)>;

// Lambda(rho) = tau for every rho.
DensityMatrix full_thermalization(const DensityMatrix& rho, const HamiltonianSpec& h, double temperature);
// Off-diagonal entries in the energy basis decay as exp(-t).
DensityMatrix dephasing_semigroup(const DensityMatrix& rho, const HamiltonianSpec& h, double t);
// (1 - mu) rho + mu I/d
DensityMatrix depolarize(const DensityMatrix& rho, double mu);

struct FourierFamily {
    int dim;
    Matrix F;  // F_{kl} = exp(2 pi i k l / d) / sqrt(d)
    Matrix G;  // principal log of F
    UnitarySpectrum spectrum;
};

FourierFamily fourier_unitary_family(int d);
// exp(Theta G), Theta in [0, 1]
Matrix interpolated_unitary(const FourierFamily& fam, double theta);

struct StochasticMatrix {
    RealMatrix entries;

    Eigen::Index dim() const { return entries.rows(); }
    double stochasticity_residual() const;  // max row/column sum deviation from 1
    double symmetry_residual() const;
};

StochasticMatrix transition_matrix(const Matrix& u);

// |theta~| = 2 arcsin(sin(Theta pi/2)/sqrt 2)
double theta_tilde_from_Theta(double theta);

struct CovarianceResult {
    bool covariant;
    double max_residual;
};

CovarianceResult covariance_check(const Channel& channel, const HamiltonianSpec& h, int samples,
                                  std::uint64_t seed);

struct ZRotation {
    double weight;
    double phase;  // U = exp(i phase sigma_3)
};

// lambda * (unitary part) + (1 - lambda) * (q1 T1 + q2 T2 + q3 T3), where
// T1 -> (I + sigma_3)/2, T2 -> (I - sigma_3)/2, T3(rho) = (I - n_3 sigma_3)/2.
// With haar set, the unitary part is the Haar average over z rotations, i.e. full dephasing.
struct CovariantQubitChannel {
    double lambda;
    std::vector<ZRotation> rotations;
    bool haar{false};
    double q1{0.0}, q2{0.0}, q3{1.0};

    void check() const;
    DensityMatrix apply(const DensityMatrix& rho) const;
    // |sum_j p_j exp(2 i phi_j)|^2, zero in the Haar case
    double delta() const;
};

struct CoherenceCertificate {
    double beta_sq;
    double delta;
    double v;
    bool verdict;     // beta^2 >= delta
    double coh_in;
    double coh_out;
};

CoherenceCertificate coh_monotonicity_certificate(const CovariantQubitChannel& ch,
                                                  const DensityMatrix& rho);

}  // namespace qtraj
