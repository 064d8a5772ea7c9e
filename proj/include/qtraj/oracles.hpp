// oracles.hpp: closed-form qubit results and a brute-force enumerator.
//
// None of this calls into the trajectories module; the enumerator works on raw
// matrices so that it can be used to check that module.

#pragma once

#include "qtraj/numerics.hpp"

#include <vector>

namespace qtraj {

struct QubitParams {
    double p;
    double theta;
    double theta_tilde;
    double omega;
    double q1;

    void check() const;
    double coh() const;  // sin^2(theta~/2)
    double r() const;    // ground population of rho~
};

double qubit_var_qheat(const QubitParams& params);
double qubit_var_clheat(const QubitParams& params);
double qubit_var_clheat(double q1, double r, double omega);

struct MomentTable {
    int order;
    std::vector<double> q_heat;   // raw moments 1..order of Q_qu
    std::vector<double> cl_heat;  // raw moments 1..order of Q_cl
    double mean_q, var_q;
    double mean_cl, var_cl;
    double mean_s_qu, mean_s_cl;
    double total_probability;
};

// Explicit sums over (l, m, n). levels are the diagonal of H in the canonical basis.
// Throws DimensionTooLarge for d > 5.
MomentTable brute_force_moments(const Matrix& rho_tilde, const RealVector& levels, double temperature,
                                int order = 2);

}  // namespace qtraj
