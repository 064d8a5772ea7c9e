// protocol.hpp: the five-step work extraction protocol
//
//   I   rho -> rho~ = V rho V^dagger           (Hamiltonian H0)
//   II  quench H0 -> H1
//   III full thermalization to tau_1
//   IV  quenches H1 -> H2 -> ... -> HN, each followed by thermalization, with tau_N = eta
//   V   quench HN -> H0
//
// A full trajectory is (l, n_0, ..., n_N): n_0 is the energy record after
// decoherence and n_i the record after the i-th thermalization.

#pragma once

#include "qtraj/numerics.hpp"
#include "qtraj/states.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace qtraj {

inline constexpr std::uint64_t kDefaultEnsembleCap = 10'000'000;

struct ProtocolSpec {
    DensityMatrix rho;
    HamiltonianSpec H0;
    double temperature;
    DensityMatrix rho_tilde;
    HamiltonianSpec H1;
    int steps;        // N
    bool analytic;    // quasistatic limit N -> infinity for Step IV averages
    // Thermal populations and Hamiltonians of H^(1) ... H^(N); index 0 is H1.
    std::vector<HamiltonianSpec> path;
    std::vector<RealVector> populations;

    const RealVector& eta_populations() const { return populations.back(); }
};

// Populations follow log q^(i) = (1 - s) log q^(1) + s log r, s = (i-1)/(N-1),
// renormalized; energies E^(i) = -T log q^(i) with sum_k E_k^(i) = 0.
// Returns H^(2) ... H^(N); empty for N = 1 (which then requires tau_1 = eta).
std::vector<HamiltonianSpec> quasistatic_path(const RealVector& tau1, const RealVector& eta, int steps,
                                              double temperature);

ProtocolSpec plan_protocol(const DensityMatrix& rho, const HamiltonianSpec& H0, double temperature,
                           const DensityMatrix& rho_tilde, const HamiltonianSpec& H1, int steps,
                           bool analytic = false);

// Qubit convenience: rho = rho_theta(p), rho~ = rho_theta~(p), H0 = qubit(omega0),
// H1 the qubit Hamiltonian whose thermal ground population at T is q1.
ProtocolSpec plan_qubit_protocol(double p, double theta, double theta_tilde, double q1, double temperature,
                                 double omega0, int steps, bool analytic = false);

// Qubit gap with thermal ground population q1 at temperature T.
double qubit_gap_for_population(double q1, double temperature);

struct ProtocolRecord {
    int l;
    std::vector<int> n;  // n_0 ... n_N
    double probability;
    double s_qu, s_cl, s_step4;
    double delta_U, q_heat, cl_heat, cl_heat_step4;

    double s_irr() const { return s_qu + s_cl + s_step4; }
    double work() const { return delta_U + q_heat + cl_heat + cl_heat_step4; }
};

// Visits every record in (l, n_0, ..., n_N) order. Throws EnsembleTooLarge when
// d^(N+2) exceeds cap.
void for_each_protocol_record(const ProtocolSpec& spec, const std::function<void(const ProtocolRecord&)>& visit,
                              std::uint64_t cap = kDefaultEnsembleCap);
std::vector<ProtocolRecord> full_trajectory_ensemble(const ProtocolSpec& spec,
                                                     std::uint64_t cap = kDefaultEnsembleCap);
double stochastic_work(const ProtocolRecord& rec);

struct ProtocolAverages {
    double total_probability;
    double avg_s_qu, avg_s_cl, avg_s_step4;
    double avg_W_ext;
    double avg_delta_U;
    double avg_Q_qu;
    double fluctuation_sum;  // sum P exp(-s_irr)
};

ProtocolAverages enumerate_protocol(const ProtocolSpec& spec, std::uint64_t cap = kDefaultEnsembleCap);

struct ProtocolReport {
    double delta_F_prot;
    double avg_W_ext;
    double avg_s_qu, avg_s_cl, avg_s_step4;
    double delta_S_qu, delta_S_cl, delta_S_step4, delta_S_prot;
    double avg_Q_cl_step3, avg_Q_cl_step4;
    double Q_diss;  // T <s_cl>, the heat dissipated in Step III
    double W_irr;   // T <s_irr> over the whole protocol
    double footprint_residual;
    bool degenerate;
};

ProtocolReport report(const ProtocolSpec& spec);

// Classical relative entropy of population vectors.
double population_relative_entropy(const RealVector& a, const RealVector& b);

}  // namespace qtraj
