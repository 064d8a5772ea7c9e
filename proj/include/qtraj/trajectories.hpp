// trajectories.hpp: Step III trajectory ensembles (decoherence followed by full thermalization)
//
// An augmented trajectory (l, m, n) starts in the eigenstate |psi_l> of rho~, is
// projected onto the energy eigenstate |e_m> and then thermalized to |e_n>:
//
//   P(l, m, n) = p_l |<e_m|psi_l>|^2 q_n
//   Q_qu = E_m - <psi_l|H|psi_l>,   Q_cl = E_n - E_m
//   s_qu = log(p_l / r_m),          s_cl = log(r_m / q_m)
//
// with r = diag(rho~) the populations of eta~ and q the thermal populations.

#pragma once

#include "qtraj/numerics.hpp"
#include "qtraj/states.hpp"

#include <cstdint>
#include <vector>

namespace qtraj {

struct AugmentedTrajectory {
    int l, m, n;
    double probability;
    double q_heat;
    double cl_heat;
    double s_qu;  // NaN for zero-probability records
    double s_cl;

    double s_irr() const { return s_qu + s_cl; }
    bool zero_probability() const;
};

struct Step3Ensemble {
    DensityMatrix rho_tilde;
    HamiltonianSpec hamiltonian;
    double temperature;
    RealVector p;        // eigenvalues of rho~
    Matrix psi;          // eigenvectors of rho~ (columns)
    RealVector r;        // populations of eta~
    RealVector q;        // thermal populations
    RealVector psi_energy;  // <psi_l|H|psi_l>
    bool degenerate;
    std::vector<AugmentedTrajectory> records;  // ordered by (l, m, n)

    int dim() const { return static_cast<int>(p.size()); }
    const AugmentedTrajectory& at(int l, int m, int n) const;
    double total_probability() const;
    // sum_n P(l, m, n)
    RealMatrix quantum_marginal() const;
    // sum_l P(l, m, n)
    RealMatrix classical_marginal() const;
};

Step3Ensemble build_step3_ensemble(const DensityMatrix& rho_tilde, const HamiltonianSpec& h, double temperature);

struct Atom {
    double value;
    double probability;
};

class DiscreteDistribution {
public:
    static constexpr double merge_tolerance = 1e-9;
    static constexpr double drop_below = 1e-15;

    DiscreteDistribution() = default;
    // Values within merge_tolerance of a cluster's smallest value are merged into it;
    // atoms lighter than drop_below are discarded.
    static DiscreteDistribution from_weighted(const std::vector<Atom>& raw);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    double total() const;
    double mean() const;
    double variance() const;
    double raw_moment(int k) const;

private:
    std::vector<Atom> atoms_;
};

DiscreteDistribution quantum_heat_distribution(const Step3Ensemble& ens);
DiscreteDistribution classical_heat_distribution(const Step3Ensemble& ens);

struct HeatVariances {
    double var_qu;  // sum_l p_l Delta(H, psi_l)
    double var_cl;  // Delta(H, eta~) + Delta(H, tau)
};

HeatVariances heat_variances(const Step3Ensemble& ens);

struct SandwichEntry {
    double alpha;
    double skew;
};

struct SandwichReport {
    double delta;   // Delta(H, rho~)
    double var_qu;
    std::vector<SandwichEntry> entries;
    bool holds;      // delta + 1e-12 >= var_qu >= I_alpha - 1e-12 for every alpha
    bool pure;
    bool saturated;  // all equal to 1e-12 (expected for pure states)
};

SandwichReport variance_sandwich(const DensityMatrix& rho_tilde, const HamiltonianSpec& h,
                                 const std::vector<double>& alphas);

struct EntropyStats {
    double avg_s_qu;
    double avg_s_cl;
    DiscreteDistribution s_irr;
};

EntropyStats entropy_production_stats(const Step3Ensemble& ens);

// Single-ancilla swap bath with the system Hamiltonian: <e_n nu|V|e_m mu> = d_{n mu} d_{nu m}.
struct SwapBath {
    int dim;
    Matrix V;      // on system (x) bath, index s * dim + b
    RealVector q;  // bath thermal populations

    SwapBath(const HamiltonianSpec& h, double temperature);
    // sqrt(q_mu) <nu|V|mu>, a system operator
    Matrix forward_kraus(int mu, int nu) const;
    // sqrt(q_nu) <mu|V^dagger|nu>
    Matrix backward_kraus(int nu, int mu) const;
};

double forward_probability_swap(const Step3Ensemble& ens, const SwapBath& bath, int l, int m, int n,
                                int mu, int nu);
double backward_probability_swap(const Step3Ensemble& ens, const SwapBath& bath, int l, int m, int n,
                                 int mu, int nu);
// Backward probability of the time-reversed record, summed over bath records.
// Throws ZeroProbabilityRecord when the forward record has zero probability.
double backward_probability_swap(const AugmentedTrajectory& rec, const Step3Ensemble& ens);

// sum over nonzero records of P exp(-s_irr)
double integral_fluctuation_sum(const Step3Ensemble& ens);

struct ClausiusReport {
    double avg_s_cl;
    double avg_Q_cl;
    double delta_S_cl;  // S(tau) - S(eta~)
    double Q_diss;      // T avg_s_cl
};

ClausiusReport clausius_report(const Step3Ensemble& ens);

struct SampleCounts {
    std::uint64_t total;
    std::vector<std::uint64_t> counts;  // per outcome index
};

// Inverse-CDF sampling over probs. Samples are split into fixed chunks, each with
// its own seed derived from (seed, chunk), so the result does not depend on workers.
SampleCounts sample_indices(const std::vector<double>& probs, std::uint64_t count, std::uint64_t seed,
                            int workers = 1);
SampleCounts monte_carlo_sample(const Step3Ensemble& ens, std::uint64_t count, std::uint64_t seed,
                                int workers = 1);

DiscreteDistribution empirical_quantum_heat(const Step3Ensemble& ens, const SampleCounts& s);
DiscreteDistribution empirical_classical_heat(const Step3Ensemble& ens, const SampleCounts& s);

}  // namespace qtraj
