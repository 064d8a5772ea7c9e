// Figure reproductions and other CLI-facing runners. Each returns a Table.
#pragma once

#include "qtraj/states.hpp"
#include "qtraj/table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qtraj {

struct RunConfig {
    std::string subcommand;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 42;
    std::optional<std::uint64_t> samples;
    int grid = 101;
    int workers = 1;
    std::optional<int> d;
    std::vector<double> p;
    std::optional<double> theta, theta_tilde, q1, r, temperature, Theta, t;
    double omega = 1.0;
    std::optional<int> steps;
    bool quasistatic = false;
    bool inject_fault = false;
};

// Qubit Hamiltonian of gap |omega| whose thermal ground population is q1. For
// q1 < 1/2 the levels are inverted (signed gap) so that the temperature stays positive.
struct QubitSetup {
    HamiltonianSpec hamiltonian;
    double temperature;
    double signed_omega;
};

QubitSetup qubit_setup_fixed_gap(double q1, double omega);

// n evenly spaced points on [lo, hi]; values within 1e-12 of zero are snapped to 0.
std::vector<double> linspace(double lo, double hi, int n);

Table run_fig3(const RunConfig& cfg);
Table run_fig4a(const RunConfig& cfg);
Table run_fig4b(const RunConfig& cfg);
Table run_fig5a(const RunConfig& cfg);
Table run_fig5b(const RunConfig& cfg);
Table run_fig6(const RunConfig& cfg);
Table run_trajectories(const RunConfig& cfg);
Table run_protocol(const RunConfig& cfg);
Table run_validate(const RunConfig& cfg);

Table run(const RunConfig& cfg);

}  // namespace qtraj
