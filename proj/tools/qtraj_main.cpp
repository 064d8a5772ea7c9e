// qtraj: figure tables, trajectory ensembles, protocol reports and the validation suite.
#include "qtraj/error.hpp"
#include "qtraj/figures.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

namespace {

constexpr int kExitFlags = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIO = 4;

bool is_argument_error(qtraj::ErrorKind k) {
    using qtraj::ErrorKind;
    switch (k) {
        case ErrorKind::EnsembleTooLarge:
        case ErrorKind::ZeroProbabilityRecord:
            return false;
        default:
            return true;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum stochastic trajectories: heat statistics, entropy production and work extraction"};
    app.require_subcommand(1);
    app.fallthrough();

    qtraj::RunConfig cfg;
    app.add_option("--out", cfg.out_path, "Output file (default: standard output)");
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--samples", cfg.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
    app.add_option("--grid", cfg.grid, "Points per grid axis")->capture_default_str()->check(CLI::Range(2, 100000));
    app.add_option("--workers", cfg.workers, "Monte Carlo worker threads")->check(CLI::Range(1, 256));
    app.add_option("--d", cfg.d, "Hilbert space dimension")->check(CLI::Range(2, 8));
    app.add_option("--p", cfg.p, "State spectrum, comma separated")->delimiter(',');
    app.add_option("--theta", cfg.theta, "Angle of the initial qubit state");
    app.add_option("--theta-tilde", cfg.theta_tilde, "Angle of the qubit state after the unitary");
    app.add_option("--q1", cfg.q1, "Thermal ground-state population of H1");
    app.add_option("--r", cfg.r, "Ground population of the decohered state (fig3 panel a)");
    app.add_option("--omega", cfg.omega, "Energy gap")->capture_default_str();
    app.add_option("--temperature", cfg.temperature, "Bath temperature")->check(CLI::PositiveNumber);
    app.add_option("--Theta", cfg.Theta, "Fourier interpolation parameter")->check(CLI::Range(0.0, 1.0));
    app.add_option("--t", cfg.t, "End of the dephasing time grid (fig4b)");
    app.add_option("--N-steps", cfg.steps, "Number of thermalization steps N")->check(CLI::PositiveNumber);
    app.add_flag("--quasistatic", cfg.quasistatic, "Analytic quasistatic Step IV");
    app.add_flag("--inject-fault", cfg.inject_fault)->group("");

    const std::pair<const char*, const char*> subcommands[] = {
        {"fig3", "Quantum and classical heat distributions for two qubit setups"},
        {"fig4a", "Quantum heat variance along the Fourier interpolation U(Theta)"},
        {"fig4b", "Quantum heat variance under dephasing in time"},
        {"fig5a", "Classical entropy production against nonthermality"},
        {"fig5b", "Quantum entropy production against coherence"},
        {"fig6", "Extracted work over the (coh, nonth) grid"},
        {"trajectories", "Full Step III trajectory table, optionally with Monte Carlo counts"},
        {"protocol", "Work extraction protocol report"},
        {"validate", "Seeded self-checks across all modules"},
    };
    for (const auto& [name, help] : subcommands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitFlags;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    qtraj::Table table;
    try {
        table = qtraj::run(cfg);
    } catch (const qtraj::Error& e) {
        std::cerr << "qtraj: " << e.what() << '\n';
        return is_argument_error(e.kind()) ? kExitFlags : kExitValidation;
    }

    std::ostringstream text;
    if (cfg.format == "json")
        qtraj::write_json(table, text);
    else
        qtraj::write_csv(table, text);

    if (cfg.out_path.empty()) {
        std::cout << text.str();
        std::cout.flush();
        if (!std::cout) return kExitIO;
    } else {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) {
            std::cerr << "qtraj: cannot open " << cfg.out_path << " for writing\n";
            return kExitIO;
        }
        out << text.str();
        if (!out.flush()) {
            std::cerr << "qtraj: write to " << cfg.out_path << " failed\n";
            return kExitIO;
        }
    }

    for (const auto& c : table.checks)
        if (!c.passed) std::cerr << "qtraj: check failed: " << c.name << " (" << qtraj::format_number(c.value) << ")\n";
    return table.all_passed() ? 0 : kExitValidation;
}
