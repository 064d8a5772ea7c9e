#include "qtraj/channels.hpp"
#include "qtraj/error.hpp"
#include "qtraj/figures.hpp"
#include "qtraj/oracles.hpp"
#include "qtraj/protocol.hpp"
#include "qtraj/random.hpp"
#include "qtraj/trajectories.hpp"

#include <cmath>
#include <numbers>

namespace qtraj {

namespace {

constexpr double kExact = 1e-12;
constexpr double kPi = std::numbers::pi;

struct Corpus {
    std::vector<DensityMatrix> states;
    std::vector<HamiltonianSpec> hamiltonians;
    std::vector<double> temperatures;
};

Corpus make_corpus(std::uint64_t seed, int size) {
    Rng rng(splitmix64(seed));
    Corpus c;
    for (int i = 0; i < size; ++i) {
        const int d = 2 + i % 4;
        c.states.push_back(random_density(d, rng));
        c.hamiltonians.push_back(random_hamiltonian(d, rng));
        c.temperatures.push_back(0.3 + 2.7 * uniform01(rng));
    }
    return c;
}

class Suite {
public:
    explicit Suite(Table& t) : t_(t) {}

    void check(const std::string& name, bool ok, double value, const std::string& detail = {}) {
        t_.add_check(name, ok, value, detail);
        t_.add_row({name, ok ? "pass" : "fail", Cell{value}, detail});
    }

    // Track the largest violation of "value <= tol" and report it once.
    struct Worst {
        double value = 0.0;
        void update(double v) {
            if (std::isnan(v)) value = std::numeric_limits<double>::infinity();
            else value = std::max(value, v);
        }
    };

private:
    Table& t_;
};

void numerics_checks(Suite& s, std::uint64_t seed) {
    Rng rng(splitmix64(seed + 1));
    Suite::Worst recon, ortho, roundtrip, identity;
    for (int i = 0; i < 300; ++i) {
        const int d = 2 + i % 7;
        const Matrix g = ginibre(d, rng);
        const Matrix a = g + g.adjoint();
        const EigenSystem es = hermitian_eig(a);
        recon.update(max_abs(a - es.reconstruct()));
        ortho.update(max_abs(es.vectors.adjoint() * es.vectors - Matrix::Identity(d, d)));
        identity.update(max_abs(matrix_function(es, [](double x) { return x; }) - a));
        const Matrix u = random_unitary(d, rng);
        roundtrip.update(max_abs(exp_skew_hermitian(unitary_log_principal(u)) - u));
    }
    s.check("numerics.eig_reconstruction", recon.value <= 1e-10, recon.value);
    s.check("numerics.eig_orthonormality", ortho.value <= kExact, ortho.value);
    s.check("numerics.identity_function", identity.value <= kExact, identity.value);
    s.check("numerics.exp_log_roundtrip", roundtrip.value <= 1e-10, roundtrip.value);
}

void states_checks(Suite& s, const Corpus& c) {
    Suite::Worst moments, pyth, rel_coh, skew_low, skew_high;
    for (std::size_t i = 0; i < c.states.size(); ++i) {
        const auto& rho = c.states[i];
        const auto& h = c.hamiltonians[i];
        const DensityMatrix eta = decohere(rho, h);
        const Matrix hm = h.matrix();
        moments.update(std::abs((hm * (eta.matrix() - rho.matrix())).trace()));
        moments.update(std::abs((hm * hm * (eta.matrix() - rho.matrix())).trace()));
        const PythagoreanSplit sp = pythagorean_split(rho, h, c.temperatures[i]);
        pyth.update(std::abs(sp.total - sp.quantum - sp.classical));
        rel_coh.update(std::abs(sp.quantum - (von_neumann_entropy(eta) - von_neumann_entropy(rho))));
        const double delta = observable_variance(h, rho);
        for (double a : {0.1, 0.5, 0.9}) {
            const double skew = skew_information(h, rho, a);
            skew_low.update(-skew);
            skew_high.update(skew - delta);
        }
    }
    s.check("states.decoherence_preserves_moments", moments.value <= kExact, moments.value);
    s.check("states.pythagorean_identity", pyth.value <= kExact, pyth.value);
    s.check("states.relative_entropy_of_coherence", rel_coh.value <= kExact, rel_coh.value);
    s.check("states.skew_information_bounds", skew_low.value <= 0.0 && skew_high.value <= kExact,
            std::max(skew_low.value, skew_high.value));

    // Coherence vanishes exactly when the qubit has no off-diagonal weight.
    bool iff = true;
    const HamiltonianSpec hq = HamiltonianSpec::qubit(1.0);
    for (std::size_t i = 0; i < c.states.size(); i += 4) {
        const auto& rho = c.states[i];  // d = 2 entries of the corpus
        const bool coherent = std::abs(rho.matrix()(0, 1)) > 1e-10;
        const bool positive = coherence_measure(rho, hq).value > 0.0;
        iff = iff && coherent == positive;
        const DensityMatrix eta = decohere(rho, hq);
        iff = iff && coherence_measure(eta, hq).value == 0.0;
    }
    s.check("states.coherence_iff_offdiagonal", iff, 0.0, "qubits");
}

void channel_checks(Suite& s, const Corpus& c, std::uint64_t seed) {
    Suite::Worst validity, semigroup;
    for (std::size_t i = 0; i < c.states.size(); ++i) {
        const auto& rho = c.states[i];
        const auto& h = c.hamiltonians[i];
        const double t1 = 0.1 * static_cast<double>(i % 17);
        const double t2 = 0.05 * static_cast<double>(i % 11);
        for (const DensityMatrix& out :
             {dephasing_semigroup(rho, h, t1), depolarize(rho, 0.01 * static_cast<double>(i % 101)),
              full_thermalization(rho, h, c.temperatures[i])}) {
            const Validation v = validate(out.matrix(), MatrixKind::density);
            validity.update(v ? 0.0 : 1.0);
        }
        const Matrix once = dephasing_semigroup(rho, h, t1 + t2).matrix();
        const Matrix twice = dephasing_semigroup(dephasing_semigroup(rho, h, t1), h, t2).matrix();
        semigroup.update(max_abs(once - twice));
    }
    s.check("channels.outputs_are_states", validity.value == 0.0, validity.value);
    s.check("channels.dephasing_semigroup", semigroup.value <= kExact, semigroup.value);

    // Majorization: the Shannon entropy of M(Theta) p grows with Theta.
    bool monotone = true;
    for (int d : {2, 3}) {
        RealVector p(d);
        if (d == 2) p << 0.9, 0.1;
        else p << 0.49, 0.04, 0.47;
        const FourierFamily fam = fourier_unitary_family(d);
        double prev = -1.0;
        for (double th : linspace(0.0, 1.0, 101)) {
            const StochasticMatrix m = transition_matrix(interpolated_unitary(fam, th));
            monotone = monotone && m.stochasticity_residual() <= 1e-10 && m.symmetry_residual() <= 1e-10;
            const double h = shannon_entropy(m.entries * p);
            monotone = monotone && h >= prev - kExact;
            prev = h;
        }
    }
    s.check("channels.mixing_entropy_nondecreasing", monotone, 0.0, "d = 2 and 3");

    const HamiltonianSpec h3 = HamiltonianSpec::uniform(3, 1.0);
    const auto deph = covariance_check([&](const DensityMatrix& r) { return dephasing_semigroup(r, h3, 0.7); }, h3,
                                       50, seed);
    const auto depo = covariance_check([](const DensityMatrix& r) { return depolarize(r, 0.3); }, h3, 50, seed);
    Rng rng(splitmix64(seed + 2));
    const Matrix w = random_unitary(3, rng);
    const auto conj = covariance_check([&](const DensityMatrix& r) { return DensityMatrix(w * r.matrix() * w.adjoint()); },
                                       h3, 50, seed);
    s.check("channels.dephasing_covariant", deph.covariant, deph.max_residual);
    s.check("channels.depolarizing_covariant", depo.covariant, depo.max_residual);
    s.check("channels.random_unitary_not_covariant", !conj.covariant, conj.max_residual);

    // Coherence never grows under mixtures of dephasing and depolarization.
    Rng qrng(splitmix64(seed + 3));
    const HamiltonianSpec hq = HamiltonianSpec::qubit(1.0);
    Suite::Worst growth;
    for (int i = 0; i < 2000; ++i) {
        const DensityMatrix rho = (i % 2) ? random_density(2, qrng) : random_pure(2, qrng);
        const double before = coherence_measure(rho, hq).value;
        for (double t : {0.0, 0.5, 2.0})
            for (double mu : {0.0, 0.3, 1.0}) {
                const DensityMatrix out = depolarize(dephasing_semigroup(rho, hq, t), mu);
                growth.update(coherence_measure(out, hq).value - before);
            }
    }
    s.check("channels.coherence_monotone", growth.value <= kExact, growth.value);
}

void trajectory_checks(Suite& s, const Corpus& c) {
    Suite::Worst norm, marg_q, marg_cl, mean_q, s_qu, s_cl, ratio, ift, var_q, var_cl, recon, sandwich, brute;
    for (std::size_t i = 0; i < c.states.size(); ++i) {
        const auto& rho = c.states[i];
        const auto& h = c.hamiltonians[i];
        const double T = c.temperatures[i];
        const Step3Ensemble ens = build_step3_ensemble(rho, h, T);
        const int d = ens.dim();
        norm.update(std::abs(ens.total_probability() - 1.0));

        const RealMatrix gq = ens.quantum_marginal();
        const RealMatrix gc = ens.classical_marginal();
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m) marg_q.update(std::abs(gq(l, m) - ens.p(l) * std::norm(ens.psi(m, l))));
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) marg_cl.update(std::abs(gc(m, n) - ens.r(m) * ens.q(n)));
        recon.update((gq.colwise().sum().transpose() - ens.r).cwiseAbs().maxCoeff());

        const auto qd = quantum_heat_distribution(ens);
        const auto cd = classical_heat_distribution(ens);
        mean_q.update(std::abs(qd.mean()));
        const PythagoreanSplit sp = pythagorean_split(rho, h, T);
        const EntropyStats st = entropy_production_stats(ens);
        s_qu.update(std::abs(st.avg_s_qu - sp.quantum));
        s_cl.update(std::abs(st.avg_s_cl - sp.classical));
        for (const auto& r : ens.records) {
            if (r.zero_probability()) continue;
            ratio.update(std::abs(std::log(r.probability / backward_probability_swap(r, ens)) - r.s_irr()));
        }
        ift.update(std::abs(integral_fluctuation_sum(ens) - 1.0));
        const HeatVariances hv = heat_variances(ens);
        var_q.update(std::abs(hv.var_qu - qd.variance()));
        var_cl.update(std::abs(hv.var_cl - cd.variance()));

        const SandwichReport sw = variance_sandwich(rho, h, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
        sandwich.update(sw.holds ? 0.0 : 1.0);

        const MomentTable mt = brute_force_moments(rho.matrix(), h.levels, T, 4);
        brute.update(std::abs(mt.var_q - hv.var_qu));
        brute.update(std::abs(mt.var_cl - hv.var_cl));
        brute.update(std::abs(mt.mean_s_qu - st.avg_s_qu));
        brute.update(std::abs(mt.mean_s_cl - st.avg_s_cl));
    }
    s.check("trajectories.normalization", norm.value <= kExact, norm.value);
    s.check("trajectories.quantum_marginal", marg_q.value <= kExact, marg_q.value);
    s.check("trajectories.classical_marginal", marg_cl.value <= kExact, marg_cl.value);
    s.check("trajectories.eta_reconstruction", recon.value <= kExact, recon.value);
    s.check("trajectories.mean_quantum_heat_zero", mean_q.value <= kExact, mean_q.value);
    s.check("trajectories.avg_s_qu_relative_entropy", s_qu.value <= kExact, s_qu.value);
    s.check("trajectories.avg_s_cl_relative_entropy", s_cl.value <= kExact, s_cl.value);
    s.check("trajectories.swap_log_ratio", ratio.value <= kExact, ratio.value);
    s.check("trajectories.fluctuation_theorem", ift.value <= kExact, ift.value);
    s.check("trajectories.var_qu_closed_form", var_q.value <= kExact, var_q.value);
    s.check("trajectories.var_cl_closed_form", var_cl.value <= kExact, var_cl.value);
    s.check("trajectories.variance_sandwich", sandwich.value == 0.0, sandwich.value);
    s.check("oracles.brute_force_agreement", brute.value <= kExact, brute.value);

    // Pure states saturate the sandwich.
    Rng rng(splitmix64(17));
    Suite::Worst saturated;
    for (int i = 0; i < 50; ++i) {
        const int d = 2 + i % 4;
        const SandwichReport sw = variance_sandwich(random_pure(d, rng), random_hamiltonian(d, rng), {0.1, 0.5, 0.9});
        saturated.update(sw.saturated ? 0.0 : 1.0);
    }
    s.check("trajectories.sandwich_saturated_for_pure", saturated.value == 0.0, saturated.value);
}

void monte_carlo_checks(Suite& s, const RunConfig& cfg) {
    const double pi3 = kPi / 3.0;
    const DensityMatrix rho = DensityMatrix::qubit_angle_state(0.95, pi3);
    const QubitSetup qs = qubit_setup_fixed_gap(rho.populations()(0), 1.0);
    Step3Ensemble ens = build_step3_ensemble(rho, qs.hamiltonian, qs.temperature);

    const std::uint64_t n = cfg.samples.value_or(1'000'000);
    const SampleCounts a = monte_carlo_sample(ens, n, cfg.seed, 1);
    const SampleCounts b = monte_carlo_sample(ens, n, cfg.seed, 4);
    s.check("monte_carlo.worker_independent", a.counts == b.counts, static_cast<double>(n));

    double worst = 0.0;
    const auto exact = quantum_heat_distribution(ens);
    const auto emp = empirical_quantum_heat(ens, a);
    for (const auto& atom : exact.atoms()) {
        double freq = 0.0;
        for (const auto& e : emp.atoms())
            if (std::abs(e.value - atom.value) <= DiscreteDistribution::merge_tolerance) freq = e.probability;
        const double sigma = std::sqrt(atom.probability * (1.0 - atom.probability) / static_cast<double>(n));
        if (sigma > 0.0) worst = std::max(worst, std::abs(freq - atom.probability) / sigma);
    }
    for (std::size_t i = 0; i < ens.records.size(); ++i) {
        const double pr = ens.records[i].probability;
        const double sigma = std::sqrt(static_cast<double>(n) * pr * (1.0 - pr));
        if (sigma > 0.0)
            worst = std::max(worst, std::abs(static_cast<double>(a.counts[i]) - static_cast<double>(n) * pr) / sigma);
    }
    s.check("monte_carlo.within_4_sigma", worst <= 4.0, worst, "max |z| over atoms and records");

    if (cfg.inject_fault) ens.records[static_cast<std::size_t>(ens.dim())].probability += 1e-3;
    const double ift = integral_fluctuation_sum(ens);
    s.check("trajectories.fluctuation_theorem_fig3b", std::abs(ift - 1.0) <= kExact, ift,
            cfg.inject_fault ? "fault injected" : "");
}

void protocol_checks(Suite& s, std::uint64_t seed) {
    Rng rng(splitmix64(seed + 5));
    Suite::Worst footprint, work, step4, dU, ift;
    for (int i = 0; i < 100; ++i) {
        const int d = 2 + i % 2;
        const DensityMatrix rho = random_density(d, rng, 0.02);
        const Matrix v = random_unitary(d, rng);
        const DensityMatrix rho_tilde(v * rho.matrix() * v.adjoint());
        const HamiltonianSpec h0 = random_hamiltonian(d, rng);
        const HamiltonianSpec h1 = random_hamiltonian(d, rng);
        const double T = 0.5 + uniform01(rng);
        const int steps = 2 + i % 3;
        const ProtocolSpec spec = plan_protocol(rho, h0, T, rho_tilde, h1, steps);
        const ProtocolReport rep = report(spec);
        const ProtocolAverages avg = enumerate_protocol(spec);
        footprint.update(rep.footprint_residual);
        work.update(std::abs(avg.avg_W_ext - rep.avg_W_ext));
        step4.update(std::abs(avg.avg_s_step4 - rep.avg_s_step4));
        dU.update(std::abs(avg.avg_delta_U));
        ift.update(std::abs(avg.fluctuation_sum - 1.0));
    }
    s.check("protocol.footprint_identity", footprint.value <= 1e-10, footprint.value);
    s.check("protocol.enumerated_work", work.value <= kExact, work.value);
    s.check("protocol.step4_entropy_sum", step4.value <= kExact, step4.value);
    s.check("protocol.delta_U_zero", dU.value <= kExact, dU.value);
    s.check("protocol.fluctuation_theorem", ift.value <= kExact, ift.value);

    double worst_ratio = 0.0;
    bool in_window = true;
    for (int n : {64, 128, 256}) {
        const auto a = report(plan_qubit_protocol(0.8, kPi / 3.0, 0.0, 0.8, 1.0, 1.0, n));
        const auto b = report(plan_qubit_protocol(0.8, kPi / 3.0, 0.0, 0.8, 1.0, 1.0, 2 * n));
        const double ratio = a.avg_s_step4 / b.avg_s_step4;
        in_window = in_window && ratio >= 1.8 && ratio <= 2.2;
        worst_ratio = std::max(worst_ratio, std::abs(ratio - 2.0));
    }
    s.check("protocol.quasistatic_convergence", in_window, worst_ratio, "max |ratio - 2| for N = 64, 128, 256");
}

void oracle_checks(Suite& s) {
    Suite::Worst q, cl;
    bool p_free = true;
    const auto grid_p = linspace(0.55, 0.99, 10);
    const auto grid_th = linspace(0.0, kPi / 2.0, 10);
    const auto grid_q = linspace(0.55, 0.95, 10);
    for (double p : grid_p)
        for (double th : grid_th)
            for (double q1 : grid_q) {
                const QubitParams params{p, 0.0, th, 1.0, q1};
                const QubitSetup qs = qubit_setup_fixed_gap(q1, 1.0);
                const Step3Ensemble ens =
                    build_step3_ensemble(DensityMatrix::qubit_angle_state(p, th), qs.hamiltonian, qs.temperature);
                q.update(std::abs(qubit_var_qheat(params) - quantum_heat_distribution(ens).variance()));
                cl.update(std::abs(qubit_var_clheat(params) - classical_heat_distribution(ens).variance()));
                const QubitParams other{0.6, 0.0, th, 1.0, q1};
                p_free = p_free && std::abs(qubit_var_qheat(params) - qubit_var_qheat(other)) <= 1e-15;
            }
    s.check("oracles.qubit_var_qheat", q.value <= kExact, q.value);
    s.check("oracles.qubit_var_clheat", cl.value <= kExact, cl.value);
    s.check("oracles.var_qheat_independent_of_p", p_free, 0.0);
}

void figure_checks(Suite& s) {
    RunConfig base;
    base.omega = 1.0;
    base.grid = 101;
    for (const char* name : {"fig3", "fig4a", "fig4b", "fig5a", "fig5b", "fig6"}) {
        RunConfig c = base;
        c.subcommand = name;
        Table t = run(c);
        for (const auto& ch : t.checks) s.check(std::string(name) + "." + ch.name, ch.passed, ch.value, ch.detail);
    }
    RunConfig d2 = base;
    d2.d = 2;
    for (const char* name : {"fig4a", "fig4b"}) {
        d2.subcommand = name;
        Table t = run(d2);
        for (const auto& ch : t.checks)
            s.check(std::string(name) + "_d2." + ch.name, ch.passed, ch.value, ch.detail);
    }
}

}  // namespace

Table run_validate(const RunConfig& cfg) {
    Table t;
    t.name = "validate";
    t.columns = {"check", "status", "value", "detail"};
    t.config = {{"subcommand", "validate"},
                {"seed", cfg.seed},
                {"samples", cfg.samples.value_or(1'000'000)},
                {"inject_fault", cfg.inject_fault}};
    Suite s(t);
    const Corpus corpus = make_corpus(cfg.seed, 1000);
    numerics_checks(s, cfg.seed);
    states_checks(s, corpus);
    channel_checks(s, corpus, cfg.seed);
    trajectory_checks(s, corpus);
    monte_carlo_checks(s, cfg);
    protocol_checks(s, cfg.seed);
    oracle_checks(s);
    figure_checks(s);
    return t;
}

}  // namespace qtraj
