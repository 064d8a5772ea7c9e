#include "qtraj/error.hpp"
#include "qtraj/oracles.hpp"
#include "qtraj/random.hpp"
#include "qtraj/trajectories.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace qtraj;

namespace {
constexpr double pi = std::numbers::pi;

double temp_for(double q1) { return 1.0 / std::log(q1 / (1.0 - q1)); }

Step3Ensemble fig3b() {
    return build_step3_ensemble(DensityMatrix::qubit_angle_state(0.95, pi / 3), HamiltonianSpec::qubit(1.0),
                                temp_for(0.85));
}

struct Sample {
    DensityMatrix rho;
    HamiltonianSpec h;
    double t;
};

Sample draw(Rng& rng, int d) {
    return {random_density(d, rng), random_hamiltonian(d, rng), 0.2 + 2.0 * uniform01(rng)};
}
}  // namespace

TEST_CASE("step III ensemble on the qubit example") {
    const Step3Ensemble ens = fig3b();
    CHECK(ens.records.size() == 8);
    CHECK(std::abs(ens.total_probability() - 1.0) <= 1e-14);
    // eigenvalues ascending: l = 1 carries p = 0.95, l = 0 carries 0.05
    CHECK(ens.p(1) == doctest::Approx(0.95).epsilon(1e-14));
    const AugmentedTrajectory& rec = ens.at(1, 1, 0);
    CHECK(rec.probability == doctest::Approx(0.201875).epsilon(1e-13));
    CHECK(ens.quantum_marginal()(1, 1) == doctest::Approx(0.2375).epsilon(1e-13));
}

TEST_CASE("diagonal state has no cross records") {
    RealVector p(3);
    p << 0.2, 0.5, 0.3;
    const HamiltonianSpec h = HamiltonianSpec::uniform(3, 1.0);
    const Step3Ensemble ens = build_step3_ensemble(DensityMatrix::diagonal(p), h, 1.0);
    for (const auto& r : ens.records) {
        const Eigen::Index m = r.m;
        // psi_l is the canonical vector where p sits
        Eigen::Index k;
        ens.psi.col(r.l).cwiseAbs().maxCoeff(&k);
        if (k != m) CHECK(r.probability == 0.0);
        if (r.probability == 0.0) {
            CHECK(r.zero_probability());
            CHECK(std::isnan(r.s_qu));
        }
    }
    const DiscreteDistribution q = quantum_heat_distribution(ens);
    CHECK(q.size() == 1);
    CHECK(q.atoms()[0].value == 0.0);
    CHECK(q.atoms()[0].probability == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quantum heat distribution") {
    const DiscreteDistribution q = quantum_heat_distribution(fig3b());
    REQUIRE(q.size() == 4);
    const double expect[] = {-0.75, -0.25, 0.25, 0.75};
    for (int i = 0; i < 4; ++i) CHECK(q.atoms()[i].value == doctest::Approx(expect[i]).epsilon(1e-13));
    CHECK(std::abs(q.mean()) <= 1e-14);
    CHECK(q.variance() == doctest::Approx(0.1875).epsilon(1e-13));
}

TEST_CASE("classical heat distribution") {
    // q1 = 0.2 needs inverted levels at positive temperature
    const Step3Ensemble ens = build_step3_ensemble(DensityMatrix::diagonal((RealVector(2) << 0.3, 0.7).finished()),
                                                   HamiltonianSpec::qubit(-1.0), temp_for(0.8));
    CHECK(ens.q(0) == doctest::Approx(0.2).epsilon(1e-13));
    const DiscreteDistribution c = classical_heat_distribution(ens);
    for (const auto& atom : c.atoms()) {
        const bool gap = std::abs(std::abs(atom.value) - 1.0) <= 1e-12 || atom.value == 0.0;
        CHECK(gap);
    }
    // mean = tr[H(tau - eta)] with signed gap -1
    CHECK(c.mean() == doctest::Approx(-1.0 * (0.3 - 0.2)).epsilon(1e-13));
    CHECK(heat_variances(ens).var_cl == doctest::Approx(0.37).epsilon(1e-13));
    CHECK(c.variance() == doctest::Approx(0.37).epsilon(1e-13));

    // eta = tau: symmetric with mean zero but nonzero atoms
    const Step3Ensemble sym =
        build_step3_ensemble(decohere(thermal_state(HamiltonianSpec::qubit(1.0), temp_for(0.725)), HamiltonianSpec::qubit(1.0)),
                             HamiltonianSpec::qubit(1.0), temp_for(0.725));
    const DiscreteDistribution s = classical_heat_distribution(sym);
    CHECK(std::abs(s.mean()) <= 1e-14);
    CHECK(s.size() == 3);
    CHECK(heat_variances(sym).var_cl > 0.0);
}

TEST_CASE("heat variances for the qubit") {
    const HeatVariances v = heat_variances(fig3b());
    CHECK(v.var_qu == doctest::Approx(0.1875).epsilon(1e-13));
}

TEST_CASE("ensemble invariants on a seeded corpus") {
    Rng rng(41);
    for (int i = 0; i < 300; ++i) {
        const int d = 2 + i % 4;
        const Sample s = draw(rng, d);
        const Step3Ensemble ens = build_step3_ensemble(s.rho, s.h, s.t);
        CHECK(std::abs(ens.total_probability() - 1.0) <= 1e-12);

        // marginal over n: p_l |<e_m|psi_l>|^2
        const RealMatrix qm = ens.quantum_marginal();
        const RealMatrix cm = ens.classical_marginal();
        double worst = 0.0;
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m) worst = std::max(worst, std::abs(qm(l, m) - ens.p(l) * std::norm(ens.psi(m, l))));
        CHECK(worst <= 1e-12);
        // marginal over l: r_m q_n
        worst = 0.0;
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) worst = std::max(worst, std::abs(cm(m, n) - ens.r(m) * ens.q(n)));
        CHECK(worst <= 1e-12);
        // reconstruction of eta~
        RealVector rec = RealVector::Zero(d);
        for (int l = 0; l < d; ++l)
            for (int m = 0; m < d; ++m) rec(m) += qm(l, m);
        CHECK((rec - decohere(s.rho, s.h).populations()).cwiseAbs().maxCoeff() <= 1e-12);

        // closed-form variances vs distribution moments
        const HeatVariances hv = heat_variances(ens);
        CHECK(std::abs(hv.var_qu - quantum_heat_distribution(ens).variance()) <= 1e-12);
        CHECK(std::abs(hv.var_cl - classical_heat_distribution(ens).variance()) <= 1e-12);
    }
}

TEST_CASE("enumeration agrees with the brute-force oracle") {
    Rng rng(42);
    for (int i = 0; i < 100; ++i) {
        const int d = 2 + i % 4;
        const Sample s = draw(rng, d);
        const Step3Ensemble ens = build_step3_ensemble(s.rho, s.h, s.t);
        const MomentTable mt = brute_force_moments(s.rho.matrix(), s.h.levels, s.t, 4);
        const DiscreteDistribution q = quantum_heat_distribution(ens);
        const DiscreteDistribution c = classical_heat_distribution(ens);
        for (int k = 1; k <= 4; ++k) {
            CHECK(std::abs(q.raw_moment(k) - mt.q_heat[k - 1]) <= 1e-12);
            CHECK(std::abs(c.raw_moment(k) - mt.cl_heat[k - 1]) <= 1e-12);
        }
        const EntropyStats es = entropy_production_stats(ens);
        CHECK(std::abs(es.avg_s_qu - mt.mean_s_qu) <= 1e-12);
        CHECK(std::abs(es.avg_s_cl - mt.mean_s_cl) <= 1e-12);
    }
}

TEST_CASE("DiscreteDistribution merging") {
    const DiscreteDistribution d =
        DiscreteDistribution::from_weighted({{1.0, 0.25}, {1.0 + 5e-10, 0.25}, {0.0, 0.5}, {3.0, 1e-16}});
    REQUIRE(d.size() == 2);
    CHECK(d.atoms()[0].value == 0.0);
    CHECK(d.atoms()[1].value == 1.0);
    CHECK(d.atoms()[1].probability == 0.5);
    CHECK(d.total() == 1.0);
    CHECK(d.mean() == 0.5);
    CHECK(d.variance() == 0.25);
}

TEST_CASE("variance sandwich") {
    const HamiltonianSpec h = HamiltonianSpec::qubit(1.0);
    const std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const SandwichReport mixed = variance_sandwich(DensityMatrix::qubit_angle_state(0.95, pi / 3), h, alphas);
    CHECK(mixed.holds);
    CHECK_FALSE(mixed.pure);
    CHECK(mixed.var_qu < mixed.delta);
    for (const auto& e : mixed.entries) CHECK(e.skew < mixed.var_qu);

    const SandwichReport pure = variance_sandwich(DensityMatrix::qubit_angle_state(1.0, pi / 3), h, alphas);
    CHECK(pure.pure);
    CHECK(pure.saturated);

    const SandwichReport flat = variance_sandwich(DensityMatrix::maximally_mixed(2), h, alphas);
    CHECK(flat.delta == doctest::Approx(0.25));
    CHECK(flat.var_qu == doctest::Approx(0.0));
    CHECK(flat.holds);

    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
        const int d = 2 + i % 4;
        CHECK(variance_sandwich(random_density(d, rng), random_hamiltonian(d, rng), alphas).holds);
        const SandwichReport p = variance_sandwich(random_pure(d, rng), random_hamiltonian(d, rng), alphas);
        CHECK(p.saturated);
    }
}

TEST_CASE("entropy production averages") {
    const HamiltonianSpec h = HamiltonianSpec::qubit(1.0);
    const double t = 0.8;
    const EntropyStats eq = entropy_production_stats(build_step3_ensemble(thermal_state(h, t), h, t));
    CHECK(std::abs(eq.avg_s_qu) <= 1e-14);
    CHECK(std::abs(eq.avg_s_cl) <= 1e-14);

    Rng rng(44);
    for (int i = 0; i < 200; ++i) {
        const int d = 2 + i % 4;
        const Sample s = draw(rng, d);
        const Step3Ensemble ens = build_step3_ensemble(s.rho, s.h, s.t);
        const EntropyStats es = entropy_production_stats(ens);
        const PythagoreanSplit sp = pythagorean_split(s.rho, s.h, s.t);
        CHECK(std::abs(es.avg_s_qu - sp.quantum) <= 1e-12);
        CHECK(std::abs(es.avg_s_cl - sp.classical) <= 1e-12);
        CHECK(es.s_irr.mean() >= -1e-12);
        CHECK(std::abs(integral_fluctuation_sum(ens) - 1.0) <= 1e-12);
    }
}

TEST_CASE("swap bath backward probabilities") {
    const HamiltonianSpec h = HamiltonianSpec::qubit(1.0);
    const double t = temp_for(0.725);
    const Step3Ensemble eq = build_step3_ensemble(thermal_state(h, t), h, t);
    for (const auto& r : eq.records) {
        if (r.zero_probability()) continue;
        CHECK(std::abs(backward_probability_swap(r, eq) - r.probability) <= 1e-14);
        CHECK(std::abs(r.s_irr()) <= 1e-13);
    }

    const Step3Ensemble ens = fig3b();
    const SwapBath bath(ens.hamiltonian, ens.temperature);
    const int d = ens.dim();
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) {
                double fwd = 0.0;
                for (int mu = 0; mu < d; ++mu)
                    for (int nu = 0; nu < d; ++nu) {
                        const double f = forward_probability_swap(ens, bath, l, m, n, mu, nu);
                        // swap selection rule
                        if (f > 0.0) CHECK((n == mu && nu == m));
                        fwd += f;
                    }
                const AugmentedTrajectory& r = ens.at(l, m, n);
                CHECK(std::abs(fwd - r.probability) <= 1e-14);
                if (!r.zero_probability())
                    CHECK(std::abs(std::log(r.probability / backward_probability_swap(r, ens)) - r.s_irr()) <= 1e-12);
            }
}

TEST_CASE("swap bath zero-probability record") {
    RealVector p(2);
    p << 0.4, 0.6;
    const Step3Ensemble ens = build_step3_ensemble(DensityMatrix::diagonal(p), HamiltonianSpec::qubit(1.0), 1.0);
    bool seen = false;
    for (const auto& r : ens.records) {
        if (!r.zero_probability()) continue;
        seen = true;
        try {
            backward_probability_swap(r, ens);
            FAIL("expected ZeroProbabilityRecord");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ZeroProbabilityRecord);
        }
    }
    CHECK(seen);
}

TEST_CASE("Clausius report") {
    const Step3Ensemble ens = build_step3_ensemble(DensityMatrix::diagonal((RealVector(2) << 0.3, 0.7).finished()),
                                                   HamiltonianSpec::qubit(-1.0), temp_for(0.8));
    const ClausiusReport c = clausius_report(ens);
    CHECK(c.Q_diss == doctest::Approx(ens.temperature * 0.028168).epsilon(1e-5));
    CHECK(std::abs(c.avg_s_cl - (c.delta_S_cl - c.avg_Q_cl / ens.temperature)) <= 1e-12);
}

TEST_CASE("Monte Carlo sampling") {
    const Step3Ensemble ens = fig3b();
    const SampleCounts a = monte_carlo_sample(ens, 200000, 9, 1);
    const SampleCounts b = monte_carlo_sample(ens, 200000, 9, 1);
    const SampleCounts c = monte_carlo_sample(ens, 200000, 9, 3);
    CHECK(a.counts == b.counts);
    CHECK(a.counts == c.counts);
    std::uint64_t sum = 0;
    for (auto k : a.counts) sum += k;
    CHECK(sum == 200000);
    for (std::size_t i = 0; i < ens.records.size(); ++i) {
        const double pr = ens.records[i].probability;
        const double sigma = std::sqrt(200000 * pr * (1 - pr));
        CHECK(std::abs(double(a.counts[i]) - 200000 * pr) <= 4 * sigma + 1e-9);
    }
    const SampleCounts other = monte_carlo_sample(ens, 200000, 10, 1);
    CHECK(other.counts != a.counts);

    const SampleCounts single = sample_indices({0.0, 1.0, 0.0}, 1000, 3);
    CHECK(single.counts[1] == 1000);

    const DiscreteDistribution emp = empirical_quantum_heat(ens, a);
    CHECK(emp.size() == 4);
    CHECK(std::abs(emp.total() - 1.0) <= 1e-12);
    CHECK(std::abs(empirical_classical_heat(ens, a).total() - 1.0) <= 1e-12);
}
