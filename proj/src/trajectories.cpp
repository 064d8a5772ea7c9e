#include "qtraj/trajectories.hpp"

#include "qtraj/error.hpp"
#include "qtraj/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace qtraj {

namespace {

constexpr double kQuiet = std::numeric_limits<double>::quiet_NaN();
constexpr double kSandwichSlack = 1e-12;
constexpr std::uint64_t kChunk = 65536;

}  // namespace

bool AugmentedTrajectory::zero_probability() const {
    return !(probability > std::numeric_limits<double>::min());
}

const AugmentedTrajectory& Step3Ensemble::at(int l, int m, int n) const {
    const int d = dim();
    return records[static_cast<std::size_t>((l * d + m) * d + n)];
}

double Step3Ensemble::total_probability() const {
    double s = 0.0;
    for (const auto& r : records) s += r.probability;
    return s;
}

RealMatrix Step3Ensemble::quantum_marginal() const {
    const int d = dim();
    RealMatrix out = RealMatrix::Zero(d, d);
    for (const auto& r : records) out(r.l, r.m) += r.probability;
    return out;
}

RealMatrix Step3Ensemble::classical_marginal() const {
    const int d = dim();
    RealMatrix out = RealMatrix::Zero(d, d);
    for (const auto& r : records) out(r.m, r.n) += r.probability;
    return out;
}

Step3Ensemble build_step3_ensemble(const DensityMatrix& rho_tilde, const HamiltonianSpec& h,
                                   double temperature) {
    require(rho_tilde.dim() == h.dim(), ErrorKind::DimensionMismatch,
            "build_step3_ensemble: state and Hamiltonian dimensions differ");
    Step3Ensemble ens{rho_tilde, h, temperature, {}, {}, {}, {}, {}, rho_tilde.degenerate(), {}};
    const int d = static_cast<int>(h.dim());
    ens.p = rho_tilde.eig().values.cwiseMax(0.0);
    ens.psi = rho_tilde.eig().vectors;
    ens.r = rho_tilde.populations();
    ens.q = thermal_populations(h, temperature);
    ens.psi_energy.resize(d);
    for (int l = 0; l < d; ++l) ens.psi_energy(l) = energy(h, Vector(ens.psi.col(l)));

    ens.records.reserve(static_cast<std::size_t>(d) * d * d);
    for (int l = 0; l < d; ++l) {
        for (int m = 0; m < d; ++m) {
            const double overlap = std::norm(ens.psi(m, l));
            const double gq = ens.p(l) * overlap;
            for (int n = 0; n < d; ++n) {
                AugmentedTrajectory rec{l, m, n, gq * ens.q(n), 0.0, 0.0, 0.0, 0.0};
                rec.q_heat = h.levels(m) - ens.psi_energy(l);
                rec.cl_heat = h.levels(n) - h.levels(m);
                if (rec.zero_probability()) {
                    rec.s_qu = kQuiet;
                    rec.s_cl = kQuiet;
                } else {
                    rec.s_qu = std::log(ens.p(l) / ens.r(m));
                    rec.s_cl = std::log(ens.r(m) / ens.q(m));
                }
                ens.records.push_back(rec);
            }
        }
    }
    return ens;
}

DiscreteDistribution DiscreteDistribution::from_weighted(const std::vector<Atom>& raw) {
    std::vector<Atom> sorted = raw;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Atom& a, const Atom& b) { return a.value < b.value; });
    DiscreteDistribution out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        Atom merged{sorted[i].value, 0.0};
        while (i < sorted.size() && sorted[i].value - merged.value <= merge_tolerance) {
            merged.probability += sorted[i].probability;
            ++i;
        }
        if (merged.probability >= drop_below) out.atoms_.push_back(merged);
    }
    return out;
}

double DiscreteDistribution::total() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.probability;
    return s;
}

double DiscreteDistribution::raw_moment(int k) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.probability * std::pow(a.value, k);
    return s;
}

double DiscreteDistribution::mean() const { return raw_moment(1); }

double DiscreteDistribution::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (const auto& a : atoms_) s += a.probability * (a.value - mu) * (a.value - mu);
    return s;
}

DiscreteDistribution quantum_heat_distribution(const Step3Ensemble& ens) {
    std::vector<Atom> raw;
    raw.reserve(ens.records.size());
    for (const auto& r : ens.records) raw.push_back({r.q_heat, r.probability});
    return DiscreteDistribution::from_weighted(raw);
}

DiscreteDistribution classical_heat_distribution(const Step3Ensemble& ens) {
    std::vector<Atom> raw;
    raw.reserve(ens.records.size());
    for (const auto& r : ens.records) raw.push_back({r.cl_heat, r.probability});
    return DiscreteDistribution::from_weighted(raw);
}

HeatVariances heat_variances(const Step3Ensemble& ens) {
    double var_qu = 0.0;
    for (int l = 0; l < ens.dim(); ++l)
        var_qu += ens.p(l) * observable_variance(ens.hamiltonian, Vector(ens.psi.col(l)));
    const DensityMatrix eta = decohere(ens.rho_tilde, ens.hamiltonian);
    const DensityMatrix tau = DensityMatrix::diagonal(ens.q);
    return {var_qu, observable_variance(ens.hamiltonian, eta) + observable_variance(ens.hamiltonian, tau)};
}

SandwichReport variance_sandwich(const DensityMatrix& rho_tilde, const HamiltonianSpec& h,
                                 const std::vector<double>& alphas) {
    SandwichReport rep{};
    rep.delta = observable_variance(h, rho_tilde);
    // The temperature does not enter the quantum heat statistics.
    rep.var_qu = heat_variances(build_step3_ensemble(rho_tilde, h, 1.0)).var_qu;
    rep.pure = std::abs((rho_tilde.matrix() * rho_tilde.matrix()).trace().real() - 1.0) <= 1e-10;
    rep.holds = rep.delta + kSandwichSlack >= rep.var_qu;
    rep.saturated = std::abs(rep.delta - rep.var_qu) <= kSandwichSlack;
    for (double a : alphas) {
        const double skew = skew_information(h, rho_tilde, a);
        rep.entries.push_back({a, skew});
        rep.holds = rep.holds && rep.var_qu >= skew - kSandwichSlack;
        rep.saturated = rep.saturated && std::abs(rep.var_qu - skew) <= kSandwichSlack;
    }
    return rep;
}

EntropyStats entropy_production_stats(const Step3Ensemble& ens) {
    EntropyStats st{0.0, 0.0, {}};
    std::vector<Atom> raw;
    for (const auto& r : ens.records) {
        if (r.zero_probability()) continue;
        st.avg_s_qu += r.probability * r.s_qu;
        st.avg_s_cl += r.probability * r.s_cl;
        raw.push_back({r.s_irr(), r.probability});
    }
    st.s_irr = DiscreteDistribution::from_weighted(raw);
    return st;
}

SwapBath::SwapBath(const HamiltonianSpec& h, double temperature)
    : dim(static_cast<int>(h.dim())), q(thermal_populations(h, temperature)) {
    const int d = dim;
    V = Matrix::Zero(d * d, d * d);
    // |e_m mu> -> |e_mu m>
    for (int m = 0; m < d; ++m)
        for (int mu = 0; mu < d; ++mu) V(mu * d + m, m * d + mu) = 1.0;
}

Matrix SwapBath::forward_kraus(int mu, int nu) const {
    const int d = dim;
    Matrix k(d, d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) k(n, m) = std::sqrt(q(mu)) * V(n * d + nu, m * d + mu);
    return k;
}

Matrix SwapBath::backward_kraus(int nu, int mu) const {
    const int d = dim;
    const Matrix vd = V.adjoint();
    Matrix k(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) k(m, n) = std::sqrt(q(nu)) * vd(m * d + mu, n * d + nu);
    return k;
}

double forward_probability_swap(const Step3Ensemble& ens, const SwapBath& bath, int l, int m, int n,
                                int mu, int nu) {
    const double decoherence = ens.p(l) * std::norm(ens.psi(m, l));
    return decoherence * std::norm(bath.forward_kraus(mu, nu)(n, m));
}

double backward_probability_swap(const Step3Ensemble& ens, const SwapBath& bath, int l, int m, int n,
                                 int mu, int nu) {
    // The reversed run starts in tau, undoes the swap and ends with a projection onto |psi_l>.
    const double start = ens.q(n);
    const double swap = std::norm(bath.backward_kraus(nu, mu)(m, n));
    return start * swap * std::norm(ens.psi(m, l));
}

double backward_probability_swap(const AugmentedTrajectory& rec, const Step3Ensemble& ens) {
    if (rec.zero_probability()) {
        std::ostringstream os;
        os << "record (" << rec.l << ", " << rec.m << ", " << rec.n << ") has zero probability";
        fail(ErrorKind::ZeroProbabilityRecord, os.str());
    }
    const SwapBath bath(ens.hamiltonian, ens.temperature);
    double total = 0.0;
    for (int mu = 0; mu < ens.dim(); ++mu)
        for (int nu = 0; nu < ens.dim(); ++nu)
            total += backward_probability_swap(ens, bath, rec.l, rec.m, rec.n, mu, nu);
    return total;
}

double integral_fluctuation_sum(const Step3Ensemble& ens) {
    double s = 0.0;
    for (const auto& r : ens.records)
        if (!r.zero_probability()) s += r.probability * std::exp(-r.s_irr());
    return s;
}

ClausiusReport clausius_report(const Step3Ensemble& ens) {
    ClausiusReport c{};
    for (const auto& r : ens.records) {
        c.avg_Q_cl += r.probability * r.cl_heat;
        if (!r.zero_probability()) c.avg_s_cl += r.probability * r.s_cl;
    }
    c.delta_S_cl = shannon_entropy(ens.q) - shannon_entropy(ens.r);
    c.Q_diss = ens.temperature * c.avg_s_cl;
    return c;
}

SampleCounts sample_indices(const std::vector<double>& probs, std::uint64_t count, std::uint64_t seed,
                            int workers) {
    require(!probs.empty(), ErrorKind::InvalidArgument, "nothing to sample from");
    require(count >= 1, ErrorKind::InvalidArgument, "sample count must be positive");
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += std::max(0.0, probs[i]);
        cdf[i] = acc;
    }
    require(acc > 0.0, ErrorKind::InvalidArgument, "probabilities sum to zero");
    std::size_t last = probs.size() - 1;
    while (last > 0 && !(probs[last] > 0.0)) --last;

    const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<std::vector<std::uint64_t>> per_chunk(chunks, std::vector<std::uint64_t>(probs.size(), 0));
    auto run_chunk = [&](std::uint64_t c) {
        Rng rng(splitmix64(seed ^ splitmix64(c + 1)));
        const std::uint64_t n = std::min(kChunk, count - c * kChunk);
        auto& out = per_chunk[c];
        for (std::uint64_t s = 0; s < n; ++s) {
            const double u = uniform01(rng) * acc;
            auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            ++out[std::min(idx, last)];
        }
    };

    const int w = std::max(1, std::min<int>(workers, static_cast<int>(chunks)));
    if (w == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < w; ++t)
            pool.emplace_back([&, t] {
                for (std::uint64_t c = static_cast<std::uint64_t>(t); c < chunks; c += static_cast<std::uint64_t>(w))
                    run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    SampleCounts result{count, std::vector<std::uint64_t>(probs.size(), 0)};
    for (const auto& chunk : per_chunk)
        for (std::size_t i = 0; i < chunk.size(); ++i) result.counts[i] += chunk[i];
    return result;
}

SampleCounts monte_carlo_sample(const Step3Ensemble& ens, std::uint64_t count, std::uint64_t seed, int workers) {
    std::vector<double> probs;
    probs.reserve(ens.records.size());
    for (const auto& r : ens.records) probs.push_back(r.probability);
    return sample_indices(probs, count, seed, workers);
}

namespace {
DiscreteDistribution empirical(const Step3Ensemble& ens, const SampleCounts& s, bool quantum) {
    std::vector<Atom> raw;
    for (std::size_t i = 0; i < ens.records.size(); ++i) {
        if (s.counts[i] == 0) continue;
        const auto& r = ens.records[i];
        raw.push_back({quantum ? r.q_heat : r.cl_heat,
                       static_cast<double>(s.counts[i]) / static_cast<double>(s.total)});
    }
    return DiscreteDistribution::from_weighted(raw);
}
}  // namespace

DiscreteDistribution empirical_quantum_heat(const Step3Ensemble& ens, const SampleCounts& s) {
    return empirical(ens, s, true);
}

DiscreteDistribution empirical_classical_heat(const Step3Ensemble& ens, const SampleCounts& s) {
    return empirical(ens, s, false);
}

}  // namespace qtraj
