#include "qtraj/protocol.hpp"

#include "qtraj/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qtraj {

namespace {

constexpr double kFullRank = 1e-14;
constexpr double kSpectrumMatch = 1e-10;
constexpr double kTerminalMatch = 1e-10;

HamiltonianSpec gauge_fixed(const RealVector& populations, double temperature) {
    RealVector e = -temperature * populations.array().log().matrix();
    e.array() -= e.mean();
    return HamiltonianSpec(e);
}

std::uint64_t checked_size(int d, int steps, std::uint64_t cap) {
    std::uint64_t size = 1;
    for (int k = 0; k < steps + 2; ++k) {
        size *= static_cast<std::uint64_t>(d);
        if (size > cap) {
            std::ostringstream os;
            os << "ensemble of " << d << "^" << steps + 2 << " records exceeds the cap of " << cap
               << "; use Monte Carlo sampling instead";
            fail(ErrorKind::EnsembleTooLarge, os.str());
        }
    }
    return size;
}

}  // namespace

double population_relative_entropy(const RealVector& a, const RealVector& b) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        if (a(k) <= tol::negligible_eigenvalue) continue;
        if (b(k) <= 0.0) return std::numeric_limits<double>::infinity();
        s += a(k) * std::log(a(k) / b(k));
    }
    return s;
}

std::vector<HamiltonianSpec> quasistatic_path(const RealVector& tau1, const RealVector& eta, int steps,
                                              double temperature) {
    require(steps >= 1, ErrorKind::InvalidArgument, "the protocol needs at least one thermalization step");
    require(tau1.size() == eta.size(), ErrorKind::DimensionMismatch, "quasistatic_path: sizes differ");
    for (Eigen::Index k = 0; k < eta.size(); ++k) {
        if (!(eta(k) > kFullRank) || !(tau1(k) > kFullRank)) {
            std::ostringstream os;
            os << "population " << k << " vanishes; no finite Hamiltonian reaches it";
            fail(ErrorKind::InfeasibleTerminal, os.str());
        }
    }
    std::vector<HamiltonianSpec> out;
    if (steps == 1) {
        if ((tau1 - eta).cwiseAbs().maxCoeff() > kTerminalMatch)
            fail(ErrorKind::InfeasibleTerminal, "with a single step tau_1 must already equal eta");
        return out;
    }
    const RealVector log_a = tau1.array().log().matrix();
    const RealVector log_b = eta.array().log().matrix();
    for (int i = 2; i <= steps; ++i) {
        const double s = static_cast<double>(i - 1) / static_cast<double>(steps - 1);
        RealVector q;
        if (i == steps) {
            q = eta / eta.sum();
        } else {
            RealVector lg = (1.0 - s) * log_a + s * log_b;
            lg.array() -= lg.maxCoeff();
            q = lg.array().exp().matrix();
            q /= q.sum();
        }
        out.push_back(gauge_fixed(q, temperature));
    }
    return out;
}

ProtocolSpec plan_protocol(const DensityMatrix& rho, const HamiltonianSpec& H0, double temperature,
                           const DensityMatrix& rho_tilde, const HamiltonianSpec& H1, int steps, bool analytic) {
    require(rho.dim() == H0.dim() && rho_tilde.dim() == H0.dim() && H1.dim() == H0.dim(),
            ErrorKind::DimensionMismatch, "plan_protocol: dimensions differ");
    require(steps >= 1, ErrorKind::InvalidArgument, "the protocol needs N >= 1");
    if (!(temperature > 0.0)) fail(ErrorKind::NonpositiveTemperature, "temperature must be positive");
    if (rho.eig().values.minCoeff() <= kFullRank) {
        std::ostringstream os;
        os << "state has eigenvalue " << rho.eig().values.minCoeff() << "; a full-rank state is required";
        fail(ErrorKind::RankDeficientState, os.str());
    }
    const double mismatch = (rho.eig().values - rho_tilde.eig().values).cwiseAbs().maxCoeff();
    if (mismatch > kSpectrumMatch) {
        std::ostringstream os;
        os << "rho and rho~ are not unitarily equivalent (spectra differ by " << mismatch << ")";
        fail(ErrorKind::InvalidArgument, os.str());
    }

    ProtocolSpec spec{rho, H0, temperature, rho_tilde, H1, steps, analytic, {}, {}};
    const RealVector tau1 = thermal_populations(H1, temperature);
    const RealVector eta = rho.populations();
    spec.path.push_back(H1);
    spec.populations.push_back(tau1);
    if (analytic) {
        // Only the endpoints matter in the quasistatic limit.
        for (Eigen::Index k = 0; k < eta.size(); ++k)
            if (!(eta(k) > kFullRank))
                fail(ErrorKind::InfeasibleTerminal, "eta is not full rank");
        spec.populations.push_back(eta);
        return spec;
    }
    for (auto& h : quasistatic_path(tau1, eta, steps, temperature)) {
        spec.populations.push_back(thermal_populations(h, temperature));
        spec.path.push_back(std::move(h));
    }
    return spec;
}

double qubit_gap_for_population(double q1, double temperature) {
    require(q1 > 0.0 && q1 < 1.0, ErrorKind::InvalidArgument, "ground population must lie in (0, 1)");
    return temperature * std::log(q1 / (1.0 - q1));
}

ProtocolSpec plan_qubit_protocol(double p, double theta, double theta_tilde, double q1, double temperature,
                                 double omega0, int steps, bool analytic) {
    const DensityMatrix rho = DensityMatrix::qubit_angle_state(p, theta);
    const DensityMatrix rho_tilde = DensityMatrix::qubit_angle_state(p, theta_tilde);
    const HamiltonianSpec H1 = HamiltonianSpec::qubit(qubit_gap_for_population(q1, temperature));
    return plan_protocol(rho, HamiltonianSpec::qubit(omega0), temperature, rho_tilde, H1, steps, analytic);
}

void for_each_protocol_record(const ProtocolSpec& spec, const std::function<void(const ProtocolRecord&)>& visit,
                              std::uint64_t cap) {
    require(!spec.analytic, ErrorKind::InvalidArgument, "the quasistatic limit has no finite trajectory ensemble");
    const int d = static_cast<int>(spec.H0.dim());
    const int N = spec.steps;
    checked_size(d, N, cap);

    const EigenSystem& e0 = spec.rho.eig();
    const EigenSystem& e1 = spec.rho_tilde.eig();
    const RealVector r_tilde = spec.rho_tilde.populations();
    RealVector u0(d), u1(d);
    for (int l = 0; l < d; ++l) {
        u0(l) = energy(spec.H0, Vector(e0.vectors.col(l)));
        u1(l) = energy(spec.H1, Vector(e1.vectors.col(l)));
    }
    const RealVector& q1 = spec.populations.front();

    ProtocolRecord rec{0, std::vector<int>(static_cast<std::size_t>(N + 1), 0), 0, 0, 0, 0, 0, 0, 0, 0};
    for (int l = 0; l < d; ++l) {
        const double pl = std::max(0.0, e1.values(l));
        std::fill(rec.n.begin(), rec.n.end(), 0);
        while (true) {
            rec.l = l;
            const int n0 = rec.n[0];
            double prob = pl * std::norm(e1.vectors(n0, l));
            for (int i = 1; i <= N; ++i) prob *= spec.populations[static_cast<std::size_t>(i - 1)](rec.n[static_cast<std::size_t>(i)]);
            rec.probability = prob;

            rec.delta_U = u0(l) - spec.H0.levels(rec.n[static_cast<std::size_t>(N)]);
            rec.q_heat = spec.H1.levels(n0) - u1(l);
            rec.cl_heat = spec.H1.levels(rec.n[1]) - spec.H1.levels(n0);
            rec.cl_heat_step4 = 0.0;
            rec.s_step4 = 0.0;
            for (int i = 2; i <= N; ++i) {
                const auto prev = static_cast<std::size_t>(rec.n[static_cast<std::size_t>(i - 1)]);
                const auto cur = static_cast<std::size_t>(rec.n[static_cast<std::size_t>(i)]);
                const HamiltonianSpec& h = spec.path[static_cast<std::size_t>(i - 1)];
                rec.cl_heat_step4 += h.levels(static_cast<Eigen::Index>(cur)) - h.levels(static_cast<Eigen::Index>(prev));
                rec.s_step4 += std::log(spec.populations[static_cast<std::size_t>(i - 2)](static_cast<Eigen::Index>(prev)) /
                                        spec.populations[static_cast<std::size_t>(i - 1)](static_cast<Eigen::Index>(prev)));
            }
            if (prob > std::numeric_limits<double>::min()) {
                rec.s_qu = std::log(pl / r_tilde(n0));
                rec.s_cl = std::log(r_tilde(n0) / q1(n0));
            } else {
                rec.s_qu = rec.s_cl = std::numeric_limits<double>::quiet_NaN();
            }
            visit(rec);

            // odometer over n_N fastest
            int pos = N;
            while (pos >= 0 && ++rec.n[static_cast<std::size_t>(pos)] == d) rec.n[static_cast<std::size_t>(pos--)] = 0;
            if (pos < 0) break;
        }
    }
}

std::vector<ProtocolRecord> full_trajectory_ensemble(const ProtocolSpec& spec, std::uint64_t cap) {
    std::vector<ProtocolRecord> out;
    for_each_protocol_record(spec, [&](const ProtocolRecord& r) { out.push_back(r); }, cap);
    return out;
}

double stochastic_work(const ProtocolRecord& rec) { return rec.work(); }

ProtocolAverages enumerate_protocol(const ProtocolSpec& spec, std::uint64_t cap) {
    ProtocolAverages a{};
    for_each_protocol_record(
        spec,
        [&](const ProtocolRecord& r) {
            a.total_probability += r.probability;
            a.avg_W_ext += r.probability * r.work();
            a.avg_delta_U += r.probability * r.delta_U;
            a.avg_Q_qu += r.probability * r.q_heat;
            if (r.probability > std::numeric_limits<double>::min()) {
                a.avg_s_qu += r.probability * r.s_qu;
                a.avg_s_cl += r.probability * r.s_cl;
                a.avg_s_step4 += r.probability * r.s_step4;
                a.fluctuation_sum += r.probability * std::exp(-r.s_irr());
            }
        },
        cap);
    return a;
}

ProtocolReport report(const ProtocolSpec& spec) {
    const double T = spec.temperature;
    const DensityMatrix eta_tilde = decohere(spec.rho_tilde, spec.H1);
    const RealVector& tau1 = spec.populations.front();
    const RealVector eta = spec.rho.populations();
    const double S_rho = von_neumann_entropy(spec.rho);
    const double S_rho_tilde = von_neumann_entropy(spec.rho_tilde);
    const double S_eta_tilde = von_neumann_entropy(eta_tilde);
    const double S_tau1 = shannon_entropy(tau1);
    const double S_eta = shannon_entropy(eta);

    ProtocolReport r{};
    r.delta_F_prot = -T * (S_eta - S_rho);
    r.avg_s_qu = relative_entropy(spec.rho_tilde, eta_tilde);
    r.avg_s_cl = population_relative_entropy(eta_tilde.populations(), tau1);
    r.delta_S_qu = S_eta_tilde - S_rho_tilde;
    r.delta_S_cl = S_tau1 - S_eta_tilde;
    r.delta_S_step4 = S_eta - S_tau1;
    r.delta_S_prot = S_eta - S_rho;
    r.avg_Q_cl_step3 = spec.H1.levels.dot(tau1 - eta_tilde.populations());
    if (spec.analytic) {
        r.avg_s_step4 = 0.0;
        r.avg_Q_cl_step4 = T * r.delta_S_step4;
    } else {
        for (std::size_t i = 1; i < spec.path.size(); ++i) {
            r.avg_s_step4 += population_relative_entropy(spec.populations[i - 1], spec.populations[i]);
            r.avg_Q_cl_step4 += spec.path[i].levels.dot(spec.populations[i] - spec.populations[i - 1]);
        }
    }
    // <Delta U> = tr[H0 (rho - eta)] vanishes and the quantum heat averages to zero.
    const double avg_delta_U = spec.H0.levels.dot(spec.rho.populations() - eta);
    r.avg_W_ext = avg_delta_U + r.avg_Q_cl_step3 + r.avg_Q_cl_step4;
    r.Q_diss = T * r.avg_s_cl;
    const double s_total = r.avg_s_qu + r.avg_s_cl + r.avg_s_step4;
    r.W_irr = T * s_total;
    r.footprint_residual = std::abs(r.avg_W_ext + r.delta_F_prot + T * s_total);
    r.degenerate = spec.rho_tilde.degenerate();
    return r;
}

}  // namespace qtraj
