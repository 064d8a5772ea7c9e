#include "qtraj/oracles.hpp"

#include "qtraj/error.hpp"

#include <cmath>
#include <numbers>

namespace qtraj {

void QubitParams::check() const {
    require(p >= 0.0 && p <= 1.0, ErrorKind::MixingOutOfRange, "p outside [0, 1]");
    require(std::abs(theta) <= std::numbers::pi / 2 + 1e-15 && std::abs(theta_tilde) <= std::numbers::pi / 2 + 1e-15,
            ErrorKind::ThetaOutOfRange, "angles must lie in [-pi/2, pi/2]");
    require(q1 > 0.0 && q1 < 1.0, ErrorKind::InvalidArgument, "q1 outside (0, 1)");
}

double QubitParams::coh() const {
    const double s = std::sin(theta_tilde / 2.0);
    return s * s;
}

double QubitParams::r() const {
    const double c = std::cos(theta_tilde / 2.0);
    const double s = std::sin(theta_tilde / 2.0);
    return p * c * c + (1.0 - p) * s * s;
}

double qubit_var_qheat(const QubitParams& params) {
    params.check();
    const double c = params.coh();
    return params.omega * params.omega * (c - c * c);
}

double qubit_var_clheat(double q1, double r, double omega) {
    return omega * omega * ((r - r * r) + (q1 - q1 * q1));
}

double qubit_var_clheat(const QubitParams& params) {
    params.check();
    return qubit_var_clheat(params.q1, params.r(), params.omega);
}

MomentTable brute_force_moments(const Matrix& rho_tilde, const RealVector& levels, double temperature,
                                int order) {
    const Eigen::Index d = levels.size();
    if (d > 5) fail(ErrorKind::DimensionTooLarge, "brute-force enumeration is limited to d <= 5");
    require(rho_tilde.rows() == d && rho_tilde.cols() == d, ErrorKind::DimensionMismatch,
            "brute_force_moments: sizes differ");
    require(order >= 2 && order <= 4, ErrorKind::InvalidArgument, "moment order must be 2, 3 or 4");
    require(temperature > 0.0, ErrorKind::NonpositiveTemperature, "temperature must be positive");

    const EigenSystem es = hermitian_eig(rho_tilde);
    std::vector<double> boltzmann(static_cast<std::size_t>(d));
    double z = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        boltzmann[static_cast<std::size_t>(k)] = std::exp(-levels(k) / temperature);
        z += boltzmann[static_cast<std::size_t>(k)];
    }

    MomentTable t{order, std::vector<double>(static_cast<std::size_t>(order), 0.0),
                  std::vector<double>(static_cast<std::size_t>(order), 0.0), 0, 0, 0, 0, 0, 0, 0};
    for (Eigen::Index l = 0; l < d; ++l) {
        const double pl = es.values(l);
        double el = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) el += levels(k) * std::norm(es.vectors(k, l));
        for (Eigen::Index m = 0; m < d; ++m) {
            const double overlap = std::norm(es.vectors(m, l));
            const double rm = rho_tilde(m, m).real();
            for (Eigen::Index n = 0; n < d; ++n) {
                const double qn = boltzmann[static_cast<std::size_t>(n)] / z;
                const double qm = boltzmann[static_cast<std::size_t>(m)] / z;
                const double prob = pl * overlap * qn;
                const double qq = levels(m) - el;
                const double qc = levels(n) - levels(m);
                t.total_probability += prob;
                double pq = 1.0, pc = 1.0;
                for (int k = 0; k < order; ++k) {
                    pq *= qq;
                    pc *= qc;
                    t.q_heat[static_cast<std::size_t>(k)] += prob * pq;
                    t.cl_heat[static_cast<std::size_t>(k)] += prob * pc;
                }
                if (prob > 0.0) {
                    t.mean_s_qu += prob * std::log(pl / rm);
                    t.mean_s_cl += prob * std::log(rm / qm);
                }
            }
        }
    }
    t.mean_q = t.q_heat[0];
    t.var_q = t.q_heat[1] - t.mean_q * t.mean_q;
    t.mean_cl = t.cl_heat[0];
    t.var_cl = t.cl_heat[1] - t.mean_cl * t.mean_cl;
    return t;
}

}  // namespace qtraj
