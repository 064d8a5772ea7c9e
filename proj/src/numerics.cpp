#include "qtraj/numerics.hpp"

#include "qtraj/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

namespace qtraj {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalStop = 1e-14;
constexpr double kPhaseComponentFloor = 1e-10;
constexpr double kOrderingTieTolerance = 1e-12;
constexpr double kUnitaryClusterTolerance = 1e-8;

double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j) sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

void require_square(const Matrix& a, const char* who) {
    require(a.rows() == a.cols() && a.rows() >= 1, ErrorKind::DimensionMismatch,
            std::string(who) + ": matrix must be square and non-empty");
}

// Rotate columns p, q of m by the 2x2 block j (m <- m * J).
void rotate_columns(Matrix& m, Eigen::Index p, Eigen::Index q, const Complex j[2][2]) {
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        const Complex mkp = m(k, p);
        const Complex mkq = m(k, q);
        m(k, p) = mkp * j[0][0] + mkq * j[1][0];
        m(k, q) = mkp * j[0][1] + mkq * j[1][1];
    }
}

// m <- J^dagger * m on rows p, q.
void rotate_rows(Matrix& m, Eigen::Index p, Eigen::Index q, const Complex j[2][2]) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
        const Complex mpk = m(p, k);
        const Complex mqk = m(q, k);
        m(p, k) = std::conj(j[0][0]) * mpk + std::conj(j[1][0]) * mqk;
        m(q, k) = std::conj(j[0][1]) * mpk + std::conj(j[1][1]) * mqk;
    }
}

void normalize_phase(Eigen::Ref<Vector> v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v(k));
        if (mag > kPhaseComponentFloor) {
            v *= std::conj(v(k)) / mag;
            v(k) = Complex(std::abs(v(k)), 0.0);
            return;
        }
    }
}

// Descending lexicographic order on (re, im) of successive components.
bool lexicographically_before(const Vector& a, const Vector& b) {
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        const double dr = a(k).real() - b(k).real();
        if (std::abs(dr) > kOrderingTieTolerance) return dr > 0;
        const double di = a(k).imag() - b(k).imag();
        if (std::abs(di) > kOrderingTieTolerance) return di > 0;
    }
    return false;
}

double principal_phase(Complex z) {
    double phi = std::arg(z);
    if (phi <= -std::numbers::pi + 1e-12) phi = std::numbers::pi;
    return phi;
}

}  // namespace

bool EigenSystem::degenerate() const {
    for (Eigen::Index i = 1; i < values.size(); ++i)
        if (std::abs(values(i) - values(i - 1)) <= tol::degenerate) return true;
    return false;
}

Matrix EigenSystem::reconstruct() const {
    return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

EigenSystem hermitian_eig(const Matrix& input) {
    require_square(input, "hermitian_eig");
    const double asym = hermiticity_residual(input);
    if (asym > tol::hermitian) {
        std::ostringstream os;
        os << "max |A - A^dagger| = " << asym << " exceeds " << tol::hermitian;
        fail(ErrorKind::NonHermitianInput, os.str());
    }

    const Eigen::Index d = input.rows();
    Matrix a = 0.5 * (input + input.adjoint());
    Matrix v = Matrix::Identity(d, d);
    const double scale = std::max(1.0, a.norm());

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) < kOffDiagonalStop * scale) break;
        for (Eigen::Index p = 0; p < d - 1; ++p) {
            for (Eigen::Index q = p + 1; q < d; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const Complex phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
                const Complex j[2][2] = {{Complex(c, 0.0), Complex(s, 0.0)},
                                         {-s * std::conj(phase), c * std::conj(phase)}};
                rotate_columns(a, p, q, j);
                rotate_rows(a, p, q, j);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                rotate_columns(v, p, q, j);
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return a(i, i).real() < a(j, j).real();
    });

    EigenSystem out;
    out.values.resize(d);
    out.vectors.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]).real();
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
        out.vectors.col(i).normalize();
        normalize_phase(out.vectors.col(i));
    }

    // Deterministic order inside degenerate clusters.
    Eigen::Index start = 0;
    while (start < d) {
        Eigen::Index end = start + 1;
        while (end < d && out.values(end) - out.values(end - 1) <= tol::degenerate) ++end;
        if (end - start > 1) {
            std::vector<std::pair<double, Vector>> cluster;
            for (Eigen::Index i = start; i < end; ++i)
                cluster.emplace_back(out.values(i), out.vectors.col(i));
            std::stable_sort(cluster.begin(), cluster.end(), [](const auto& x, const auto& y) {
                return lexicographically_before(x.second, y.second);
            });
            for (Eigen::Index i = start; i < end; ++i) {
                out.values(i) = cluster[static_cast<std::size_t>(i - start)].first;
                out.vectors.col(i) = cluster[static_cast<std::size_t>(i - start)].second;
            }
        }
        start = end;
    }
    return out;
}

Matrix matrix_function(const EigenSystem& eig, const std::function<double(double)>& f,
                       Positivity positivity) {
    const Eigen::Index d = eig.dim();
    RealVector fv(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double lambda = eig.values(i);
        if (positivity != Positivity::none && lambda <= tol::negligible_eigenvalue) {
            if (positivity == Positivity::strict) {
                std::ostringstream os;
                os << "eigenvalue " << lambda << " is not strictly positive";
                fail(ErrorKind::DomainError, os.str());
            }
            fv(i) = 0.0;
            continue;
        }
        fv(i) = f(lambda);
    }
    return eig.vectors * fv.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

Matrix matrix_function(const Matrix& a, const std::function<double(double)>& f,
                       Positivity positivity) {
    return matrix_function(hermitian_eig(a), f, positivity);
}

UnitarySpectrum unitary_spectrum(const Matrix& u) {
    require_square(u, "unitary_spectrum");
    const double res = unitarity_residual(u);
    if (res > tol::unitary) {
        std::ostringstream os;
        os << "max |U^dagger U - I| = " << res << " exceeds " << tol::unitary;
        fail(ErrorKind::NonUnitaryInput, os.str());
    }

    // U is normal, so its Hermitian and anti-Hermitian parts commute. Diagonalize
    // the cosine part, then split any degenerate cluster with the sine part.
    const Matrix cos_part = 0.5 * (u + u.adjoint());
    const Matrix sin_part = (u - u.adjoint()) / Complex(0.0, 2.0);
    const EigenSystem ec = hermitian_eig(cos_part);
    Matrix basis = ec.vectors;

    const Eigen::Index d = u.rows();
    Eigen::Index start = 0;
    while (start < d) {
        Eigen::Index end = start + 1;
        while (end < d && ec.values(end) - ec.values(end - 1) <= kUnitaryClusterTolerance) ++end;
        const Eigen::Index width = end - start;
        if (width > 1) {
            const Matrix block = basis.middleCols(start, width);
            Matrix restricted = block.adjoint() * sin_part * block;
            restricted = 0.5 * (restricted + restricted.adjoint());
            const EigenSystem es = hermitian_eig(restricted);
            basis.middleCols(start, width) = block * es.vectors;
        }
        start = end;
    }

    UnitarySpectrum out;
    out.vectors = basis;
    out.phases.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const Complex z = basis.col(i).dot(u * basis.col(i));
        out.phases(i) = principal_phase(z);
    }
    return out;
}

Matrix unitary_log_principal(const Matrix& u) {
    const UnitarySpectrum spec = unitary_spectrum(u);
    const Vector diag = spec.phases.cast<Complex>() * Complex(0.0, 1.0);
    return spec.vectors * diag.asDiagonal() * spec.vectors.adjoint();
}

Matrix exp_skew_hermitian(const Matrix& g) {
    require_square(g, "exp_skew_hermitian");
    const Matrix k = Complex(0.0, -1.0) * g;
    const EigenSystem eig = hermitian_eig(k);
    Vector diag(eig.dim());
    for (Eigen::Index i = 0; i < eig.dim(); ++i) diag(i) = std::polar(1.0, eig.values(i));
    return eig.vectors * diag.asDiagonal() * eig.vectors.adjoint();
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_residual(const Matrix& a) { return max_abs(a - a.adjoint()); }

double unitarity_residual(const Matrix& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(a.adjoint() * a - Matrix::Identity(a.rows(), a.cols()));
}

Matrix projector(const Vector& psi) { return psi * psi.adjoint(); }

Validation validate(const Matrix& a, MatrixKind kind) {
    Validation v;
    if (a.rows() != a.cols() || a.rows() == 0) {
        v.residual = std::numeric_limits<double>::infinity();
        v.diagnostic = "matrix is not square";
        return v;
    }
    std::ostringstream os;
    switch (kind) {
        case MatrixKind::hermitian:
            v.residual = hermiticity_residual(a);
            v.ok = v.residual <= tol::hermitian;
            if (!v.ok) os << "max |A - A^dagger| = " << v.residual;
            break;
        case MatrixKind::unitary:
            v.residual = unitarity_residual(a);
            v.ok = v.residual <= tol::unitary;
            if (!v.ok) os << "max |A^dagger A - I| = " << v.residual;
            break;
        case MatrixKind::density: {
            const double asym = hermiticity_residual(a);
            if (asym > tol::hermitian) {
                v.residual = asym;
                os << "not Hermitian: max |A - A^dagger| = " << asym;
                break;
            }
            const double trace_error = std::abs(a.trace() - Complex(1.0, 0.0));
            if (trace_error > tol::trace) {
                v.residual = trace_error;
                os << "trace differs from 1 by " << trace_error;
                break;
            }
            const double min_eig = hermitian_eig(a).values.minCoeff();
            if (min_eig < tol::min_eigenvalue) {
                v.residual = -min_eig;
                os << "negative eigenvalue " << min_eig;
                break;
            }
            v.ok = true;
            v.residual = std::max({asym, trace_error, std::max(0.0, -min_eig)});
            break;
        }
    }
    v.diagnostic = v.ok ? "ok" : os.str();
    return v;
}

}  // namespace qtraj
