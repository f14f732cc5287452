// SPDX-License-Identifier: Apache-2.0

#include "gpnl/gaussian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace gpnl {

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

void require_unitary(const Eigen::MatrixXcd& u, double tol, const char* who) {
    const Eigen::Index n = u.rows();
    if (u.cols() != n) throw std::invalid_argument(std::string(who) + ": matrix not square");
    const double err = max_abs(u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n));
    if (err > tol)
        throw std::invalid_argument(std::string(who) + ": matrix not unitary (deviation " +
                                    std::to_string(err) + ")");
}

} // namespace

GaussianSpec GaussianSpec::vacuum(int modes) {
    GaussianSpec spec;
    spec.mode_count = modes;
    spec.squeezings = Eigen::VectorXd::Zero(modes);
    spec.interferometer = Eigen::MatrixXcd::Identity(modes, modes);
    spec.displacements = Eigen::VectorXcd::Zero(modes);
    return spec;
}

bool GaussianSpec::has_displacements() const {
    return displacements.size() > 0 && displacements.cwiseAbs().maxCoeff() > 0.0;
}

bool GaussianSpec::has_squeezing() const {
    return squeezings.size() > 0 && squeezings.cwiseAbs().maxCoeff() > 0.0;
}

void GaussianSpec::validate() const {
    if (squeezings.size() != mode_count || displacements.size() != mode_count ||
        interferometer.rows() != mode_count || interferometer.cols() != mode_count)
        throw std::invalid_argument("GaussianSpec: inconsistent dimensions");
    if (!squeezings.allFinite() || !displacements.allFinite() || !interferometer.allFinite())
        throw std::invalid_argument("GaussianSpec: non-finite parameter");
    require_unitary(interferometer, 1e-10, "GaussianSpec");
}

Eigen::Matrix2cd Rotation::matrix() const {
    const Complex eip = std::polar(1.0, phi);
    const double c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix2cd t;
    t << eip * c, -s, eip * s, c;
    return t;
}

Eigen::MatrixXcd haar_unitary(int modes, std::uint64_t seed) {
    if (modes < 1) throw std::invalid_argument("haar_unitary: modes must be >= 1");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXcd ginibre(modes, modes);
    for (int i = 0; i < modes; ++i)
        for (int j = 0; j < modes; ++j) {
            const double re = dist(gen);
            const double im = dist(gen);
            ginibre(i, j) = Complex(re, im);
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix the gauge so R has positive real diagonal: U = Q diag(R_ii / |R_ii|)
    for (int i = 0; i < modes; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= d / std::abs(d);
    }
    return q;
}

InterferometerDecomposition clements_decompose(const Eigen::MatrixXcd& u_in) {
    require_unitary(u_in, 1e-10, "clements_decompose");
    const int m = int(u_in.rows());
    Eigen::MatrixXcd u = u_in;

    struct Step {
        int mode;
        double theta, phi;
    };
    std::vector<Step> right_steps; // applied as U <- U T^{-1}
    std::vector<Step> left_steps;  // applied as U <- T U

    auto t_matrix = [](double theta, double phi) {
        Rotation r;
        r.theta = theta;
        r.phi = phi;
        return r.matrix();
    };

    for (int i = 0; i < m - 1; ++i) {
        if (i % 2 == 0) {
            for (int j = 0; j <= i; ++j) {
                // null u(row, col) from the right with T^{-1} on modes (col, col+1)
                const int row = m - 1 - j;
                const int col = i - j;
                const Complex a = u(row, col);
                const Complex b = u(row, col + 1);
                double theta = 0.0, phi = 0.0;
                if (std::abs(a) > 0.0) {
                    theta = std::atan2(std::abs(a), std::abs(b));
                    phi = std::arg(a) - std::arg(b);
                }
                const Eigen::Matrix2cd tinv = t_matrix(theta, phi).adjoint();
                Eigen::MatrixXcd cols(m, 2);
                cols.col(0) = u.col(col);
                cols.col(1) = u.col(col + 1);
                u.col(col) = cols * tinv.col(0);
                u.col(col + 1) = cols * tinv.col(1);
                right_steps.push_back({col, theta, phi});
            }
        } else {
            for (int j = 0; j <= i; ++j) {
                // null u(row, col) from the left with T on modes (row-1, row)
                const int row = m - 1 - i + j;
                const int col = j;
                const Complex a = u(row - 1, col);
                const Complex b = u(row, col);
                double theta = 0.0, phi = 0.0;
                if (std::abs(b) > 0.0) {
                    theta = std::atan2(std::abs(b), std::abs(a));
                    phi = std::arg(b) - std::arg(a) + M_PI;
                }
                const Eigen::Matrix2cd t = t_matrix(theta, phi);
                Eigen::MatrixXcd rows(2, m);
                rows.row(0) = u.row(row - 1);
                rows.row(1) = u.row(row);
                u.row(row - 1) = t.row(0) * rows;
                u.row(row) = t.row(1) * rows;
                left_steps.push_back({row - 1, theta, phi});
            }
        }
    }

    // u is now diagonal: T_lq ... T_l1 U T_r1^{-1} ... T_rp^{-1} = D, so
    // U = T_l1^{-1} ... T_lq^{-1} D T_rp ... T_r1. Commute each T^{-1} through
    // the diagonal: T^{-1}(theta, phi) D = D' T(theta, phi') with
    //   phi' = arg(-d_m / d_n), d'_m = -e^{-i phi} d_n, d'_n = d_n.
    Eigen::VectorXcd diag(m);
    for (int i = 0; i < m; ++i) diag[i] = u(i, i);

    InterferometerDecomposition out;
    out.mode_count = m;
    for (const Step& s : right_steps) {
        Rotation r;
        r.mode = s.mode;
        r.theta = s.theta;
        r.phi = s.phi;
        out.rotations.push_back(r);
    }
    std::vector<Rotation> commuted;
    for (auto it = left_steps.rbegin(); it != left_steps.rend(); ++it) {
        const int a = it->mode, b = it->mode + 1;
        Rotation r;
        r.mode = it->mode;
        r.theta = it->theta;
        r.phi = std::arg(-diag[a] / diag[b]);
        const Complex da = -std::polar(1.0, -it->phi) * diag[b];
        diag[a] = da;
        commuted.push_back(r);
    }
    out.rotations.insert(out.rotations.end(), commuted.begin(), commuted.end());
    out.phases = diag;
    return out;
}

Eigen::MatrixXcd InterferometerDecomposition::recompose() const {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(mode_count, mode_count);
    for (const Rotation& r : rotations) {
        const Eigen::Matrix2cd t = r.matrix();
        Eigen::MatrixXcd rows(2, mode_count);
        rows.row(0) = acc.row(r.mode);
        rows.row(1) = acc.row(r.mode + 1);
        acc.row(r.mode) = t.row(0) * rows;
        acc.row(r.mode + 1) = t.row(1) * rows;
    }
    return phases.asDiagonal() * acc;
}

Eigen::Matrix2cd beamsplitter_unitary(double theta, double phi) {
    const Complex eip = std::polar(1.0, phi);
    Eigen::Matrix2cd v;
    v << std::cos(theta), eip * std::sin(theta), -std::conj(eip) * std::sin(theta),
        std::cos(theta);
    return v;
}

StateVector apply_interferometer(const StateVector& state, const Eigen::MatrixXcd& u) {
    if (u.rows() != state.basis->modes())
        throw std::invalid_argument("apply_interferometer: dimension mismatch");
    std::vector<int> modes(std::size_t(state.basis->modes()));
    for (int i = 0; i < state.basis->modes(); ++i) modes[std::size_t(i)] = i;
    return apply_interferometer_on(state, u, modes);
}

StateVector apply_interferometer_on(const StateVector& state, const Eigen::MatrixXcd& u,
                                    const std::vector<int>& modes) {
    if (u.rows() != Eigen::Index(modes.size()))
        throw std::invalid_argument("apply_interferometer_on: dimension mismatch");
    const InterferometerDecomposition dec = clements_decompose(u);
    StateVector s = state;
    for (const Rotation& r : dec.rotations) {
        if (r.theta == 0.0 && r.phi == 0.0) continue;
        s = apply_two_mode_unitary(s, r.matrix(), modes[std::size_t(r.mode)],
                                   modes[std::size_t(r.mode) + 1]);
    }
    std::vector<double> args(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) args[i] = std::arg(dec.phases[Eigen::Index(i)]);
    s = apply_diagonal_phase(s, [&](const OccupationVector& occ) {
        double phi = 0.0;
        for (std::size_t i = 0; i < modes.size(); ++i) phi += args[i] * occ[modes[i]];
        return phi;
    });
    return s;
}

double squeezed_vacuum_coefficient(double r, int n) {
    if (n % 2 != 0) return 0.0;
    const int half = n / 2;
    if (half == 0) return 1.0 / std::sqrt(std::cosh(r));
    // log of sqrt((2k)!) / (2^k k!)
    double lg = 0.5 * std::lgamma(double(n) + 1.0) - half * std::log(2.0) -
                std::lgamma(double(half) + 1.0);
    const double mag = std::exp(lg + half * std::log(std::tanh(std::abs(r)))) /
                       std::sqrt(std::cosh(r));
    const double sign = (r >= 0.0) ? ((half % 2 == 0) ? 1.0 : -1.0) : 1.0;
    return sign * mag;
}

StateVector prepare_psi_in(int squeezer_count, double r, BasisPtr basis) {
    const int modes = basis->modes();
    if (squeezer_count < 0 || squeezer_count > modes)
        throw std::invalid_argument("prepare_psi_in: need 0 <= K <= M");
    std::vector<double> coeff(std::size_t(basis->cutoff()) + 1);
    for (int n = 0; n <= basis->cutoff(); ++n) coeff[std::size_t(n)] = squeezed_vacuum_coefficient(r, n);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index(basis->dimension()));
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        const OccupationVector& s = basis->state_of(i);
        double a = 1.0;
        for (int m = 0; m < modes; ++m) {
            if (m < squeezer_count) {
                a *= coeff[std::size_t(s[m])];
            } else if (s[m] != 0) {
                a = 0.0;
            }
            if (a == 0.0) break;
        }
        amps[Eigen::Index(i)] = a;
    }
    return {std::move(basis), std::move(amps)};
}

Eigen::VectorXcd coherent_coefficients(Complex alpha, int cutoff) {
    Eigen::VectorXcd c(cutoff + 1);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= cutoff; ++n) c[n] = c[n - 1] * alpha / std::sqrt(double(n));
    return c;
}

namespace {

Eigen::MatrixXcd annihilation(int cutoff) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

} // namespace

Eigen::MatrixXcd squeeze_matrix(double r, int cutoff) {
    const Eigen::MatrixXcd a = annihilation(cutoff);
    const Eigen::MatrixXcd gen = 0.5 * r * (a * a - (a * a).adjoint());
    return gen.exp();
}

Eigen::MatrixXcd displace_matrix(Complex alpha, int cutoff) {
    const Eigen::MatrixXcd a = annihilation(cutoff);
    const Eigen::MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return gen.exp();
}

Eigen::MatrixXcd phase_matrix(double theta, int cutoff) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) m(n, n) = std::polar(1.0, theta * n);
    return m;
}

ApplyResult apply_gaussian(const StateVector& state, const GaussianSpec& spec,
                           const std::vector<int>& target_modes) {
    spec.validate();
    std::vector<int> modes = target_modes;
    if (modes.empty()) {
        modes.resize(std::size_t(spec.mode_count));
        for (int i = 0; i < spec.mode_count; ++i) modes[std::size_t(i)] = i;
    }
    if (int(modes.size()) != spec.mode_count)
        throw std::invalid_argument("apply_gaussian: target mode count mismatch");

    const int cutoff = state.basis->cutoff();
    ApplyResult acc{state, 0.0};
    for (int l = 0; l < spec.mode_count; ++l) {
        if (spec.squeezings[l] == 0.0) continue;
        ApplyResult step = apply_dense_operator(acc.state, squeeze_matrix(spec.squeezings[l], cutoff),
                                                {modes[std::size_t(l)]});
        acc.state = std::move(step.state);
        acc.leakage += step.leakage;
    }
    acc.state = apply_interferometer_on(acc.state, spec.interferometer, modes);
    for (int m = 0; m < spec.mode_count; ++m) {
        if (spec.displacements[m] == Complex(0.0, 0.0)) continue;
        ApplyResult step = apply_dense_operator(
            acc.state, displace_matrix(spec.displacements[m], cutoff), {modes[std::size_t(m)]});
        acc.state = std::move(step.state);
        acc.leakage += step.leakage;
    }
    return acc;
}

std::string unitary_to_json(const Eigen::MatrixXcd& u) {
    nlohmann::json j;
    j["m"] = u.rows();
    auto& re = j["re"] = nlohmann::json::array();
    auto& im = j["im"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        nlohmann::json row_re = nlohmann::json::array();
        nlohmann::json row_im = nlohmann::json::array();
        for (Eigen::Index k = 0; k < u.cols(); ++k) {
            row_re.push_back(u(i, k).real());
            row_im.push_back(u(i, k).imag());
        }
        re.push_back(std::move(row_re));
        im.push_back(std::move(row_im));
    }
    return j.dump();
}

Eigen::MatrixXcd unitary_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const int m = j.at("m").get<int>();
    Eigen::MatrixXcd u(m, m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            u(i, k) = Complex(j.at("re").at(i).at(k).get<double>(),
                              j.at("im").at(i).at(k).get<double>());
    return u;
}

} // namespace gpnl
