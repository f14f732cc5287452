// SPDX-License-Identifier: Apache-2.0

#include "gpnl/nonlinear.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace gpnl {

namespace {

bool is_integral(double x) { return x == std::floor(x); }

void check_lengths(const OccupationVector& occ, const DiagonalHamiltonian& h) {
    if (occ.modes() != h.modes())
        throw std::invalid_argument("energy: occupation/Hamiltonian length mismatch");
}

} // namespace

void DiagonalHamiltonian::validate() const {
    if (eta.size() > mu.size())
        throw std::invalid_argument("DiagonalHamiltonian: eta longer than mu");
    if (cross && (cross->rows() != mu.size() || cross->cols() != mu.size()))
        throw std::invalid_argument("DiagonalHamiltonian: cross matrix dimension mismatch");
    if (cross && (*cross - cross->transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("DiagonalHamiltonian: cross matrix not symmetric");
    if (coefficient_bound > 0.0) {
        if (eta.size() > 0 && eta.cwiseAbs().maxCoeff() > coefficient_bound)
            throw std::invalid_argument("DiagonalHamiltonian: eta exceeds coefficient bound");
        if (mu.size() > 0 && mu.cwiseAbs().maxCoeff() > coefficient_bound)
            throw std::invalid_argument("DiagonalHamiltonian: mu exceeds coefficient bound");
    }
    if (integer_spectrum) {
        for (Eigen::Index i = 0; i < eta.size(); ++i)
            if (!is_integral(eta[i]) || eta[i] < 0.0)
                throw std::invalid_argument("DiagonalHamiltonian: integer_spectrum needs non-negative integer eta");
        for (Eigen::Index i = 0; i < mu.size(); ++i)
            if (!is_integral(mu[i]) || mu[i] < 0.0)
                throw std::invalid_argument("DiagonalHamiltonian: integer_spectrum needs non-negative integer mu");
        if (cross)
            for (Eigen::Index i = 0; i < cross->rows(); ++i)
                for (Eigen::Index j = 0; j < cross->cols(); ++j)
                    if (!is_integral((*cross)(i, j)))
                        throw std::invalid_argument("DiagonalHamiltonian: integer_spectrum needs integer cross terms");
    }
}

double energy(const OccupationVector& occ, const DiagonalHamiltonian& h) {
    check_lengths(occ, h);
    double e = 0.0;
    for (Eigen::Index i = 0; i < h.eta.size(); ++i)
        e += h.eta[i] * double(occ[int(i)]) * double(occ[int(i)]);
    for (Eigen::Index i = 0; i < h.mu.size(); ++i) e += h.mu[i] * double(occ[int(i)]);
    if (h.cross)
        for (Eigen::Index i = 0; i < h.cross->rows(); ++i)
            for (Eigen::Index j = 0; j < h.cross->cols(); ++j)
                e += (*h.cross)(i, j) * double(occ[int(i)]) * double(occ[int(j)]);
    return e;
}

long long energy_int(const OccupationVector& occ, const DiagonalHamiltonian& h) {
    check_lengths(occ, h);
    if (!h.integer_spectrum)
        throw std::invalid_argument("energy_int: Hamiltonian has no integer spectrum flag");
    long long e = 0;
    for (Eigen::Index i = 0; i < h.eta.size(); ++i)
        e += llround(h.eta[i]) * occ[int(i)] * occ[int(i)];
    for (Eigen::Index i = 0; i < h.mu.size(); ++i) e += llround(h.mu[i]) * occ[int(i)];
    if (h.cross)
        for (Eigen::Index i = 0; i < h.cross->rows(); ++i)
            for (Eigen::Index j = 0; j < h.cross->cols(); ++j)
                e += llround((*h.cross)(i, j)) * occ[int(i)] * occ[int(j)];
    return e;
}

StateVector kerr_evolve(const StateVector& state, const DiagonalHamiltonian& h, double t) {
    return apply_diagonal_phase(state,
                                [&](const OccupationVector& occ) { return t * energy(occ, h); });
}

DiagonalHamiltonian lemma1_hamiltonian(int photons, int modes) {
    if (photons < 1 || photons > modes)
        throw std::invalid_argument("lemma1_hamiltonian: need 1 <= N <= M");
    const double n = photons;
    DiagonalHamiltonian h;
    h.eta = Eigen::VectorXd::Zero(modes);
    h.mu = Eigen::VectorXd::Zero(modes);
    for (int j = 0; j < modes; ++j) {
        if (j < photons) {
            h.eta[j] = 1.0;
            h.mu[j] = n * n;
        } else {
            h.mu[j] = n * n * (n + 2.0);
        }
    }
    h.integer_spectrum = true;
    return h;
}

NondegeneracyReport verify_nondegeneracy(const DiagonalHamiltonian& h,
                                         const OccupationVector& s_star, int photon_bound) {
    h.validate();
    if (!h.integer_spectrum)
        throw std::invalid_argument("verify_nondegeneracy: integer spectrum required");
    const FockBasis scan(h.modes(), photon_bound);
    NondegeneracyReport report;
    report.target_energy = energy_int(s_star, h);
    report.unique = true;
    report.min_gap = 0;
    bool have_gap = false;
    for (std::size_t i = 0; i < scan.dimension(); ++i) {
        const OccupationVector& s = scan.state_of(i);
        const long long e = energy_int(s, h);
        if (s == s_star) continue;
        if (e == report.target_energy) {
            report.unique = false;
            if (!report.collision) report.collision = s;
        } else {
            const long long gap = std::llabs(e - report.target_energy);
            if (!have_gap || gap < report.min_gap) {
                report.min_gap = gap;
                have_gap = true;
            }
        }
    }
    report.states_checked = scan.dimension();
    return report;
}

EnergySpectrum spectrum(const StateVector& state, const DiagonalHamiltonian& h) {
    if (!h.integer_spectrum)
        throw std::invalid_argument("spectrum: integer spectrum required for exact binning");
    EnergySpectrum out;
    const FockBasis& basis = *state.basis;
    double total = 0.0;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const double w = std::norm(state.amplitudes[Eigen::Index(i)]);
        if (w == 0.0) continue;
        out.weights[energy_int(basis.state_of(i), h)] += w;
        total += w;
    }
    out.deficit = 1.0 - total;
    return out;
}

std::string hamiltonian_to_json(const DiagonalHamiltonian& h) {
    nlohmann::json j;
    j["eta"] = std::vector<double>(h.eta.data(), h.eta.data() + h.eta.size());
    j["mu"] = std::vector<double>(h.mu.data(), h.mu.data() + h.mu.size());
    if (h.cross) {
        auto& rows = j["cross"] = nlohmann::json::array();
        for (Eigen::Index i = 0; i < h.cross->rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < h.cross->cols(); ++k) row.push_back((*h.cross)(i, k));
            rows.push_back(std::move(row));
        }
    } else {
        j["cross"] = nullptr;
    }
    j["integer_spectrum"] = h.integer_spectrum;
    return j.dump();
}

DiagonalHamiltonian hamiltonian_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    DiagonalHamiltonian h;
    const auto eta = j.at("eta").get<std::vector<double>>();
    const auto mu = j.at("mu").get<std::vector<double>>();
    h.eta = Eigen::Map<const Eigen::VectorXd>(eta.data(), Eigen::Index(eta.size()));
    h.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), Eigen::Index(mu.size()));
    if (!j.at("cross").is_null()) {
        const auto rows = j.at("cross").get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd cross(rows.size(), rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t k = 0; k < rows.size(); ++k) cross(Eigen::Index(i), Eigen::Index(k)) = rows[i][k];
        h.cross = std::move(cross);
    }
    h.integer_spectrum = j.at("integer_spectrum").get<bool>();
    return h;
}

} // namespace gpnl
