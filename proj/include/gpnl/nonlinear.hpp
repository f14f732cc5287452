// SPDX-License-Identifier: Apache-2.0

#ifndef GPNL_NONLINEAR_HPP
#define GPNL_NONLINEAR_HPP

#include "gpnl/fock.hpp"

#include <map>
#include <optional>

namespace gpnl {

/// Fock-diagonal Kerr Hamiltonian: sum eta_i n_i^2 + sum mu_i n_i
/// (+ sum J_ij n_i n_j when cross terms are present).
struct DiagonalHamiltonian {
    Eigen::VectorXd eta;
    Eigen::VectorXd mu;
    std::optional<Eigen::MatrixXd> cross;
    bool integer_spectrum = false;
    double coefficient_bound = 0.0; // 0 = unchecked

    int modes() const { return int(mu.size()); }
    void validate() const;
};

double energy(const OccupationVector& occ, const DiagonalHamiltonian& h);

/// Exact integer energy; requires integer_spectrum.
long long energy_int(const OccupationVector& occ, const DiagonalHamiltonian& h);

/// Multiplies each basis amplitude by e^{+i t E(S)}.
StateVector kerr_evolve(const StateVector& state, const DiagonalHamiltonian& h, double t);

/// mu_j = N^2 (j <= N), eta_j = 1 (j <= N), mu_j = N^2 (N+2) (j > N).
/// Target |1...1 0...0> sits at the non-degenerate energy N (N^2 + 1).
DiagonalHamiltonian lemma1_hamiltonian(int photons, int modes);

struct NondegeneracyReport {
    bool unique = false;
    long long target_energy = 0;
    long long min_gap = 0; // gap to the nearest distinct competitor
    std::optional<OccupationVector> collision;
    std::size_t states_checked = 0;
};

/// Brute-force scan over all occupation vectors with total <= photon_bound.
NondegeneracyReport verify_nondegeneracy(const DiagonalHamiltonian& h,
                                         const OccupationVector& s_star, int photon_bound);

struct EnergySpectrum {
    std::map<long long, double> weights; // energy -> probability
    double deficit = 0.0;                // truncated tail mass, 1 - sum(weights)
    long long max_energy() const { return weights.empty() ? 0 : weights.rbegin()->first; }
};

/// Bins |amplitude|^2 of the state by integer Hamiltonian energy.
EnergySpectrum spectrum(const StateVector& state, const DiagonalHamiltonian& h);

std::string hamiltonian_to_json(const DiagonalHamiltonian& h);
DiagonalHamiltonian hamiltonian_from_json(const std::string& text);

} // namespace gpnl

#endif
