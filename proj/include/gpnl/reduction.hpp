// SPDX-License-Identifier: Apache-2.0

#ifndef GPNL_REDUCTION_HPP
#define GPNL_REDUCTION_HPP

#include "gpnl/gbs.hpp"
#include "gpnl/nonlinear.hpp"

namespace gpnl {

/// A GPNL(1) amplitude-estimation instance targeting one collision-free
/// GBS outcome.
struct Gpnl1Instance {
    GbsInstance gbs;
    DiagonalHamiltonian hamiltonian; // integer spectrum
    OccupationVector s_star;         // collision-free target outcome
    long long j_star = 0;            // always recomputed from energy(s_star)
    bool paper_regime = false;       // N < K < M requested

    /// Builds the non-degenerate Hamiltonian for the photon pattern of s_star
    /// and recomputes j_star.
    static Gpnl1Instance with_lemma1_hamiltonian(GbsInstance gbs, OccupationVector s_star);

    void validate() const;
};

/// Interferometer output U |Psi_in> with its truncation bookkeeping; shared
/// across all amplitude evaluations of one instance.
struct PreparedInstance {
    StateVector output;   // U |Psi_in>
    double input_tail;    // analytic tail mass of |Psi_in> above the cutoff
};

PreparedInstance prepare_instance(const Gpnl1Instance& inst, BasisPtr basis);

/// A_t = <Psi_in| U^dag e^{+i H t} U |Psi_in> in the truncated space.
Complex amplitude(const PreparedInstance& prep, const DiagonalHamiltonian& h, double t);

/// Spectral route A_t = sum_j p_j e^{i j t}; must agree with amplitude().
Complex amplitude_from_spectrum(const EnergySpectrum& spec, double t);

struct AmplitudeSeries {
    long long j_max = 0;
    std::vector<Complex> values; // values[k] = A_{2 pi k / j_max}
    double truncation_tail = 0.0;
};

AmplitudeSeries amplitude_series(const PreparedInstance& prep, const DiagonalHamiltonian& h,
                                 long long j_max, int threads = 1);

struct Reconstruction {
    double value = 0.0;         // Re Q
    double imag_residue = 0.0;  // |Im Q|, diagnostic
};

/// Q = (1/J) sum_k values[k] e^{-2 pi i k j*/J} = p_{j*} + aliasing mass.
Reconstruction reconstruct(const AmplitudeSeries& series, long long j_star);

struct Theorem1Report {
    long long j_max = 0;
    double q = 0.0;
    double p_oracle = 0.0;
    double abs_err = 0.0;
    double imag_residue = 0.0;
    double aliasing_mass = 0.0; // exact, from the truncated spectrum
    double lemma2_bound = 0.0;
    double truncation_tail = 0.0;
    bool regime_ok = false; // Lemma-2 applicability condition held
    bool used_fallback_j_max = false;
    bool pass = false; // |Q - P| <= aliasing mass + budget
};

struct Theorem1Options {
    double c = 1.0;
    double amplitude_error_budget = 1e-9;
    bool force_fallback_j_max = false; // J_max = 1 + max truncated energy
    int threads = 1;
};

Theorem1Report run_theorem1(const Gpnl1Instance& inst, BasisPtr basis,
                            const Theorem1Options& options = {});

} // namespace gpnl

#endif
