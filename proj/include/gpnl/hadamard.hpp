// SPDX-License-Identifier: Apache-2.0

#ifndef GPNL_HADAMARD_HPP
#define GPNL_HADAMARD_HPP

#include "gpnl/gaussian.hpp"
#include "gpnl/nonlinear.hpp"
#include "gpnl/reduction.hpp"

namespace gpnl {

/// Number-conserving test unitary: optional interferometer followed by
/// e^{i sign t H}. Both factors conserve total photon number and fix vacuum.
struct KerrUnitary {
    DiagonalHamiltonian hamiltonian;
    double time = 0.0;
    double sign = 1.0; // +1 matches e^{+iHt}; -1 gives V = e^{-itH}
    std::optional<Eigen::MatrixXcd> interferometer;

    int modes() const { return hamiltonian.modes(); }
};

struct HadamardInstance {
    GaussianSpec psi_g;       // ket state
    GaussianSpec psi_g_prime; // bra state
    KerrUnitary v;
    Complex alpha;            // ancilla coherent amplitude

    int system_modes() const { return psi_g.mode_count; }
    void validate() const;
};

/// Subnormalized even/odd cat components of |alpha> on a single-mode basis.
struct CatPair {
    StateVector plus;
    StateVector minus;
};

CatPair cat_components(Complex alpha, int cutoff);

/// e^{-i phi n_0 (n_1 + ... + n_M)}; mode 0 is the ancilla.
StateVector controlled_phase(const StateVector& state, double phi);

/// |anc> (x) |sys> embedded into an (M+1)-mode basis (ancilla = mode 0);
/// components past the total-photon cutoff are dropped.
StateVector tensor_with_ancilla(const Eigen::VectorXcd& ancilla_coefficients,
                                const StateVector& system, BasisPtr full_basis);

/// Applies V to the system modes (1..M) of an (M+1)-mode state.
StateVector apply_kerr_unitary(const StateVector& state, const KerrUnitary& v);

/// Checks, on the given system basis, that V conserves photon number and
/// fixes the vacuum to 1e-12; throws otherwise.
void validate_kerr_unitary(const KerrUnitary& v, BasisPtr system_basis);

/// Controlled-squeeze / controlled-displacement gadget circuit acting on
/// |alpha>|0...0>; output is |phi+>|0> + |phi->|Psi_G> up to truncation.
ApplyResult prepare_lambda(const HadamardInstance& inst, BasisPtr full_basis);

struct HadamardProbabilities {
    double p_real = 0.0;
    double p_imag = 0.0; // ancilla post-selected on the pi/2-rotated coherent state
    double leakage = 0.0;
};

HadamardProbabilities hadamard_probabilities(const HadamardInstance& inst, BasisPtr full_basis,
                                             BasisPtr system_basis);

struct RecoveredAmplitude {
    Complex value;              // <Psi'_G| V |Psi_G>
    double conditioning = 0.0;  // worst coefficient magnification
};

/// Inverts the two measured probabilities into Re/Im of
/// <0|Psi'_G><Psi'_G|V|Psi_G>, then divides out the vacuum overlap.
/// overlap0 = <Psi'_G|0>; vsq = |<Psi'_G|V|Psi_G>|^2, estimated independently.
RecoveredAmplitude recover_amplitude(double p_real, double p_imag, Complex overlap0, double vsq,
                                     Complex alpha, double margin = 1e-3);

struct NoisePropagation {
    double epsilon = 0.0;
    double max_delta_re = 0.0; // worst-case over sign combinations
    double bound = 0.0;        // (1 + |c2|)/|c3| e^{K r} epsilon
};

struct Theorem2Report {
    double p_real = 0.0;
    double p_imag = 0.0;
    Complex recovered;  // A_t estimated through the Hadamard pipeline
    Complex direct;     // A_t from the Fock-space amplitude
    double abs_err = 0.0;
    double conditioning = 0.0;
    double leakage = 0.0;
    std::vector<NoisePropagation> noise;
};

struct Theorem2Options {
    Complex alpha = Complex(0.8, 0.0);
    int ancilla_cutoff = 0;           // 0 = sized from |alpha|^2
    double tail_threshold = 1e-10;    // system cutoff policy
    std::vector<double> noise_levels; // probability perturbations to propagate
};

/// Full Theorem-2 chain: Psi_G = Psi'_G = U |Psi_in>, V = e^{-i t H_NL},
/// Hadamard probabilities, amplitude recovery, noise propagation.
Theorem2Report run_theorem2(const Gpnl1Instance& inst, double t,
                            const Theorem2Options& options = {});

} // namespace gpnl

#endif
