// SPDX-License-Identifier: Apache-2.0

#ifndef GPNL_GAUSSIAN_HPP
#define GPNL_GAUSSIAN_HPP

#include "gpnl/fock.hpp"

#include <cstdint>

namespace gpnl {

/// Pure Gaussian state parameters: D(alpha) U_L S(r) |0>.
struct GaussianSpec {
    int mode_count = 0;
    Eigen::VectorXd squeezings;       // r_l, length M
    Eigen::MatrixXcd interferometer;  // M x M unitary
    Eigen::VectorXcd displacements;   // alpha_m, length M

    static GaussianSpec vacuum(int modes);
    bool has_displacements() const;
    bool has_squeezing() const;
    void validate() const; // unitarity to 1e-10, finite parameters
};

/// Two-mode rotation T(theta, phi) on adjacent modes (m, m+1):
///   [[e^{i phi} cos(theta), -sin(theta)], [e^{i phi} sin(theta), cos(theta)]]
struct Rotation {
    int mode = 0; // acts on (mode, mode + 1)
    double theta = 0.0;
    double phi = 0.0;
    Eigen::Matrix2cd matrix() const;
};

/// Rectangular-mesh factorization U = diag(phases) * T_P * ... * T_1.
/// `rotations` is in application order: rotations[0] acts first on a ket.
struct InterferometerDecomposition {
    int mode_count = 0;
    std::vector<Rotation> rotations;
    Eigen::VectorXcd phases; // unit-modulus diagonal, applied last
    Eigen::MatrixXcd recompose() const;
};

Eigen::MatrixXcd haar_unitary(int modes, std::uint64_t seed);

InterferometerDecomposition clements_decompose(const Eigen::MatrixXcd& u);

/// Beamsplitter mode matrix exp(theta (e^{i phi} |i><j| - e^{-i phi} |j><i|)).
Eigen::Matrix2cd beamsplitter_unitary(double theta, double phi);

StateVector apply_interferometer(const StateVector& state, const Eigen::MatrixXcd& u);

/// Interferometer on a subset of modes (identity elsewhere); u is sized to
/// `modes.size()` and modes need not be adjacent.
StateVector apply_interferometer_on(const StateVector& state, const Eigen::MatrixXcd& u,
                                    const std::vector<int>& modes);

/// K squeezed vacua (closed-form even-photon coefficients) padded with vacua.
StateVector prepare_psi_in(int squeezer_count, double r, BasisPtr basis);

/// Single-mode squeezed-vacuum coefficient on |n>: 0 for odd n, otherwise
/// (-tanh r)^{n/2} sqrt(n!) / (2^{n/2} (n/2)!) / sqrt(cosh r).
double squeezed_vacuum_coefficient(double r, int n);

/// Coherent-state coefficients e^{-|a|^2/2} a^n / sqrt(n!), n = 0..cutoff.
Eigen::VectorXcd coherent_coefficients(Complex alpha, int cutoff);

// Truncated-generator matrix exponentials on cutoff + 1 Fock levels.
Eigen::MatrixXcd squeeze_matrix(double r, int cutoff);
Eigen::MatrixXcd displace_matrix(Complex alpha, int cutoff);
Eigen::MatrixXcd phase_matrix(double theta, int cutoff);

/// Squeeze -> interfere -> displace, on the given modes (default: all).
/// Accumulates truncation leakage from the non-number-conserving gates.
ApplyResult apply_gaussian(const StateVector& state, const GaussianSpec& spec,
                           const std::vector<int>& target_modes = {});

std::string unitary_to_json(const Eigen::MatrixXcd& u);
Eigen::MatrixXcd unitary_from_json(const std::string& text);

} // namespace gpnl

#endif
