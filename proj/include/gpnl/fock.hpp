// SPDX-License-Identifier: Apache-2.0

#ifndef GPNL_FOCK_HPP
#define GPNL_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace gpnl {

using Complex = std::complex<double>;

/// Photon occupation pattern S = (s_1, ..., s_M).
struct OccupationVector {
    std::vector<int> occupations;

    OccupationVector() = default;
    explicit OccupationVector(std::vector<int> occ) : occupations(std::move(occ)) {}

    int modes() const { return static_cast<int>(occupations.size()); }
    int total_photons() const;
    bool collision_free() const;

    int operator[](int i) const { return occupations[static_cast<std::size_t>(i)]; }
    bool operator==(const OccupationVector& other) const { return occupations == other.occupations; }
    std::string to_string() const;
};

/// Truncated multimode Fock basis: all occupation vectors with total photons
/// <= cutoff, ordered graded-lexicographically (by total, then lex on the
/// occupations). The ordering is fixed; dumps and tests rely on it.
class FockBasis {
public:
    FockBasis(int modes, int cutoff, std::size_t max_dimension = kDefaultMaxDimension);

    int modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    std::size_t dimension() const { return states_.size(); }

    const OccupationVector& state_of(std::size_t index) const { return states_[index]; }
    std::size_t index_of(const OccupationVector& occ) const;

    /// First dense index of the sector with the given total photon number.
    std::size_t sector_offset(int total) const;
    std::size_t sector_dimension(int total) const;

    static double dimension_for(int modes, int cutoff);

    static constexpr std::size_t kDefaultMaxDimension = 5'000'000;

private:
    int modes_;
    int cutoff_;
    std::vector<OccupationVector> states_;
    // binom_[n][k], n up to modes + cutoff
    std::vector<std::vector<std::uint64_t>> binom_;

    std::uint64_t binom(int n, int k) const;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr make_basis(int modes, int cutoff, std::size_t max_dimension = FockBasis::kDefaultMaxDimension);

/// Dense complex amplitudes over a FockBasis.
struct StateVector {
    BasisPtr basis;
    Eigen::VectorXcd amplitudes;

    StateVector() = default;
    StateVector(BasisPtr b, Eigen::VectorXcd a) : basis(std::move(b)), amplitudes(std::move(a)) {}

    double norm() const { return amplitudes.norm(); }
    double squared_norm() const { return amplitudes.squaredNorm(); }
};

StateVector vacuum_state(BasisPtr basis);
StateVector basis_state(BasisPtr basis, const OccupationVector& occ);

Complex inner_product(const StateVector& a, const StateVector& b);

StateVector apply_diagonal_phase(const StateVector& state,
                                 const std::function<double(const OccupationVector&)>& phase_of);

/// Result of a gate application that may push amplitude past the cutoff.
/// leakage = squared norm lost outside the retained basis; never renormalized.
struct ApplyResult {
    StateVector state;
    double leakage = 0.0;
};

/// Applies a dense operator to the tensor factor of one or two target modes.
/// op is indexed by the per-mode occupations in row-major order with
/// (cutoff + 1) levels per mode.
ApplyResult apply_dense_operator(const StateVector& state, const Eigen::MatrixXcd& op,
                                 const std::vector<int>& target_modes);

/// Applies the second-quantized lift of a 2x2 mode unitary to modes (i, j).
/// Number-conserving, so exact on the truncated space (zero leakage).
StateVector apply_two_mode_unitary(const StateVector& state, const Eigen::Matrix2cd& v,
                                   int mode_i, int mode_j);

/// Squared norm per total-photon sector, index = total photons.
std::vector<double> sector_norms(const StateVector& state);

/// JSON dump {"modes": M, "cutoff": N, "amplitudes": [[[occ...], re, im], ...]}
/// listing entries with |amplitude| > 1e-15.
std::string dump_state_json(const StateVector& state);

} // namespace gpnl

#endif
