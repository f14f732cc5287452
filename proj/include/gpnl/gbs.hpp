// SPDX-License-Identifier: Apache-2.0

#ifndef GPNL_GBS_HPP
#define GPNL_GBS_HPP

#include "gpnl/fock.hpp"

namespace gpnl {

/// A GBS experiment: uniform squeezing r on the first K of M modes, then the
/// interferometer U, then photon counting.
struct GbsInstance {
    Eigen::MatrixXcd unitary;
    double r = 0.0;
    int squeezer_count = 0; // K
    int mode_count = 0;     // M

    void validate() const;
};

/// Matching-sum Hafnian of a symmetric complex matrix. Odd dimension gives 0,
/// the empty matrix gives 1. Recursive expansion over the matchings of the
/// first index, memoized on index bitmasks; fine up to the configured limit.
Complex hafnian(const Eigen::MatrixXcd& a, int dimension_limit = 20);

/// Exact outcome probability |Haf(B_S)|^2 / cosh^K(r) for a collision-free S,
/// with B = U_K tanh(r) U_K^T restricted to the occupied modes.
double gbs_probability(const GbsInstance& inst, const OccupationVector& outcome);

/// Probability of n photon pairs from K squeezers:
/// binom(K/2 + n - 1, n) sech^K(r) tanh^{2n}(r), Gamma binomial for odd K.
double pair_distribution(int squeezer_count, double r, int n);

/// Tail mass of the total-photon distribution above `cutoff` photons.
double squeezed_tail_mass(int squeezer_count, double r, int cutoff);

/// Smallest even cutoff with squeezed_tail_mass below the threshold.
int required_cutoff(int squeezer_count, double r, double tail_threshold);

struct ChernoffCutoffs {
    double n_star = 0.0;
    long long j_max = 0;
    double tail_bound = 0.0; // exp(-c N log N)
    bool applicable = false; // N^2 (N+2) > N*
};

ChernoffCutoffs chernoff_cutoffs(int squeezer_count, double r, int photons, double c);

struct ChernoffReport {
    double exact_tail = 0.0;
    double bound = 0.0; // beta = 1/2 expression
    bool ok = false;    // exact <= bound
};

ChernoffReport chernoff_check(int squeezer_count, double r, double n_star);

} // namespace gpnl

#endif
