// SPDX-License-Identifier: Apache-2.0

#include "gpnl/fock.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gpnl {

int OccupationVector::total_photons() const {
    int total = 0;
    for (int s : occupations) total += s;
    return total;
}

bool OccupationVector::collision_free() const {
    for (int s : occupations)
        if (s != 0 && s != 1) return false;
    return true;
}

std::string OccupationVector::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < occupations.size(); ++i) {
        if (i) os << ',';
        os << occupations[i];
    }
    os << ')';
    return os.str();
}

double FockBasis::dimension_for(int modes, int cutoff) {
    // binomial(modes + cutoff, modes), computed in floating point for sizing
    double dim = 1.0;
    for (int i = 1; i <= modes; ++i) dim *= double(cutoff + i) / double(i);
    return dim;
}

FockBasis::FockBasis(int modes, int cutoff, std::size_t max_dimension)
    : modes_(modes), cutoff_(cutoff) {
    if (modes < 1) throw std::invalid_argument("FockBasis: modes must be >= 1");
    if (cutoff < 0) throw std::invalid_argument("FockBasis: cutoff must be >= 0");
    const double dim = dimension_for(modes, cutoff);
    if (dim > double(max_dimension)) {
        std::ostringstream os;
        os << "FockBasis: dimension " << std::llround(dim) << " for modes=" << modes
           << " cutoff=" << cutoff << " exceeds the configured limit " << max_dimension;
        throw std::runtime_error(os.str());
    }

    const int nmax = modes + cutoff;
    binom_.assign(std::size_t(nmax) + 1, {});
    for (int n = 0; n <= nmax; ++n) {
        binom_[std::size_t(n)].assign(std::size_t(n) + 1, 1);
        for (int k = 1; k < n; ++k)
            binom_[std::size_t(n)][std::size_t(k)] =
                binom_[std::size_t(n - 1)][std::size_t(k - 1)] + binom_[std::size_t(n - 1)][std::size_t(k)];
    }

    states_.reserve(std::size_t(dim));
    std::vector<int> occ(std::size_t(modes), 0);
    for (int total = 0; total <= cutoff; ++total) {
        // lexicographically first composition of `total`
        std::fill(occ.begin(), occ.end(), 0);
        occ.back() = total;
        while (true) {
            states_.emplace_back(occ);
            // lex successor: pull one photon left from the rightmost occupied
            // position >= 1, dump the remainder of that position at the end
            int last_nonzero = -1;
            for (int j = modes - 1; j >= 1; --j)
                if (occ[std::size_t(j)] > 0) { last_nonzero = j; break; }
            if (last_nonzero < 0) break; // all photons at position 0: last composition
            const int tail = occ[std::size_t(last_nonzero)] - 1;
            occ[std::size_t(last_nonzero)] = 0;
            occ[std::size_t(last_nonzero) - 1] += 1;
            occ[std::size_t(modes) - 1] += tail;
        }
    }
}

std::uint64_t FockBasis::binom(int n, int k) const {
    if (k < 0 || k > n) return 0;
    return binom_[std::size_t(n)][std::size_t(k)];
}

std::size_t FockBasis::sector_offset(int total) const {
    // number of states with fewer photons: binom(total + modes - 1, modes)
    return std::size_t(binom(total + modes_ - 1, modes_));
}

std::size_t FockBasis::sector_dimension(int total) const {
    return std::size_t(binom(total + modes_ - 1, modes_ - 1));
}

std::size_t FockBasis::index_of(const OccupationVector& occ) const {
    if (occ.modes() != modes_)
        throw std::invalid_argument("FockBasis::index_of: mode count mismatch");
    const int total = occ.total_photons();
    if (total > cutoff_)
        throw std::invalid_argument("FockBasis::index_of: state outside cutoff");
    // rank within the sector, lexicographic ascending on occupations
    std::size_t rank = 0;
    int remaining = total;
    for (int pos = 0; pos < modes_ - 1; ++pos) {
        const int s = occ[pos];
        for (int v = 0; v < s; ++v)
            rank += std::size_t(binom(remaining - v + modes_ - pos - 2, modes_ - pos - 2));
        remaining -= s;
    }
    return sector_offset(total) + rank;
}

BasisPtr make_basis(int modes, int cutoff, std::size_t max_dimension) {
    return std::make_shared<FockBasis>(modes, cutoff, max_dimension);
}

StateVector vacuum_state(BasisPtr basis) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index(basis->dimension()));
    amps[0] = 1.0;
    return {std::move(basis), std::move(amps)};
}

StateVector basis_state(BasisPtr basis, const OccupationVector& occ) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index(basis->dimension()));
    amps[Eigen::Index(basis->index_of(occ))] = 1.0;
    return {std::move(basis), std::move(amps)};
}

Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.basis.get() != b.basis.get() &&
        (a.basis->modes() != b.basis->modes() || a.basis->cutoff() != b.basis->cutoff()))
        throw std::invalid_argument("inner_product: basis mismatch");
    if (a.amplitudes.size() != b.amplitudes.size())
        throw std::invalid_argument("inner_product: dimension mismatch");
    return a.amplitudes.dot(b.amplitudes); // Eigen's dot conjugates the left argument
}

StateVector apply_diagonal_phase(const StateVector& state,
                                 const std::function<double(const OccupationVector&)>& phase_of) {
    const FockBasis& basis = *state.basis;
    Eigen::VectorXcd out(state.amplitudes.size());
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const double phi = phase_of(basis.state_of(i));
        out[Eigen::Index(i)] = state.amplitudes[Eigen::Index(i)] * std::polar(1.0, phi);
    }
    return {state.basis, std::move(out)};
}

ApplyResult apply_dense_operator(const StateVector& state, const Eigen::MatrixXcd& op,
                                 const std::vector<int>& target_modes) {
    const FockBasis& basis = *state.basis;
    const int levels = basis.cutoff() + 1;
    const std::size_t k = target_modes.size();
    if (k < 1 || k > 2)
        throw std::invalid_argument("apply_dense_operator: supports one or two target modes");
    std::size_t expected = 1;
    for (std::size_t i = 0; i < k; ++i) expected *= std::size_t(levels);
    if (std::size_t(op.rows()) != expected || std::size_t(op.cols()) != expected)
        throw std::invalid_argument("apply_dense_operator: operator dimension mismatch");
    for (int m : target_modes)
        if (m < 0 || m >= basis.modes())
            throw std::invalid_argument("apply_dense_operator: target mode out of range");

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.amplitudes.size());
    std::vector<int> occ;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const Complex amp = state.amplitudes[Eigen::Index(i)];
        if (amp == Complex(0.0, 0.0)) continue;
        const OccupationVector& s = basis.state_of(i);
        int in_index = 0;
        int on_targets = 0;
        for (std::size_t t = 0; t < k; ++t) {
            in_index = in_index * levels + s[target_modes[t]];
            on_targets += s[target_modes[t]];
        }
        const int elsewhere = s.total_photons() - on_targets;
        occ = s.occupations;
        // iterate output occupations on the target modes
        const int out_count = int(expected);
        for (int out_index = 0; out_index < out_count; ++out_index) {
            const Complex elem = op(out_index, in_index);
            if (elem == Complex(0.0, 0.0)) continue;
            int rem = out_index;
            int sum = 0;
            int vals[2] = {0, 0};
            for (int t = int(k) - 1; t >= 0; --t) {
                vals[t] = rem % levels;
                rem /= levels;
                sum += vals[t];
            }
            if (elsewhere + sum > basis.cutoff()) continue; // leaks past the cutoff
            for (std::size_t t = 0; t < k; ++t) occ[std::size_t(target_modes[t])] = vals[t];
            out[Eigen::Index(basis.index_of(OccupationVector(occ)))] += elem * amp;
        }
        occ = s.occupations;
    }
    const double leak = state.amplitudes.squaredNorm() - out.squaredNorm();
    return {StateVector{state.basis, std::move(out)}, leak};
}

StateVector apply_two_mode_unitary(const StateVector& state, const Eigen::Matrix2cd& v,
                                   int mode_i, int mode_j) {
    const FockBasis& basis = *state.basis;
    if (mode_i == mode_j || mode_i < 0 || mode_j < 0 || mode_i >= basis.modes() ||
        mode_j >= basis.modes())
        throw std::invalid_argument("apply_two_mode_unitary: bad mode pair");
    const int cutoff = basis.cutoff();

    // Sector lifts: lift[n] maps |k, n-k> -> sum_p coeff(p, k) |p, n-p>,
    //   coeff(p,k) = sum_{a+b=p} C(k,a) C(l,b) v00^a v10^(k-a) v01^b v11^(l-b)
    //                * sqrt(p! (n-p)!) / sqrt(k! l!),  l = n - k.
    std::vector<double> lfact(std::size_t(cutoff) + 1);
    lfact[0] = 0.0;
    for (int n = 1; n <= cutoff; ++n) lfact[std::size_t(n)] = lfact[std::size_t(n) - 1] + std::log(double(n));
    auto sqrt_fact_ratio = [&](int p, int q, int k, int l) {
        return std::exp(0.5 * (lfact[std::size_t(p)] + lfact[std::size_t(q)] -
                               lfact[std::size_t(k)] - lfact[std::size_t(l)]));
    };
    std::vector<Eigen::MatrixXcd> lift(std::size_t(cutoff) + 1);
    for (int n = 0; n <= cutoff; ++n) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
        for (int kk = 0; kk <= n; ++kk) {
            const int l = n - kk;
            // binomial-weighted powers
            for (int a = 0; a <= kk; ++a) {
                for (int b = 0; b <= l; ++b) {
                    const int p = a + b;
                    double cb = 1.0;
                    for (int t = 0; t < a; ++t) cb *= double(kk - t) / double(t + 1);
                    for (int t = 0; t < b; ++t) cb *= double(l - t) / double(t + 1);
                    const Complex w = std::pow(v(0, 0), a) * std::pow(v(1, 0), kk - a) *
                                      std::pow(v(0, 1), b) * std::pow(v(1, 1), l - b);
                    m(p, kk) += cb * w * sqrt_fact_ratio(p, n - p, kk, l);
                }
            }
        }
        lift[std::size_t(n)] = std::move(m);
    }

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.amplitudes.size());
    std::vector<int> occ;
    for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
        const Complex amp = state.amplitudes[Eigen::Index(idx)];
        if (amp == Complex(0.0, 0.0)) continue;
        const OccupationVector& s = basis.state_of(idx);
        const int kk = s[mode_i];
        const int n = kk + s[mode_j];
        const Eigen::MatrixXcd& m = lift[std::size_t(n)];
        occ = s.occupations;
        for (int p = 0; p <= n; ++p) {
            const Complex elem = m(p, kk);
            if (elem == Complex(0.0, 0.0)) continue;
            occ[std::size_t(mode_i)] = p;
            occ[std::size_t(mode_j)] = n - p;
            out[Eigen::Index(basis.index_of(OccupationVector(occ)))] += elem * amp;
        }
    }
    return {state.basis, std::move(out)};
}

std::vector<double> sector_norms(const StateVector& state) {
    const FockBasis& basis = *state.basis;
    std::vector<double> norms(std::size_t(basis.cutoff()) + 1, 0.0);
    for (std::size_t i = 0; i < basis.dimension(); ++i)
        norms[std::size_t(basis.state_of(i).total_photons())] +=
            std::norm(state.amplitudes[Eigen::Index(i)]);
    return norms;
}

std::string dump_state_json(const StateVector& state) {
    const FockBasis& basis = *state.basis;
    std::ostringstream os;
    os.precision(17);
    os << "{\"modes\": " << basis.modes() << ", \"cutoff\": " << basis.cutoff()
       << ", \"amplitudes\": [";
    bool first = true;
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const Complex a = state.amplitudes[Eigen::Index(i)];
        if (std::abs(a) <= 1e-15) continue;
        if (!first) os << ", ";
        first = false;
        os << "[[";
        const OccupationVector& s = basis.state_of(i);
        for (int m = 0; m < s.modes(); ++m) {
            if (m) os << ", ";
            os << s[m];
        }
        os << "], " << a.real() << ", " << a.imag() << "]";
    }
    os << "]}";
    return os.str();
}

} // namespace gpnl
