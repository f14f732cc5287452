// SPDX-License-Identifier: Apache-2.0

#include "gpnl/gbs.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace gpnl {

void GbsInstance::validate() const {
    if (mode_count < 1 || squeezer_count < 0 || squeezer_count > mode_count)
        throw std::invalid_argument("GbsInstance: need 0 <= K <= M");
    if (!std::isfinite(r)) throw std::invalid_argument("GbsInstance: non-finite squeezing");
    if (unitary.rows() != mode_count || unitary.cols() != mode_count)
        throw std::invalid_argument("GbsInstance: unitary dimension mismatch");
    const double err = (unitary * unitary.adjoint() -
                        Eigen::MatrixXcd::Identity(mode_count, mode_count))
                           .cwiseAbs()
                           .maxCoeff();
    if (err > 1e-10) throw std::invalid_argument("GbsInstance: unitary deviation too large");
}

namespace {

Complex hafnian_masked(const Eigen::MatrixXcd& a, unsigned mask,
                       std::unordered_map<unsigned, Complex>& memo) {
    if (mask == 0) return Complex(1.0, 0.0);
    const auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const int i = __builtin_ctz(mask);
    const unsigned rest = mask & ~(1u << i);
    Complex sum(0.0, 0.0);
    for (unsigned bits = rest; bits != 0; bits &= bits - 1) {
        const int j = __builtin_ctz(bits);
        const Complex aij = a(i, j);
        if (aij != Complex(0.0, 0.0))
            sum += aij * hafnian_masked(a, rest & ~(1u << j), memo);
    }
    memo.emplace(mask, sum);
    return sum;
}

} // namespace

Complex hafnian(const Eigen::MatrixXcd& a, int dimension_limit) {
    const int n = int(a.rows());
    if (a.cols() != n) throw std::invalid_argument("hafnian: matrix not square");
    if (n > dimension_limit)
        throw std::invalid_argument("hafnian: dimension " + std::to_string(n) +
                                    " exceeds limit " + std::to_string(dimension_limit));
    if (n > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("hafnian: matrix not symmetric");
    if (n % 2 != 0) return Complex(0.0, 0.0);
    if (n == 0) return Complex(1.0, 0.0);
    std::unordered_map<unsigned, Complex> memo;
    return hafnian_masked(a, (n == 32) ? ~0u : ((1u << n) - 1u), memo);
}

double gbs_probability(const GbsInstance& inst, const OccupationVector& outcome) {
    inst.validate();
    if (outcome.modes() != inst.mode_count)
        throw std::invalid_argument("gbs_probability: outcome length mismatch");
    if (!outcome.collision_free())
        throw std::invalid_argument("gbs_probability: the Hafnian oracle covers collision-free outcomes only");
    const int photons = outcome.total_photons();
    if (photons % 2 != 0) return 0.0; // even photon parity of squeezed vacua

    const Eigen::MatrixXcd uk = inst.unitary.leftCols(inst.squeezer_count);
    const Eigen::MatrixXcd b = std::tanh(inst.r) * (uk * uk.transpose());
    Eigen::MatrixXcd bs(photons, photons);
    std::vector<int> occupied;
    for (int m = 0; m < inst.mode_count; ++m)
        if (outcome[m] == 1) occupied.push_back(m);
    for (std::size_t i = 0; i < occupied.size(); ++i)
        for (std::size_t j = 0; j < occupied.size(); ++j)
            bs(Eigen::Index(i), Eigen::Index(j)) = b(occupied[i], occupied[j]);
    const Complex haf = hafnian(bs);
    return std::norm(haf) / std::pow(std::cosh(inst.r), inst.squeezer_count);
}

double pair_distribution(int squeezer_count, double r, int n) {
    if (n < 0) throw std::invalid_argument("pair_distribution: n must be >= 0");
    if (squeezer_count < 1) throw std::invalid_argument("pair_distribution: K must be >= 1");
    const double half_k = 0.5 * squeezer_count;
    const double tanh_r = std::tanh(std::abs(r));
    const double log_binom =
        std::lgamma(half_k + n) - std::lgamma(double(n) + 1.0) - std::lgamma(half_k);
    double log_tanh_term = 0.0;
    if (n > 0) {
        if (tanh_r == 0.0) return 0.0;
        log_tanh_term = 2.0 * n * std::log(tanh_r);
    }
    return std::exp(log_binom + log_tanh_term +
                    squeezer_count * std::log(1.0 / std::cosh(r)));
}

double squeezed_tail_mass(int squeezer_count, double r, int cutoff) {
    double head = 0.0;
    for (int n = 0; 2 * n <= cutoff; ++n) head += pair_distribution(squeezer_count, r, n);
    return std::max(0.0, 1.0 - head);
}

int required_cutoff(int squeezer_count, double r, double tail_threshold) {
    for (int cutoff = 0; cutoff <= 512; cutoff += 2)
        if (squeezed_tail_mass(squeezer_count, r, cutoff) < tail_threshold) return cutoff;
    throw std::runtime_error("required_cutoff: no cutoff below 512 meets the tail threshold");
}

ChernoffCutoffs chernoff_cutoffs(int squeezer_count, double r, int photons, double c) {
    if (photons < 2) throw std::invalid_argument("chernoff_cutoffs: need N >= 2");
    if (c < 1.0) throw std::invalid_argument("chernoff_cutoffs: need c >= 1");
    const double n = photons;
    const double sinh2 = std::sinh(r) * std::sinh(r);
    ChernoffCutoffs out;
    out.n_star = (4.0 * sinh2 + 2.0) *
                 (0.5 * std::log(2.0) * squeezer_count + c * n * std::log(n));
    out.j_max = llround(n * n * n * n * (n + 2.0) * (n + 2.0));
    out.tail_bound = std::exp(-c * n * std::log(n));
    out.applicable = n * n * (n + 2.0) > out.n_star;
    return out;
}

ChernoffReport chernoff_check(int squeezer_count, double r, double n_star) {
    const double tanh2 = std::tanh(r) * std::tanh(r);
    if (tanh2 >= 1.0) throw std::invalid_argument("chernoff_check: need tanh^2(r) < 1");
    ChernoffReport out;
    // exact tail P(N' > N*), N' = 2 n pairs
    double tail = 0.0;
    for (int n = int(std::floor(n_star / 2.0)) + 1; n < 100000; ++n) {
        const double p = pair_distribution(squeezer_count, r, n);
        tail += p;
        if (p < 1e-300) break;
    }
    out.exact_tail = tail;
    const double sinh2 = std::sinh(r) * std::sinh(r);
    const double beta = 0.5;
    out.bound = std::pow(1.0 - beta, -0.5 * squeezer_count) *
                std::pow(1.0 + beta / sinh2, -0.5 * n_star);
    out.ok = out.exact_tail <= out.bound;
    return out;
}

} // namespace gpnl
