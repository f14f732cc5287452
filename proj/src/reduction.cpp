// SPDX-License-Identifier: Apache-2.0

#include "gpnl/reduction.hpp"

#include "gpnl/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace gpnl {

Gpnl1Instance Gpnl1Instance::with_lemma1_hamiltonian(GbsInstance gbs, OccupationVector s_star) {
    if (!s_star.collision_free())
        throw std::invalid_argument("Gpnl1Instance: target outcome must be collision free");
    const int photons = s_star.total_photons();
    Gpnl1Instance inst;
    inst.hamiltonian = lemma1_hamiltonian(photons, gbs.mode_count);
    // lemma1_hamiltonian's coefficients assume the photons sit in the leading modes.
    for (int m = 0; m < photons; ++m)
        if (s_star[m] != 1)
            throw std::invalid_argument(
                "Gpnl1Instance: photons must occupy the leading modes of s_star");
    inst.gbs = std::move(gbs);
    inst.s_star = std::move(s_star);
    inst.j_star = energy_int(inst.s_star, inst.hamiltonian);
    inst.paper_regime =
        photons < inst.gbs.squeezer_count && inst.gbs.squeezer_count < inst.gbs.mode_count;
    return inst;
}

void Gpnl1Instance::validate() const {
    gbs.validate();
    hamiltonian.validate();
    if (!hamiltonian.integer_spectrum)
        throw std::invalid_argument("Gpnl1Instance: integer spectrum required");
    if (!s_star.collision_free())
        throw std::invalid_argument("Gpnl1Instance: target outcome must be collision free");
    if (j_star != energy_int(s_star, hamiltonian))
        throw std::invalid_argument("Gpnl1Instance: j_star does not match energy(s_star)");
    if (paper_regime) {
        const int photons = s_star.total_photons();
        if (!(photons < gbs.squeezer_count && gbs.squeezer_count < gbs.mode_count))
            throw std::invalid_argument("Gpnl1Instance: paper regime needs N < K < M");
    }
}

PreparedInstance prepare_instance(const Gpnl1Instance& inst, BasisPtr basis) {
    inst.validate();
    if (basis->modes() != inst.gbs.mode_count)
        throw std::invalid_argument("prepare_instance: basis mode count mismatch");
    const double tail =
        squeezed_tail_mass(inst.gbs.squeezer_count, inst.gbs.r, basis->cutoff());
    StateVector psi_in = prepare_psi_in(inst.gbs.squeezer_count, inst.gbs.r, basis);
    StateVector output = apply_interferometer(psi_in, inst.gbs.unitary);
    return {std::move(output), tail};
}

Complex amplitude(const PreparedInstance& prep, const DiagonalHamiltonian& h, double t) {
    const StateVector evolved = kerr_evolve(prep.output, h, t);
    return inner_product(prep.output, evolved);
}

Complex amplitude_from_spectrum(const EnergySpectrum& spec, double t) {
    Complex a(0.0, 0.0);
    for (const auto& [j, p] : spec.weights) a += p * std::polar(1.0, t * double(j));
    return a;
}

AmplitudeSeries amplitude_series(const PreparedInstance& prep, const DiagonalHamiltonian& h,
                                 long long j_max, int threads) {
    if (j_max < 1) throw std::invalid_argument("amplitude_series: need J_max >= 1");
    AmplitudeSeries series;
    series.j_max = j_max;
    series.values.assign(std::size_t(j_max), Complex(0.0, 0.0));
    series.truncation_tail = prep.input_tail;

    // Precompute |amplitude|^2 and energies once; each grid point is a phase sum.
    const FockBasis& basis = *prep.output.basis;
    std::vector<double> weight(basis.dimension());
    std::vector<double> ener(basis.dimension());
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        weight[i] = std::norm(prep.output.amplitudes[Eigen::Index(i)]);
        ener[i] = energy(basis.state_of(i), h);
    }

    auto worker = [&](long long begin, long long end) {
        for (long long k = begin; k < end; ++k) {
            const double t = 2.0 * M_PI * double(k) / double(j_max);
            Complex a(0.0, 0.0);
            for (std::size_t i = 0; i < weight.size(); ++i)
                if (weight[i] != 0.0) a += weight[i] * std::polar(1.0, t * ener[i]);
            series.values[std::size_t(k)] = a;
        }
    };

    const int n_threads = std::max(1, std::min<int>(threads, int(j_max)));
    if (n_threads == 1) {
        worker(0, j_max);
    } else {
        // disjoint index ranges, each thread writes its own slots
        std::vector<std::thread> pool;
        const long long chunk = (j_max + n_threads - 1) / n_threads;
        for (int w = 0; w < n_threads; ++w) {
            const long long begin = w * chunk;
            const long long end = std::min<long long>(j_max, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return series;
}

Reconstruction reconstruct(const AmplitudeSeries& series, long long j_star) {
    if (j_star < 0 || j_star >= series.j_max)
        throw std::invalid_argument("reconstruct: j_star out of range [0, J_max)");
    Complex q(0.0, 0.0);
    for (long long k = 0; k < series.j_max; ++k) {
        const double angle = -2.0 * M_PI * double(k) * double(j_star) / double(series.j_max);
        q += series.values[std::size_t(k)] * std::polar(1.0, angle);
    }
    q /= double(series.j_max);
    return {q.real(), std::abs(q.imag())};
}

Theorem1Report run_theorem1(const Gpnl1Instance& inst, BasisPtr basis,
                            const Theorem1Options& options) {
    inst.validate();
    const int photons = inst.s_star.total_photons();

    // Non-degeneracy gate: without it p_{j*} is not a single outcome probability.
    const NondegeneracyReport nondeg =
        verify_nondegeneracy(inst.hamiltonian, inst.s_star, photons + 3);
    if (!nondeg.unique)
        throw std::runtime_error("run_theorem1: degenerate target energy, colliding state " +
                                 nondeg.collision->to_string());

    const PreparedInstance prep = prepare_instance(inst, basis);
    const EnergySpectrum spec = spectrum(prep.output, inst.hamiltonian);

    const ChernoffCutoffs cutoffs =
        chernoff_cutoffs(inst.gbs.squeezer_count, inst.gbs.r, photons, options.c);

    Theorem1Report report;
    report.regime_ok = cutoffs.applicable;
    report.lemma2_bound = cutoffs.tail_bound;
    report.truncation_tail = prep.input_tail;
    if (cutoffs.applicable && !options.force_fallback_j_max) {
        report.j_max = cutoffs.j_max;
    } else {
        report.j_max = spec.max_energy() + 1; // no aliasing on the truncated space
        report.used_fallback_j_max = true;
    }

    const AmplitudeSeries series =
        amplitude_series(prep, inst.hamiltonian, report.j_max, options.threads);
    const Reconstruction rec = reconstruct(series, inst.j_star);
    report.q = rec.value;
    report.imag_residue = rec.imag_residue;

    report.p_oracle = gbs_probability(inst.gbs, inst.s_star);
    report.abs_err = std::abs(report.q - report.p_oracle);

    for (const auto& [j, p] : spec.weights)
        if (j > inst.j_star && (j - inst.j_star) % report.j_max == 0) report.aliasing_mass += p;

    report.pass = report.abs_err <=
                  report.aliasing_mass + options.amplitude_error_budget + report.truncation_tail;
    return report;
}

} // namespace gpnl
