// SPDX-License-Identifier: Apache-2.0

#include "gpnl/hadamard.hpp"

#include <cmath>
#include <stdexcept>

namespace gpnl {

void HadamardInstance::validate() const {
    psi_g.validate();
    psi_g_prime.validate();
    if (psi_g.mode_count != psi_g_prime.mode_count || v.modes() != psi_g.mode_count)
        throw std::invalid_argument("HadamardInstance: mode count mismatch");
    v.hamiltonian.validate();
    if (v.interferometer) {
        if (v.interferometer->rows() != psi_g.mode_count)
            throw std::invalid_argument("HadamardInstance: V interferometer dimension mismatch");
    }
}

CatPair cat_components(Complex alpha, int cutoff) {
    const Eigen::VectorXcd coh = coherent_coefficients(alpha, cutoff);
    if (std::abs(coh[cutoff]) > 1e-12)
        throw std::invalid_argument("cat_components: cutoff too small for |alpha|");
    BasisPtr basis = make_basis(1, cutoff);
    Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(cutoff + 1);
    Eigen::VectorXcd minus = Eigen::VectorXcd::Zero(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n)
        (n % 2 == 0 ? plus : minus)[n] = coh[n];
    return {StateVector{basis, std::move(plus)}, StateVector{basis, std::move(minus)}};
}

StateVector controlled_phase(const StateVector& state, double phi) {
    return apply_diagonal_phase(state, [phi](const OccupationVector& occ) {
        int system = 0;
        for (int m = 1; m < occ.modes(); ++m) system += occ[m];
        return -phi * occ[0] * system;
    });
}

StateVector tensor_with_ancilla(const Eigen::VectorXcd& ancilla_coefficients,
                                const StateVector& system, BasisPtr full_basis) {
    const FockBasis& full = *full_basis;
    const FockBasis& sys = *system.basis;
    if (full.modes() != sys.modes() + 1)
        throw std::invalid_argument("tensor_with_ancilla: basis mode counts inconsistent");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index(full.dimension()));
    std::vector<int> rest(std::size_t(sys.modes()));
    for (std::size_t i = 0; i < full.dimension(); ++i) {
        const OccupationVector& s = full.state_of(i);
        const int anc = s[0];
        if (anc >= ancilla_coefficients.size()) continue;
        int total = 0;
        for (int m = 0; m < sys.modes(); ++m) {
            rest[std::size_t(m)] = s[m + 1];
            total += s[m + 1];
        }
        if (total > sys.cutoff()) continue;
        const Complex sys_amp = system.amplitudes[Eigen::Index(sys.index_of(OccupationVector(rest)))];
        amps[Eigen::Index(i)] = ancilla_coefficients[anc] * sys_amp;
    }
    return {std::move(full_basis), std::move(amps)};
}

StateVector apply_kerr_unitary(const StateVector& state, const KerrUnitary& v) {
    const int system_modes = v.modes();
    const bool has_ancilla = state.basis->modes() == system_modes + 1;
    if (!has_ancilla && state.basis->modes() != system_modes)
        throw std::invalid_argument("apply_kerr_unitary: mode count mismatch");
    const int offset = has_ancilla ? 1 : 0;

    StateVector out = state;
    if (v.interferometer) {
        std::vector<int> modes(std::size_t(system_modes), 0);
        for (int m = 0; m < system_modes; ++m) modes[std::size_t(m)] = m + offset;
        out = apply_interferometer_on(out, *v.interferometer, modes);
    }
    const double phase_scale = v.sign * v.time;
    if (phase_scale != 0.0) {
        out = apply_diagonal_phase(out, [&](const OccupationVector& occ) {
            OccupationVector sys;
            sys.occupations.assign(occ.occupations.begin() + offset, occ.occupations.end());
            return phase_scale * energy(sys, v.hamiltonian);
        });
    }
    return out;
}

void validate_kerr_unitary(const KerrUnitary& v, BasisPtr system_basis) {
    // vacuum invariance
    StateVector vac = vacuum_state(system_basis);
    StateVector vac_out = apply_kerr_unitary(vac, v);
    if (std::abs(inner_product(vac, vac_out) - Complex(1.0, 0.0)) > 1e-12)
        throw std::invalid_argument("validate_kerr_unitary: V does not fix the vacuum");
    // photon-number conservation on a dense test state
    Eigen::VectorXcd amps(Eigen::Index(system_basis->dimension()));
    for (Eigen::Index i = 0; i < amps.size(); ++i)
        amps[i] = Complex(1.0 / std::sqrt(double(amps.size())), 0.0);
    StateVector probe{system_basis, std::move(amps)};
    const std::vector<double> before = sector_norms(probe);
    const std::vector<double> after = sector_norms(apply_kerr_unitary(probe, v));
    for (std::size_t n = 0; n < before.size(); ++n)
        if (std::abs(before[n] - after[n]) > 1e-12)
            throw std::invalid_argument("validate_kerr_unitary: V moves amplitude between photon sectors");
}

ApplyResult prepare_lambda(const HadamardInstance& inst, BasisPtr full_basis) {
    inst.validate();
    const int m = inst.system_modes();
    if (full_basis->modes() != m + 1)
        throw std::invalid_argument("prepare_lambda: full basis needs M + 1 modes");
    const int cutoff = full_basis->cutoff();

    const Eigen::VectorXcd coh = coherent_coefficients(inst.alpha, cutoff);
    StateVector state = tensor_with_ancilla(coh, vacuum_state(make_basis(m, cutoff)), full_basis);
    double leakage = 0.0;

    auto dense_on_system = [&](const Eigen::MatrixXcd& gate, int sys_mode) {
        ApplyResult step = apply_dense_operator(state, gate, {sys_mode + 1});
        state = std::move(step.state);
        leakage += step.leakage;
    };

    // controlled squeeze: S(r/2) U_CP(pi/2) S(-r/2)
    for (int l = 0; l < m; ++l)
        if (inst.psi_g.squeezings[l] != 0.0)
            dense_on_system(squeeze_matrix(-inst.psi_g.squeezings[l] / 2.0, cutoff), l);
    state = controlled_phase(state, M_PI / 2.0);
    for (int l = 0; l < m; ++l)
        if (inst.psi_g.squeezings[l] != 0.0)
            dense_on_system(squeeze_matrix(inst.psi_g.squeezings[l] / 2.0, cutoff), l);

    {
        std::vector<int> modes(std::size_t(m), 0);
        for (int i = 0; i < m; ++i) modes[std::size_t(i)] = i + 1;
        state = apply_interferometer_on(state, inst.psi_g.interferometer, modes);
    }

    // controlled displacement: D(a/2) U_CP(pi) D(-a/2), skipped when a = 0
    if (inst.psi_g.has_displacements()) {
        for (int l = 0; l < m; ++l)
            if (inst.psi_g.displacements[l] != Complex(0.0, 0.0))
                dense_on_system(displace_matrix(-inst.psi_g.displacements[l] / 2.0, cutoff), l);
        state = controlled_phase(state, M_PI);
        for (int l = 0; l < m; ++l)
            if (inst.psi_g.displacements[l] != Complex(0.0, 0.0))
                dense_on_system(displace_matrix(inst.psi_g.displacements[l] / 2.0, cutoff), l);
    }
    return {std::move(state), leakage};
}

HadamardProbabilities hadamard_probabilities(const HadamardInstance& inst, BasisPtr full_basis,
                                             BasisPtr system_basis) {
    validate_kerr_unitary(inst.v, system_basis);
    ApplyResult lambda = prepare_lambda(inst, full_basis);
    const StateVector ket = apply_kerr_unitary(lambda.state, inst.v);

    ApplyResult prime = apply_gaussian(vacuum_state(system_basis), inst.psi_g_prime);
    const Eigen::VectorXcd coh = coherent_coefficients(inst.alpha, full_basis->cutoff());
    const Eigen::VectorXcd coh_rotated =
        coherent_coefficients(Complex(0.0, -1.0) * inst.alpha, full_basis->cutoff());

    const StateVector bra_real = tensor_with_ancilla(coh, prime.state, full_basis);
    const StateVector bra_imag = tensor_with_ancilla(coh_rotated, prime.state, full_basis);

    HadamardProbabilities out;
    out.p_real = std::norm(inner_product(bra_real, ket));
    out.p_imag = std::norm(inner_product(bra_imag, ket));
    out.leakage = lambda.leakage + prime.leakage;
    return out;
}

RecoveredAmplitude recover_amplitude(double p_real, double p_imag, Complex overlap0, double vsq,
                                     Complex alpha, double margin) {
    const double a2 = std::norm(alpha);
    const double ch = std::cosh(a2), sh = std::sinh(a2);
    const double c = std::cos(a2), s = std::sin(a2);
    if (std::abs(alpha) < margin || std::abs(sh) < margin || std::abs(s) < margin ||
        std::abs(c) < margin)
        throw std::invalid_argument("recover_amplitude: near-singular inversion for this alpha");
    const double e2 = std::exp(2.0 * a2);
    const double o2 = std::norm(overlap0);

    const double re = e2 / (2.0 * ch * sh) * p_real - ch / (2.0 * sh) * o2 - sh / (2.0 * ch) * vsq;
    const double im = c / (2.0 * s) * o2 + s / (2.0 * c) * vsq - e2 / (2.0 * c * s) * p_imag;

    // z = <0|Psi'_G> <Psi'_G| V |Psi_G>
    const Complex z(re, im);
    const Complex vac_bra = std::conj(overlap0); // <0|Psi'_G>
    if (std::abs(vac_bra) < 1e-300)
        throw std::invalid_argument("recover_amplitude: vanishing vacuum overlap");
    RecoveredAmplitude out;
    out.value = z / vac_bra;
    out.conditioning =
        std::max(e2 / (2.0 * ch * sh), e2 / (2.0 * std::abs(c) * std::abs(s)));
    return out;
}

Theorem2Report run_theorem2(const Gpnl1Instance& inst, double t, const Theorem2Options& options) {
    inst.validate();
    const int m = inst.gbs.mode_count;
    const int k = inst.gbs.squeezer_count;
    const double r = inst.gbs.r;

    const double a2 = std::norm(options.alpha);
    int anc_cut = options.ancilla_cutoff;
    if (anc_cut <= 0) anc_cut = int(std::ceil(a2 + 10.0 * std::sqrt(a2) + 10.0));
    const int sys_cut = required_cutoff(k, r, options.tail_threshold);

    BasisPtr system_basis = make_basis(m, sys_cut + anc_cut);
    BasisPtr full_basis = make_basis(m + 1, sys_cut + anc_cut);

    HadamardInstance had;
    had.psi_g = GaussianSpec::vacuum(m);
    had.psi_g.interferometer = inst.gbs.unitary;
    for (int l = 0; l < k; ++l) had.psi_g.squeezings[l] = r;
    had.psi_g_prime = had.psi_g;
    had.v = KerrUnitary{inst.hamiltonian, t, -1.0, std::nullopt};
    had.alpha = options.alpha;

    Theorem2Report report;
    const HadamardProbabilities probs = hadamard_probabilities(had, full_basis, system_basis);
    report.p_real = probs.p_real;
    report.p_imag = probs.p_imag;
    report.leakage = probs.leakage;

    // independent ingredients, computed in the Fock engine
    ApplyResult psi = apply_gaussian(vacuum_state(system_basis), had.psi_g);
    const Complex overlap0 = std::conj(psi.state.amplitudes[0]); // <Psi'_G|0>
    const StateVector v_psi = apply_kerr_unitary(psi.state, had.v);
    const Complex direct_bra_v_ket = inner_product(psi.state, v_psi);
    const double vsq = std::norm(direct_bra_v_ket);

    const RecoveredAmplitude rec =
        recover_amplitude(probs.p_real, probs.p_imag, overlap0, vsq, options.alpha);
    // V = e^{-i t H}, so <Psi|V|Psi> = conj(A_t)
    report.recovered = std::conj(rec.value);
    report.conditioning = rec.conditioning;
    report.direct = std::conj(direct_bra_v_ket);
    report.abs_err = std::abs(report.recovered - report.direct);

    const double ch = std::cosh(a2), sh = std::sinh(a2);
    const double c2 = std::exp(-2.0 * a2) * sh * sh;
    const double c3 = std::exp(-2.0 * a2) * 2.0 * ch * sh;
    for (double eps : options.noise_levels) {
        NoisePropagation np;
        np.epsilon = eps;
        np.bound = (1.0 + c2) / c3 * std::exp(double(k) * r) * eps;
        for (int sa = -1; sa <= 1; sa += 2) {
            for (int sb = -1; sb <= 1; sb += 2) {
                const RecoveredAmplitude noisy =
                    recover_amplitude(probs.p_real + sa * eps, probs.p_imag, overlap0,
                                      vsq + sb * eps, options.alpha);
                np.max_delta_re = std::max(
                    np.max_delta_re, std::abs(noisy.value.real() - rec.value.real()));
            }
        }
        report.noise.push_back(np);
    }
    return report;
}

} // namespace gpnl
