// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gpnl/gbs.hpp"
#include "gpnl/hadamard.hpp"

#include <cmath>
#include <random>

using namespace gpnl;

namespace {

constexpr Complex kAlpha(0.8, 0.0);

GaussianSpec random_spec(int modes, std::uint64_t seed, bool with_displacements) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> rdist(0.1, 0.4);
    GaussianSpec spec = GaussianSpec::vacuum(modes);
    spec.interferometer = haar_unitary(modes, gen());
    for (int l = 0; l < modes; ++l) spec.squeezings[l] = rdist(gen);
    if (with_displacements) {
        std::uniform_real_distribution<double> ddist(-0.3, 0.3);
        for (int l = 0; l < modes; ++l)
            spec.displacements[l] = Complex(ddist(gen), ddist(gen));
    }
    return spec;
}

KerrUnitary random_kerr(int modes, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> cdist(0.0, 2.0);
    KerrUnitary v;
    v.hamiltonian.eta = Eigen::VectorXd::Zero(modes);
    v.hamiltonian.mu = Eigen::VectorXd::Zero(modes);
    for (int l = 0; l < modes; ++l) {
        v.hamiltonian.eta[l] = cdist(gen);
        v.hamiltonian.mu[l] = cdist(gen);
    }
    v.time = cdist(gen);
    v.sign = -1.0;
    return v;
}

// Direct assembly of |phi+>|0> + |phi->|Psi_G> from the components.
StateVector direct_lambda(const GaussianSpec& spec, Complex alpha, BasisPtr full_basis) {
    const int cutoff = full_basis->cutoff();
    const CatPair cats = cat_components(alpha, cutoff);
    BasisPtr sys_basis = make_basis(spec.mode_count, cutoff);
    const StateVector psi_g = apply_gaussian(vacuum_state(sys_basis), spec).state;
    StateVector a = tensor_with_ancilla(cats.plus.amplitudes, vacuum_state(sys_basis), full_basis);
    StateVector b = tensor_with_ancilla(cats.minus.amplitudes, psi_g, full_basis);
    a.amplitudes += b.amplitudes;
    return a;
}

} // namespace

TEST_CASE("cat components") {
    const int cutoff = 24;
    SUBCASE("zero amplitude collapses to the vacuum") {
        const CatPair cats = cat_components(Complex(0.0, 0.0), cutoff);
        CHECK(std::abs(cats.plus.amplitudes[0] - Complex(1.0, 0.0)) < 1e-14);
        CHECK(cats.minus.norm() == 0.0);
    }
    SUBCASE("coherent overlaps") {
        const double a2 = std::norm(kAlpha);
        const CatPair cats = cat_components(kAlpha, cutoff);
        const Eigen::VectorXcd coh = coherent_coefficients(kAlpha, cutoff);
        StateVector coherent{cats.plus.basis, coh};
        CHECK(std::abs(inner_product(coherent, cats.plus) -
                       Complex(std::exp(-a2) * std::cosh(a2), 0.0)) < 1e-12);
        CHECK(std::abs(inner_product(coherent, cats.minus) -
                       Complex(std::exp(-a2) * std::sinh(a2), 0.0)) < 1e-12);
    }
    SUBCASE("parity support, orthogonality, partition") {
        const CatPair cats = cat_components(kAlpha, cutoff);
        const Eigen::VectorXcd coh = coherent_coefficients(kAlpha, cutoff);
        for (int n = 0; n <= cutoff; ++n) {
            if (n % 2 == 0) CHECK(cats.minus.amplitudes[n] == Complex(0.0, 0.0));
            if (n % 2 == 1) CHECK(cats.plus.amplitudes[n] == Complex(0.0, 0.0));
            CHECK(std::abs(cats.plus.amplitudes[n] + cats.minus.amplitudes[n] - coh[n]) <
                  1e-14);
        }
        CHECK(inner_product(cats.plus, cats.minus) == Complex(0.0, 0.0));
        CHECK(cats.plus.squared_norm() + cats.minus.squared_norm() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("insufficient cutoff rejected") {
        CHECK_THROWS_AS((void)cat_components(Complex(3.0, 0.0), 4), std::invalid_argument);
    }
}

TEST_CASE("controlled phase gate") {
    BasisPtr basis = make_basis(3, 4); // ancilla + 2 system modes
    std::mt19937_64 gen(17);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd amps(Eigen::Index(basis->dimension()));
    for (Eigen::Index i = 0; i < amps.size(); ++i) amps[i] = Complex(g(gen), g(gen));
    amps /= amps.norm();
    StateVector v{basis, amps};

    SUBCASE("zero angle is the identity") {
        CHECK((controlled_phase(v, 0.0).amplitudes - v.amplitudes).norm() == 0.0);
    }
    SUBCASE("vacuum ancilla is a zero control") {
        StateVector s = basis_state(basis, OccupationVector({0, 1, 1}));
        CHECK((controlled_phase(s, 1.3).amplitudes - s.amplitudes).norm() < 1e-14);
    }
    SUBCASE("pi angle flips odd system totals under an excited ancilla") {
        StateVector even = basis_state(basis, OccupationVector({1, 1, 1}));
        StateVector odd = basis_state(basis, OccupationVector({1, 1, 0}));
        CHECK(std::abs(inner_product(even, controlled_phase(even, M_PI)) - Complex(1, 0)) <
              1e-14);
        CHECK(std::abs(inner_product(odd, controlled_phase(odd, M_PI)) - Complex(-1, 0)) <
              1e-14);
    }
    SUBCASE("norm preserved") {
        CHECK(std::abs(controlled_phase(v, 0.77).norm() - 1.0) < 1e-13);
    }
}

TEST_CASE("gadget circuit output") {
    const int cutoff = 30;
    SUBCASE("vacuum target leaves the ancilla coherent state alone") {
        BasisPtr full = make_basis(2, cutoff);
        HadamardInstance inst;
        inst.psi_g = GaussianSpec::vacuum(1);
        inst.psi_g_prime = inst.psi_g;
        inst.v = KerrUnitary{DiagonalHamiltonian{Eigen::VectorXd::Zero(1),
                                                 Eigen::VectorXd::Zero(1), std::nullopt, false,
                                                 0.0},
                             0.0, -1.0, std::nullopt};
        inst.alpha = kAlpha;
        ApplyResult lambda = prepare_lambda(inst, full);
        const Eigen::VectorXcd coh = coherent_coefficients(kAlpha, cutoff);
        StateVector expected =
            tensor_with_ancilla(coh, vacuum_state(make_basis(1, cutoff)), full);
        CHECK((lambda.state.amplitudes - expected.amplitudes).norm() < 1e-12);
        CHECK(lambda.leakage < 1e-12);
    }
    SUBCASE("squeezed two-mode target matches the direct assembly") {
        BasisPtr full = make_basis(3, cutoff);
        HadamardInstance inst;
        inst.psi_g = random_spec(2, 400, false);
        inst.psi_g_prime = inst.psi_g;
        inst.v = random_kerr(2, 401);
        inst.alpha = kAlpha;
        ApplyResult lambda = prepare_lambda(inst, full);
        StateVector expected = direct_lambda(inst.psi_g, kAlpha, full);
        CHECK((lambda.state.amplitudes - expected.amplitudes).norm() < 1e-8);
        CHECK(std::abs(lambda.state.norm() - 1.0) < lambda.leakage + 1e-8);
    }
    SUBCASE("displaced target matches the direct assembly") {
        BasisPtr full = make_basis(3, cutoff);
        HadamardInstance inst;
        inst.psi_g = random_spec(2, 402, true);
        inst.psi_g_prime = inst.psi_g;
        inst.v = random_kerr(2, 403);
        inst.alpha = kAlpha;
        ApplyResult lambda = prepare_lambda(inst, full);
        StateVector expected = direct_lambda(inst.psi_g, kAlpha, full);
        CHECK((lambda.state.amplitudes - expected.amplitudes).norm() < 1e-8);
    }
}

TEST_CASE("measured probabilities match the closed-form expansion") {
    const int cutoff = 22;
    const double a2 = std::norm(kAlpha);
    const double ch = std::cosh(a2), sh = std::sinh(a2);
    const double c = std::cos(a2), s = std::sin(a2);
    const double e2m = std::exp(-2.0 * a2);
    const double c1 = e2m * ch * ch, c2 = e2m * sh * sh, c3 = 2.0 * e2m * ch * sh;

    for (std::uint64_t seed = 600; seed < 620; ++seed) {
        BasisPtr full = make_basis(3, cutoff);
        BasisPtr sys = make_basis(2, cutoff);
        HadamardInstance inst;
        inst.psi_g = random_spec(2, seed, seed % 3 == 0);
        inst.psi_g_prime = random_spec(2, seed + 10000, false);
        inst.v = random_kerr(2, seed + 20000);
        inst.alpha = kAlpha;

        const HadamardProbabilities probs = hadamard_probabilities(inst, full, sys);

        const StateVector psi = apply_gaussian(vacuum_state(sys), inst.psi_g).state;
        const StateVector prime = apply_gaussian(vacuum_state(sys), inst.psi_g_prime).state;
        const Complex amp = inner_product(prime, apply_kerr_unitary(psi, inst.v));
        const Complex o = prime.amplitudes[0];            // <0|Psi'_G>
        const Complex z = o * amp;                        // <0|Psi'_G><Psi'_G|V|Psi_G>
        const double o2 = std::norm(o);
        const double vsq = std::norm(amp);

        const double p_real_closed = c1 * o2 + c2 * vsq + c3 * z.real();
        const double p_imag_closed = e2m * (c * c * o2 + s * s * vsq) - 2.0 * c * s * e2m * z.imag();
        CHECK(std::abs(probs.p_real - p_real_closed) < 1e-8);
        CHECK(std::abs(probs.p_imag - p_imag_closed) < 1e-8);

        // round trip through the recovery
        const RecoveredAmplitude rec =
            recover_amplitude(probs.p_real, probs.p_imag, std::conj(o), vsq, kAlpha);
        CHECK(std::abs(rec.value - amp) < 1e-6);
        CHECK(rec.conditioning < 10.0);
    }
}

TEST_CASE("recovery guards") {
    CHECK_THROWS_AS((void)recover_amplitude(0.5, 0.5, Complex(1, 0), 1.0, Complex(0.0, 0.0)),
                    std::invalid_argument);
    // |alpha|^2 = pi makes sin(|alpha|^2) vanish
    CHECK_THROWS_AS((void)recover_amplitude(0.5, 0.5, Complex(1, 0), 1.0,
                                            Complex(std::sqrt(M_PI), 0.0)),
                    std::invalid_argument);
}

TEST_CASE("amplitude estimation chain") {
    GbsInstance gbs;
    gbs.mode_count = 3;
    gbs.squeezer_count = 2;
    gbs.r = 0.3;
    gbs.unitary = haar_unitary(3, 71);
    const Gpnl1Instance inst =
        Gpnl1Instance::with_lemma1_hamiltonian(gbs, OccupationVector({1, 1, 0}));

    SUBCASE("zero time recovers unity") {
        const Theorem2Report rep = run_theorem2(inst, 0.0);
        CHECK(std::abs(rep.recovered - Complex(1.0, 0.0)) < 1e-6);
    }
    SUBCASE("generic time matches the direct overlap and bounds noise") {
        Theorem2Options options;
        options.noise_levels = {1e-4, 1e-6};
        const Theorem2Report rep = run_theorem2(inst, 0.7, options);
        CHECK(rep.abs_err < 1e-6);
        CHECK(std::abs(rep.p_real + rep.p_imag) <= 2.0);
        for (const NoisePropagation& np : rep.noise) {
            CHECK(np.max_delta_re > 0.0);
            CHECK(np.max_delta_re <= np.bound);
        }
    }
}
