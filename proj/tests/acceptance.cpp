// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: each numbered check prints exactly one PASS/FAIL line.
// Exit status is 0 only if every check passes. All tolerances are pinned
// here, in code.

#include "gpnl/gaussian.hpp"
#include "gpnl/gbs.hpp"
#include "gpnl/hadamard.hpp"
#include "gpnl/nonlinear.hpp"
#include "gpnl/reduction.hpp"
#include "gpnl/seeds.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gpnl;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s %d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Gpnl1Instance standard_instance(int photons, int squeezers, int modes, double r,
                                std::uint64_t haar_seed) {
    GbsInstance gbs;
    gbs.mode_count = modes;
    gbs.squeezer_count = squeezers;
    gbs.r = r;
    gbs.unitary = haar_unitary(modes, haar_seed);
    std::vector<int> occ(std::size_t(modes), 0);
    for (int i = 0; i < photons; ++i) occ[std::size_t(i)] = 1;
    return Gpnl1Instance::with_lemma1_hamiltonian(std::move(gbs), OccupationVector(occ));
}

// 1. Exact Hafnian oracle vs the Fock-space engine on 100 random instances.
void criterion_oracle_equivalence() {
    constexpr double kTol = 1e-8;
    constexpr double kTailThreshold = 1e-10;
    std::mt19937_64 gen(sub_seed(20260824, "acceptance-oracle"));
    double worst = 0.0;
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + int(gen() % 5); // 2..6
        const int k = 1 + int(gen() % std::uint64_t(std::min(3, m)));
        // larger mode counts get milder squeezing to keep the basis desk-sized
        const double r_max = m >= 6 ? 0.30 : (m == 5 ? 0.35 : 0.45);
        std::uniform_real_distribution<double> rdist(0.2, r_max);
        const double r = rdist(gen);
        const int photons = std::min(m, 2 * (1 + int(gen() % 2))); // 2 or 4, <= m
        std::vector<int> occ(std::size_t(m), 0);
        for (int i = 0; i < photons; ++i) occ[std::size_t(i)] = 1;
        std::shuffle(occ.begin(), occ.end(), gen);
        const OccupationVector outcome(occ);

        GbsInstance inst;
        inst.mode_count = m;
        inst.squeezer_count = k;
        inst.r = r;
        inst.unitary = haar_unitary(m, gen());
        const double p_haf = gbs_probability(inst, outcome);

        BasisPtr basis = make_basis(m, required_cutoff(k, r, kTailThreshold));
        StateVector out = apply_interferometer(prepare_psi_in(k, r, basis), inst.unitary);
        const double p_fock =
            std::norm(out.amplitudes[Eigen::Index(basis->index_of(outcome))]);
        worst = std::max(worst, std::abs(p_haf - p_fock));
        ++checked;
    }
    report(1, "matching-sum oracle agrees with the state-vector engine",
           checked == 100 && worst <= kTol,
           "100 instances, worst |dp| = " + fmt(worst) + ", tol 1e-8");
}

// 2. Closed-form pair distribution vs the prepared-state photon histogram.
void criterion_pair_distribution() {
    constexpr double kTol = 1e-12;
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k) {
        for (double r : {0.2, 0.5, 1.0}) {
            BasisPtr basis = make_basis(k, 26);
            const auto sector = sector_norms(prepare_psi_in(k, r, basis));
            for (int n = 0; n <= 10; ++n) {
                worst = std::max(worst, std::abs(sector[std::size_t(2 * n)] -
                                                 pair_distribution(k, r, n)));
                worst = std::max(worst, sector[std::size_t(2 * n + 1)]);
            }
        }
    }
    report(2, "photon-pair distribution matches the state histogram", worst <= kTol,
           "K in {1,2,3}, r in {0.2,0.5,1.0}, n <= 10, worst |dp| = " + fmt(worst) +
               ", tol 1e-12");
}

// 3. Exhaustive non-degeneracy sweep plus a degenerate negative control.
void criterion_nondegeneracy() {
    bool sweep_ok = true;
    long long min_gap = 1LL << 60;
    for (int n = 1; n <= 4; ++n) {
        for (int m = n; m <= 6; ++m) {
            std::vector<int> occ(std::size_t(m), 0);
            for (int i = 0; i < n; ++i) occ[std::size_t(i)] = 1;
            const NondegeneracyReport rep = verify_nondegeneracy(
                lemma1_hamiltonian(n, m), OccupationVector(occ), n + 3);
            sweep_ok = sweep_ok && rep.unique &&
                       rep.target_energy == (long long)n * (n * n + 1);
            min_gap = std::min(min_gap, rep.min_gap);
        }
    }
    DiagonalHamiltonian linear;
    linear.eta = Eigen::VectorXd::Zero(3);
    linear.mu = Eigen::VectorXd::Ones(3);
    linear.integer_spectrum = true;
    const NondegeneracyReport neg =
        verify_nondegeneracy(linear, OccupationVector({1, 1, 0}), 5);
    const bool control_ok = !neg.unique && neg.collision.has_value();
    report(3, "quadratic construction is non-degenerate; linear control is not",
           sweep_ok && control_ok,
           "N <= 4, M <= 6, photon bound N+3, min gap " + std::to_string(min_gap) +
               ", control collision found");
}

// 4. DFT reconstruction of a target outcome probability, ten unitaries.
void criterion_reconstruction() {
    constexpr double kBudget = 1e-9;
    constexpr double kFallbackTol = 1e-10;
    bool ok = true;
    double worst_err = 0.0, worst_fb = 0.0;
    long long j_max = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Gpnl1Instance inst = standard_instance(2, 3, 4, 0.4, 1000 + seed);
        BasisPtr basis = make_basis(4, required_cutoff(3, 0.4, 1e-10));
        Theorem1Options options;
        options.amplitude_error_budget = kBudget;
        const Theorem1Report rep = run_theorem1(inst, basis, options);
        j_max = rep.j_max;
        ok = ok && rep.j_max == 256 && rep.pass &&
             rep.abs_err <= rep.aliasing_mass + kBudget;
        worst_err = std::max(worst_err, rep.abs_err);

        Theorem1Options fallback = options;
        fallback.force_fallback_j_max = true;
        const Theorem1Report fb = run_theorem1(inst, basis, fallback);
        ok = ok && fb.abs_err <= kFallbackTol;
        worst_fb = std::max(worst_fb, fb.abs_err);
    }
    report(4, "grid reconstruction recovers the oracle probability", ok,
           "10 unitaries, J = " + std::to_string(j_max) + ", worst |Q-P| = " +
               fmt(worst_err) + " within aliasing + 1e-9; fallback worst " + fmt(worst_fb) +
               ", tol 1e-10");
}

// 5. Exponential tail bound over the full desk-scale grid.
void criterion_tail_bound() {
    int violations = 0, points = 0;
    for (int k = 1; k <= 3; ++k)
        for (double r : {0.2, 0.5, 1.0, 1.5})
            for (double n_star = 2.0; n_star <= 64.0; n_star *= 2.0) {
                ++points;
                if (!chernoff_check(k, r, n_star).ok) ++violations;
            }
    report(5, "exact pair-count tail never exceeds the analytic bound", violations == 0,
           std::to_string(points) + " grid points, " + std::to_string(violations) +
               " violations");
}

// 6. Amplitude noise of size eps moves the reconstructed value by at most eps.
void criterion_noise_propagation() {
    bool ok = true;
    double worst_ratio = 0.0;
    std::mt19937_64 gen(sub_seed(20260824, "acceptance-noise"));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    for (std::uint64_t seed : {2001u, 2002u, 2003u}) {
        const Gpnl1Instance inst = standard_instance(2, 3, 4, 0.4, seed);
        BasisPtr basis = make_basis(4, required_cutoff(3, 0.4, 1e-10));
        const PreparedInstance prep = prepare_instance(inst, basis);
        const AmplitudeSeries series = amplitude_series(prep, inst.hamiltonian, 256);
        const double q0 = reconstruct(series, inst.j_star).value;
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            // worst case: noise phasors aligned with the DFT kernel
            AmplitudeSeries adversarial = series;
            for (long long k = 0; k < 256; ++k)
                adversarial.values[std::size_t(k)] += std::polar(
                    eps, 2.0 * M_PI * double(k) * double(inst.j_star) / 256.0);
            AmplitudeSeries random_noise = series;
            for (auto& v : random_noise.values) v += std::polar(eps, phase(gen));
            for (const AmplitudeSeries* s : {&adversarial, &random_noise}) {
                const double delta = std::abs(reconstruct(*s, inst.j_star).value - q0);
                ok = ok && delta <= eps * (1.0 + 1e-9);
                worst_ratio = std::max(worst_ratio, delta / eps);
            }
        }
    }
    report(6, "reconstruction error grows at most linearly in amplitude noise", ok,
           "eps in {1e-4,1e-6,1e-8}, worst |dQ|/eps = " + fmt(worst_ratio) + " <= 1");
}

// 7. Twenty interferometric round trips through the ancilla-assisted circuit.
void criterion_hadamard_roundtrip() {
    constexpr double kAmpTol = 1e-6;
    constexpr double kStateTol = 1e-8;
    const Complex alpha(0.8, 0.0);
    const double a2 = std::norm(alpha);
    const double ch = std::cosh(a2), sh = std::sinh(a2);
    const double e2m = std::exp(-2.0 * a2);
    const double c1 = e2m * ch * ch, c2 = e2m * sh * sh, c3 = 2.0 * e2m * ch * sh;
    const int cutoff = 34;

    bool ok = true;
    double worst_amp = 0.0, worst_state = 0.0, worst_prob = 0.0;
    std::mt19937_64 gen(sub_seed(20260824, "acceptance-hadamard"));
    std::uniform_real_distribution<double> rdist(0.1, 0.4), cdist(0.0, 2.0),
        ddist(-0.25, 0.25);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + int(gen() % 2); // 2..3
        GaussianSpec spec = GaussianSpec::vacuum(m);
        spec.interferometer = haar_unitary(m, gen());
        for (int l = 0; l < m; ++l) spec.squeezings[l] = rdist(gen);
        if (trial % 4 == 0)
            for (int l = 0; l < m; ++l) spec.displacements[l] = Complex(ddist(gen), 0.0);

        KerrUnitary v;
        v.hamiltonian.eta = Eigen::VectorXd::Zero(m);
        v.hamiltonian.mu = Eigen::VectorXd::Zero(m);
        for (int l = 0; l < m; ++l) {
            v.hamiltonian.eta[l] = cdist(gen);
            v.hamiltonian.mu[l] = cdist(gen);
        }
        v.time = cdist(gen);
        v.sign = -1.0;

        HadamardInstance inst;
        inst.psi_g = spec;
        inst.psi_g_prime = spec;
        inst.v = v;
        inst.alpha = alpha;

        BasisPtr full = make_basis(m + 1, cutoff);
        BasisPtr sys = make_basis(m, cutoff);

        // circuit output vs direct assembly of the superposed branches
        const ApplyResult lambda = prepare_lambda(inst, full);
        const CatPair cats = cat_components(alpha, cutoff);
        const StateVector psi = apply_gaussian(vacuum_state(sys), spec).state;
        StateVector expected =
            tensor_with_ancilla(cats.plus.amplitudes, vacuum_state(sys), full);
        expected.amplitudes +=
            tensor_with_ancilla(cats.minus.amplitudes, psi, full).amplitudes;
        const double state_err = (lambda.state.amplitudes - expected.amplitudes).norm();
        worst_state = std::max(worst_state, state_err);

        // measured probability vs the closed-form expansion
        const HadamardProbabilities probs = hadamard_probabilities(inst, full, sys);
        const Complex amp = inner_product(psi, apply_kerr_unitary(psi, v));
        const Complex o = psi.amplitudes[0];
        const double p_closed =
            c1 * std::norm(o) + c2 * std::norm(amp) + c3 * (o * amp).real();
        worst_prob = std::max(worst_prob, std::abs(probs.p_real - p_closed));

        // full recovery of the complex amplitude
        const RecoveredAmplitude rec = recover_amplitude(
            probs.p_real, probs.p_imag, std::conj(o), std::norm(amp), alpha);
        worst_amp = std::max(worst_amp, std::abs(rec.value - amp));
    }
    ok = worst_amp <= kAmpTol && worst_state <= kStateTol && worst_prob <= kStateTol;
    report(7, "ancilla-assisted circuit recovers complex overlaps", ok,
           "20 instances, worst amplitude err " + fmt(worst_amp) +
               " (tol 1e-6), state err " + fmt(worst_state) + ", probability err " +
               fmt(worst_prob) + " (tol 1e-8)");
}

// 8. Full estimation chain against the direct amplitude, with noise scaling.
void criterion_estimation_chain() {
    constexpr double kTol = 1e-6;
    bool ok = true;
    double worst_err = 0.0, worst_margin = 0.0;
    for (std::uint64_t seed : {71u, 72u, 73u}) {
        const Gpnl1Instance inst = standard_instance(2, 2, 3, 0.3, seed);
        Theorem2Options options;
        options.noise_levels = {1e-4, 1e-6};
        const Theorem2Report rep = run_theorem2(inst, 0.7, options);
        ok = ok && rep.abs_err <= kTol;
        worst_err = std::max(worst_err, rep.abs_err);
        for (const NoisePropagation& np : rep.noise) {
            ok = ok && np.max_delta_re <= np.bound;
            worst_margin = std::max(worst_margin, np.max_delta_re / np.bound);
        }
    }
    report(8, "estimation chain matches the direct amplitude and bounds noise", ok,
           "worst |recovered - direct| = " + fmt(worst_err) +
               " (tol 1e-6), worst noise usage " + fmt(worst_margin) + " of bound");
}

// 9. Byte-identical batch results across reruns and thread counts.
void criterion_determinism(const std::string& cli_path) {
    if (cli_path.empty()) {
        report(9, "batch runs are byte-identical across reruns and thread counts", false,
               "runner binary path not supplied");
        return;
    }
    const fs::path base = fs::temp_directory_path() / "gpnl-acceptance";
    fs::remove_all(base);
    std::vector<std::string> outputs;
    for (const auto& [tag, threads] :
         {std::pair<const char*, int>{"a", 1}, {"b", 1}, {"c", 4}}) {
        const fs::path out = base / tag;
        std::ostringstream cmd;
        cmd << cli_path << " verify-all --seed 424242 --threads " << threads << " --out "
            << out << " >/dev/null 2>&1";
        if (std::system(cmd.str().c_str()) != 0) {
            report(9, "batch runs are byte-identical across reruns and thread counts",
                   false, "runner exited nonzero");
            return;
        }
        std::ifstream f(out / "result.json", std::ios::binary);
        std::ostringstream buf;
        buf << f.rdbuf();
        outputs.push_back(buf.str());
    }
    const bool ok = !outputs[0].empty() && outputs[0] == outputs[1] &&
                    outputs[0] == outputs[2];
    report(9, "batch runs are byte-identical across reruns and thread counts", ok,
           "3 runs, seed 424242, threads {1,1,4}, " +
               std::to_string(outputs[0].size()) + " bytes each");
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";
    criterion_oracle_equivalence();
    criterion_pair_distribution();
    criterion_nondegeneracy();
    criterion_reconstruction();
    criterion_tail_bound();
    criterion_noise_propagation();
    criterion_hadamard_roundtrip();
    criterion_estimation_chain();
    criterion_determinism(cli_path);
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
