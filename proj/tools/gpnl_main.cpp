// SPDX-License-Identifier: Apache-2.0

#include "gpnl/gaussian.hpp"
#include "gpnl/gbs.hpp"
#include "gpnl/hadamard.hpp"
#include "gpnl/nonlinear.hpp"
#include "gpnl/reduction.hpp"
#include "gpnl/seeds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ExperimentConfig {
    std::string experiment = "verify-all";
    int m = 4;
    int k = 3;
    int n = 2;
    double r = 0.4;
    double c = 1.0;
    double alpha = 0.8;
    double t = 0.7;
    std::uint64_t seed = 1;
    // cutoff policy: exactly one of the two
    int cutoff = 0;               // explicit total-photon cutoff (0 = unset)
    double tail_threshold = 0.0;  // 0 = unset
    std::string out = "results";
    double tolerance_scale = 1.0;
    int threads = 1;
    bool csv = false;
};

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
    ExperimentConfig cfg;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("experiment", cfg.experiment);
    get("m", cfg.m);
    get("k", cfg.k);
    get("n", cfg.n);
    get("r", cfg.r);
    get("c", cfg.c);
    get("alpha", cfg.alpha);
    get("t", cfg.t);
    get("seed", cfg.seed);
    get("cutoff", cfg.cutoff);
    get("tail_threshold", cfg.tail_threshold);
    get("out", cfg.out);
    get("tolerance_scale", cfg.tolerance_scale);
    get("threads", cfg.threads);
    get("csv", cfg.csv);
    if (cfg.cutoff > 0 && cfg.tail_threshold > 0.0)
        throw std::runtime_error("config: set either cutoff or tail_threshold, not both");
    if (cfg.tolerance_scale <= 0.0) throw std::runtime_error("config: tolerance_scale must be positive");
    return cfg;
}

void apply_env_overrides(ExperimentConfig& cfg) {
    auto env_u64 = [](const char* name, std::uint64_t& field) {
        if (const char* v = std::getenv(name)) field = std::strtoull(v, nullptr, 10);
    };
    auto env_str = [](const char* name, std::string& field) {
        if (const char* v = std::getenv(name)) field = v;
    };
    auto env_double = [](const char* name, double& field) {
        if (const char* v = std::getenv(name)) field = std::strtod(v, nullptr);
    };
    auto env_int = [](const char* name, int& field) {
        if (const char* v = std::getenv(name)) field = int(std::strtol(v, nullptr, 10));
    };
    env_u64("GPNL_SEED", cfg.seed);
    env_str("GPNL_OUT", cfg.out);
    env_double("GPNL_TOLERANCE_SCALE", cfg.tolerance_scale);
    env_int("GPNL_THREADS", cfg.threads);
}

int resolve_cutoff(const ExperimentConfig& cfg, int squeezers, double r) {
    if (cfg.cutoff > 0) return cfg.cutoff;
    const double threshold = cfg.tail_threshold > 0.0 ? cfg.tail_threshold : 1e-10;
    return gpnl::required_cutoff(squeezers, r, threshold);
}

gpnl::Gpnl1Instance make_instance(const ExperimentConfig& cfg, std::uint64_t haar_seed) {
    gpnl::GbsInstance gbs;
    gbs.mode_count = cfg.m;
    gbs.squeezer_count = cfg.k;
    gbs.r = cfg.r;
    gbs.unitary = gpnl::haar_unitary(cfg.m, haar_seed);
    std::vector<int> occ(std::size_t(cfg.m), 0);
    for (int i = 0; i < cfg.n; ++i) occ[std::size_t(i)] = 1;
    return gpnl::Gpnl1Instance::with_lemma1_hamiltonian(std::move(gbs),
                                                        gpnl::OccupationVector(occ));
}

void write_outputs(const ExperimentConfig& cfg, const json& result) {
    fs::create_directories(cfg.out);
    {
        std::ofstream f(fs::path(cfg.out) / "result.json");
        f << result.dump(2) << "\n";
    }
    {
        // volatile metadata kept out of the deterministic result file
        json meta;
        meta["timestamp_unix_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
        std::ofstream f(fs::path(cfg.out) / "meta.json");
        f << meta.dump(2) << "\n";
    }
    std::cout << result.dump(2) << std::endl;
}

json base_result(const ExperimentConfig& cfg) {
    json j;
    j["schema"] = 1;
    j["seed"] = cfg.seed;
    j["experiment"] = cfg.experiment;
    return j;
}

int run_gbs_prob(const ExperimentConfig& cfg) {
    const std::uint64_t haar_seed = gpnl::sub_seed(cfg.seed, "haar");
    gpnl::Gpnl1Instance inst = make_instance(cfg, haar_seed);
    const int cutoff = resolve_cutoff(cfg, cfg.k, cfg.r);
    gpnl::BasisPtr basis = gpnl::make_basis(cfg.m, cutoff);
    const gpnl::PreparedInstance prep = gpnl::prepare_instance(inst, basis);

    const double p_haf = gpnl::gbs_probability(inst.gbs, inst.s_star);
    const double p_fock =
        std::norm(prep.output.amplitudes[Eigen::Index(basis->index_of(inst.s_star))]);

    json result = base_result(cfg);
    result["instance"] = {{"m", cfg.m}, {"k", cfg.k}, {"r", cfg.r}, {"cutoff", cutoff},
                          {"haar_seed", haar_seed}};
    result["outcome"] = inst.s_star.occupations;
    result["p_hafnian"] = p_haf;
    result["p_fock"] = p_fock;
    result["abs_diff"] = std::abs(p_haf - p_fock);
    result["input_tail"] = prep.input_tail;
    result["pass"] = std::abs(p_haf - p_fock) <= 1e-8 * cfg.tolerance_scale;
    write_outputs(cfg, result);
    return result["pass"].get<bool>() ? 0 : 2;
}

int run_amplitude(const ExperimentConfig& cfg) {
    const std::uint64_t haar_seed = gpnl::sub_seed(cfg.seed, "haar");
    gpnl::Gpnl1Instance inst = make_instance(cfg, haar_seed);
    const int cutoff = resolve_cutoff(cfg, cfg.k, cfg.r);
    gpnl::BasisPtr basis = gpnl::make_basis(cfg.m, cutoff);
    const gpnl::PreparedInstance prep = gpnl::prepare_instance(inst, basis);

    const gpnl::Complex a = gpnl::amplitude(prep, inst.hamiltonian, cfg.t);
    const gpnl::EnergySpectrum spec = gpnl::spectrum(prep.output, inst.hamiltonian);
    const gpnl::Complex a_spectral = gpnl::amplitude_from_spectrum(spec, cfg.t);

    json result = base_result(cfg);
    result["t"] = cfg.t;
    result["re"] = a.real();
    result["im"] = a.imag();
    result["spectral_re"] = a_spectral.real();
    result["spectral_im"] = a_spectral.imag();
    result["route_difference"] = std::abs(a - a_spectral);
    result["input_tail"] = prep.input_tail;
    result["pass"] = std::abs(a - a_spectral) <= 1e-10 * cfg.tolerance_scale;
    write_outputs(cfg, result);
    return result["pass"].get<bool>() ? 0 : 2;
}

int run_reconstruct(const ExperimentConfig& cfg) {
    const std::uint64_t haar_seed = gpnl::sub_seed(cfg.seed, "haar");
    gpnl::Gpnl1Instance inst = make_instance(cfg, haar_seed);
    const int cutoff = resolve_cutoff(cfg, cfg.k, cfg.r);
    gpnl::BasisPtr basis = gpnl::make_basis(cfg.m, cutoff);

    gpnl::Theorem1Options options;
    options.c = cfg.c;
    options.threads = cfg.threads;
    options.amplitude_error_budget = 1e-9 * cfg.tolerance_scale;
    const gpnl::Theorem1Report report = gpnl::run_theorem1(inst, basis, options);

    if (cfg.csv) {
        const gpnl::PreparedInstance prep = gpnl::prepare_instance(inst, basis);
        const gpnl::AmplitudeSeries series =
            gpnl::amplitude_series(prep, inst.hamiltonian, report.j_max, cfg.threads);
        fs::create_directories(cfg.out);
        std::ofstream f(fs::path(cfg.out) / "amplitudes.csv");
        f.precision(17);
        f << "k,t_k,re_a,im_a\n";
        for (long long k = 0; k < series.j_max; ++k) {
            const double t = 2.0 * M_PI * double(k) / double(series.j_max);
            f << k << "," << t << "," << series.values[std::size_t(k)].real() << ","
              << series.values[std::size_t(k)].imag() << "\n";
        }
    }

    json result = base_result(cfg);
    result["instance"] = {{"m", cfg.m}, {"k", cfg.k}, {"n", cfg.n}, {"r", cfg.r},
                          {"cutoff", cutoff}, {"haar_seed", haar_seed}};
    result["J_max"] = report.j_max;
    result["Q"] = report.q;
    result["P_oracle"] = report.p_oracle;
    result["abs_err"] = report.abs_err;
    result["lemma2_bound"] = report.lemma2_bound;
    result["aliasing_mass"] = report.aliasing_mass;
    result["regime_ok"] = report.regime_ok;
    result["imag_residue"] = report.imag_residue;
    result["used_fallback_j_max"] = report.used_fallback_j_max;
    result["pass"] = report.pass;
    write_outputs(cfg, result);
    return report.pass ? 0 : 2;
}

int run_hadamard(const ExperimentConfig& cfg) {
    const std::uint64_t haar_seed = gpnl::sub_seed(cfg.seed, "haar");
    gpnl::Gpnl1Instance inst = make_instance(cfg, haar_seed);

    gpnl::Theorem2Options options;
    options.alpha = gpnl::Complex(cfg.alpha, 0.0);
    if (cfg.tail_threshold > 0.0) options.tail_threshold = cfg.tail_threshold;
    const gpnl::Theorem2Report report = gpnl::run_theorem2(inst, cfg.t, options);

    json result = base_result(cfg);
    result["p_real"] = report.p_real;
    result["p_imag"] = report.p_imag;
    result["recovered_re"] = report.recovered.real();
    result["recovered_im"] = report.recovered.imag();
    result["direct_re"] = report.direct.real();
    result["direct_im"] = report.direct.imag();
    result["abs_err"] = report.abs_err;
    result["conditioning"] = report.conditioning;
    result["pass"] = report.abs_err <= 1e-6 * cfg.tolerance_scale;
    write_outputs(cfg, result);
    return result["pass"].get<bool>() ? 0 : 2;
}

int run_verify_all(const ExperimentConfig& cfg) {
    json checks = json::array();
    bool all_pass = true;
    const double scale = cfg.tolerance_scale;
    auto record = [&](const std::string& name, bool pass, json details) {
        details["name"] = name;
        details["pass"] = pass;
        checks.push_back(std::move(details));
        all_pass = all_pass && pass;
        std::cerr << (pass ? "[pass] " : "[FAIL] ") << name << "\n";
    };

    // Hafnian oracle vs Fock engine on random desk-scale instances
    {
        std::mt19937_64 gen(gpnl::sub_seed(cfg.seed, "oracle-equivalence"));
        double worst = 0.0;
        int count = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const int m = 2 + int(gen() % 4); // 2..5
            const int k = 1 + int(gen() % std::uint64_t(std::min(3, m)));
            std::uniform_real_distribution<double> rdist(0.2, m >= 5 ? 0.35 : 0.45);
            const double r = rdist(gen);
            const int photons = std::min({4, m, 2 * (1 + int(gen() % 2))});
            gpnl::GbsInstance gbs;
            gbs.mode_count = m;
            gbs.squeezer_count = k;
            gbs.r = r;
            gbs.unitary = gpnl::haar_unitary(m, gen());
            std::vector<int> occ(std::size_t(m), 0);
            for (int i = 0; i < photons; ++i) occ[std::size_t(i)] = 1;
            std::shuffle(occ.begin(), occ.end(), gen);
            gpnl::OccupationVector outcome(occ);
            const double p_haf = gpnl::gbs_probability(gbs, outcome);
            gpnl::BasisPtr basis = gpnl::make_basis(m, gpnl::required_cutoff(k, r, 1e-10));
            gpnl::StateVector out = gpnl::apply_interferometer(
                gpnl::prepare_psi_in(k, r, basis), gbs.unitary);
            const double p_fock =
                std::norm(out.amplitudes[Eigen::Index(basis->index_of(outcome))]);
            worst = std::max(worst, std::abs(p_haf - p_fock));
            ++count;
        }
        record("oracle-equivalence", worst <= 1e-8 * scale,
               {{"instances", count}, {"worst_abs_diff", worst}});
    }

    // Photon-pair distribution vs the prepared squeezed state
    {
        double worst = 0.0;
        for (int k = 1; k <= 3; ++k) {
            for (double r : {0.2, 0.5, 1.0}) {
                gpnl::BasisPtr basis = gpnl::make_basis(k, 24);
                const gpnl::StateVector psi = gpnl::prepare_psi_in(k, r, basis);
                const std::vector<double> sector = gpnl::sector_norms(psi);
                for (int n = 0; n <= 10; ++n)
                    worst = std::max(worst, std::abs(sector[std::size_t(2 * n)] -
                                                     gpnl::pair_distribution(k, r, n)));
            }
        }
        record("pair-distribution", worst <= 1e-12 * scale, {{"worst_abs_diff", worst}});
    }

    // Lemma-1 non-degeneracy sweep + linear negative control
    {
        bool ok = true;
        for (int n = 1; n <= 4 && ok; ++n) {
            for (int m = n; m <= 6 && ok; ++m) {
                std::vector<int> occ(std::size_t(m), 0);
                for (int i = 0; i < n; ++i) occ[std::size_t(i)] = 1;
                const auto report = gpnl::verify_nondegeneracy(
                    gpnl::lemma1_hamiltonian(n, m), gpnl::OccupationVector(occ), n + 3);
                ok = ok && report.unique && report.target_energy == (long long)n * (n * n + 1);
            }
        }
        gpnl::DiagonalHamiltonian linear;
        linear.eta = Eigen::VectorXd::Zero(2);
        linear.mu = Eigen::VectorXd::Ones(2);
        linear.integer_spectrum = true;
        const auto negative = gpnl::verify_nondegeneracy(
            linear, gpnl::OccupationVector({1, 1}), 5);
        record("lemma1-nondegeneracy", ok && !negative.unique,
               {{"sweep_ok", ok}, {"negative_control_degenerate", !negative.unique}});
    }

    // Theorem-1 reconstruction, paper J_max and zero-aliasing fallback
    {
        gpnl::Gpnl1Instance inst = make_instance(cfg, gpnl::sub_seed(cfg.seed, "theorem1"));
        gpnl::BasisPtr basis =
            gpnl::make_basis(cfg.m, resolve_cutoff(cfg, cfg.k, cfg.r));
        gpnl::Theorem1Options options;
        options.c = cfg.c;
        options.threads = cfg.threads;
        options.amplitude_error_budget = 1e-9 * scale;
        const auto report = gpnl::run_theorem1(inst, basis, options);
        gpnl::Theorem1Options fallback = options;
        fallback.force_fallback_j_max = true;
        const auto fb = gpnl::run_theorem1(inst, basis, fallback);
        const bool fallback_exact = fb.abs_err <= 1e-10 * scale + fb.truncation_tail;
        record("theorem1-reconstruction", report.pass && fallback_exact,
               {{"J_max", report.j_max},
                {"abs_err", report.abs_err},
                {"aliasing_mass", report.aliasing_mass},
                {"fallback_J_max", fb.j_max},
                {"fallback_abs_err", fb.abs_err}});
    }

    // Lemma-2 Chernoff bound grid
    {
        bool ok = true;
        double worst_margin = 1e300;
        for (int k = 1; k <= 3; ++k)
            for (double r : {0.2, 0.5, 1.0})
                for (double n_star : {4.0, 8.0, 16.0, 32.0}) {
                    const auto rep = gpnl::chernoff_check(k, r, n_star);
                    ok = ok && rep.ok;
                    worst_margin = std::min(worst_margin, rep.bound - rep.exact_tail);
                }
        record("lemma2-chernoff", ok, {{"worst_margin", worst_margin}});
    }

    // Amplitude-noise propagation through the DFT reconstruction
    {
        gpnl::Gpnl1Instance inst = make_instance(cfg, gpnl::sub_seed(cfg.seed, "noise"));
        gpnl::BasisPtr basis = gpnl::make_basis(cfg.m, resolve_cutoff(cfg, cfg.k, cfg.r));
        const gpnl::PreparedInstance prep = gpnl::prepare_instance(inst, basis);
        gpnl::AmplitudeSeries series =
            gpnl::amplitude_series(prep, inst.hamiltonian, 256, cfg.threads);
        const double q0 = gpnl::reconstruct(series, inst.j_star).value;
        std::mt19937_64 gen(gpnl::sub_seed(cfg.seed, "noise-phases"));
        std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
        bool ok = true;
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            gpnl::AmplitudeSeries noisy = series;
            for (auto& v : noisy.values) v += std::polar(eps, phase(gen));
            const double q = gpnl::reconstruct(noisy, inst.j_star).value;
            ok = ok && std::abs(q - q0) <= eps * (1.0 + 1e-9);
        }
        record("noise-propagation", ok, {{"q", q0}});
    }

    // CV Hadamard round trip through Theorem 2
    {
        ExperimentConfig small = cfg;
        small.m = 3;
        small.k = 2;
        small.n = 2;
        small.r = 0.3;
        gpnl::Gpnl1Instance inst = make_instance(small, gpnl::sub_seed(cfg.seed, "hadamard"));
        gpnl::Theorem2Options options;
        options.alpha = gpnl::Complex(cfg.alpha, 0.0);
        options.noise_levels = {1e-6};
        const auto report = gpnl::run_theorem2(inst, cfg.t, options);
        bool noise_ok = true;
        for (const auto& np : report.noise) noise_ok = noise_ok && np.max_delta_re <= np.bound;
        record("hadamard-roundtrip", report.abs_err <= 1e-6 * scale && noise_ok,
               {{"abs_err", report.abs_err},
                {"recovered_re", report.recovered.real()},
                {"direct_re", report.direct.real()},
                {"noise_ok", noise_ok}});
    }

    json result = base_result(cfg);
    result["checks"] = checks;
    result["pass"] = all_pass;
    write_outputs(cfg, result);
    return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fock-space laboratory for Gaussian optics with few Kerr non-linearities"};
    app.require_subcommand(0, 1);

    std::string config_path;
    ExperimentConfig overrides;
    auto* opt_config = app.add_option("--config", config_path, "JSON experiment configuration");
    auto* opt_seed = app.add_option("--seed", overrides.seed, "master 64-bit seed");
    auto* opt_out = app.add_option("--out", overrides.out, "output directory");
    auto* opt_scale =
        app.add_option("--tolerance-scale", overrides.tolerance_scale, "scale factor on tolerances");
    auto* opt_threads = app.add_option("--threads", overrides.threads, "worker threads");
    (void)opt_config;

    std::vector<std::string> kinds = {"gbs-prob", "amplitude", "reconstruct", "hadamard",
                                      "verify-all"};
    std::vector<CLI::App*> subs;
    for (const auto& kind : kinds) {
        CLI::App* sub = app.add_subcommand(kind);
        sub->fallthrough();
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        for (std::size_t i = 0; i < kinds.size(); ++i)
            if (subs[i]->parsed()) cfg.experiment = kinds[i];
        apply_env_overrides(cfg);
        if (opt_seed->count() > 0) cfg.seed = overrides.seed;
        if (opt_out->count() > 0) cfg.out = overrides.out;
        if (opt_scale->count() > 0) cfg.tolerance_scale = overrides.tolerance_scale;
        if (opt_threads->count() > 0) cfg.threads = overrides.threads;

        if (cfg.experiment == "gbs-prob") return run_gbs_prob(cfg);
        if (cfg.experiment == "amplitude") return run_amplitude(cfg);
        if (cfg.experiment == "reconstruct") return run_reconstruct(cfg);
        if (cfg.experiment == "hadamard") return run_hadamard(cfg);
        if (cfg.experiment == "verify-all") return run_verify_all(cfg);
        std::cerr << "unknown experiment kind: " << cfg.experiment << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
