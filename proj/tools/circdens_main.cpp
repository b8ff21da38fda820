// Command-line surface: simulate | estimate | benchmark | compare.
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "circdens/circdens.hpp"

namespace fs = std::filesystem;
using namespace circdens;

namespace {

constexpr int kFormatVersion = 1;

struct FlagOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> grid;
    std::optional<std::string> kappa;
    std::optional<std::string> variant;
    std::optional<std::size_t> m_max;
};

void apply_common(const FlagOverrides& flags, CommonConfig& common) {
    if (flags.seed) common.seed = *flags.seed;
    if (flags.out) common.out = *flags.out;
    if (flags.grid) {
        if (*flags.grid < 16) throw config_error("grid must be at least 16");
        common.grid_points = *flags.grid;
    }
}

std::optional<double> kappa_from_flag(const std::string& text) {
    if (text == "auto") return std::nullopt;
    const double value = parse_number_expr(text);
    if (!(value > 0.0)) throw config_error("kappa must be > 0 or 'auto'");
    return value;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path);
    if (!out) throw data_error("cannot open for writing: " + path.string());
    return out;
}

const char* variant_name(EstimatorVariant variant) {
    return variant == EstimatorVariant::Thresholded ? "threshold" : "window";
}

int run_simulate(const FlagOverrides& flags) {
    auto cfg = load_simulate_config(ConfigFile::load(flags.config_path));
    apply_common(flags, cfg.common);

    Rng rng(derive_seed(cfg.common.seed, 0));
    const CensoredSample sample = generate_sample(cfg.dist, cfg.censor, cfg.n, rng);

    auto out = open_output(cfg.common.out, "sample.csv");
    write_sample(sample, out);

    std::size_t censored = 0;
    double window_sum = 0.0;
    for (const auto& obs : sample.observations) {
        if (!obs.delta) ++censored;
        window_sum += arc_length(obs.window());
    }
    const double dn = static_cast<double>(sample.n());
    const double window_mean = window_sum / dn;
    std::cout << "simulate: n=" << sample.n()
              << " censored_pct=" << format_double(100.0 * censored / dn)
              << " window_len=" << format_double(window_mean)
              << " complement_len=" << format_double(two_pi - window_mean)
              << '\n';
    return 0;
}

int run_estimate(const FlagOverrides& flags, const std::string& sample_arg) {
    auto cfg = load_estimate_config(ConfigFile::load(flags.config_path));
    apply_common(flags, cfg.common);
    if (!sample_arg.empty()) cfg.sample = sample_arg;
    if (flags.kappa) cfg.kappa = kappa_from_flag(*flags.kappa);
    if (flags.variant) {
        cfg.variant = *flags.variant == "window"
                          ? EstimatorVariant::DeterministicWindow
                          : EstimatorVariant::Thresholded;
    }
    if (flags.m_max) cfg.m_max = *flags.m_max;
    if (cfg.sample.empty()) {
        throw config_error("estimate needs a sample path (config key 'sample')");
    }

    const CensoredSample sample = read_sample_file(cfg.sample);
    if (sample.n() < 4) {
        throw data_error("sample too small: the model set is empty for n < 4");
    }
    FitOptions options{cfg.m_max, cfg.kappa};
    const DensityEstimate estimate = estimate_density(sample, options, cfg.variant);
    const SieveFit& fit = estimate.fit();
    if (!cfg.kappa && !fit.kappa_calibrated) {
        std::cerr << "warning: dimension-jump calibration found no jump; "
                     "using kappa = " << format_double(fit.kappa) << '\n';
    }

    auto coef = open_output(cfg.common.out, "coefficients.csv");
    coef << "lambda,a_hat\n";
    for (std::size_t lambda = 0; lambda < sieve_dimension(fit.m_selected);
         ++lambda) {
        coef << lambda << ',' << format_double(fit.a_hat[lambda]) << '\n';
    }

    auto sel = open_output(cfg.common.out, "selection.csv");
    sel << "m,contrast,penalty,total\n";
    for (std::size_t m = 1; m <= fit.m_max; ++m) {
        const double contrast = fit.contrast[m - 1];
        const double penalty = fit.penalty[m - 1];
        sel << m << ',' << format_double(contrast) << ','
            << format_double(penalty) << ','
            << format_double(contrast + penalty) << '\n';
    }

    const GridSpec grid(cfg.common.grid_points);
    auto curve = open_output(cfg.common.out, "curve.csv");
    curve << (cfg.true_dist ? "theta,f_hat,f_true" : "theta,f_hat") << '\n';
    for (std::size_t k = 0; k < grid.points; ++k) {
        const double t = grid.theta(k);
        curve << format_double(t) << ','
              << format_double(estimate(Angle::wrap(t)));
        if (cfg.true_dist) {
            curve << ',' << format_double(density(*cfg.true_dist, Angle::wrap(t)));
        }
        curve << '\n';
    }

    auto manifest = open_output(cfg.common.out, "manifest.txt");
    manifest << "format_version = " << kFormatVersion << '\n'
             << "n = " << fit.n << '\n'
             << "delta_bar = " << format_double(fit.delta_bar) << '\n'
             << "kappa = " << format_double(fit.kappa) << '\n'
             << "kappa_mode = " << (cfg.kappa ? "fixed" : "auto") << '\n'
             << "kappa_calibrated = " << (fit.kappa_calibrated ? 1 : 0) << '\n'
             << "m_max = " << fit.m_max << '\n'
             << "m_hat = " << fit.m_selected << '\n'
             << "variant = " << variant_name(estimate.variant()) << '\n'
             << "grid = " << grid.points << '\n';

    std::cout << "estimate: n=" << fit.n << " m_hat=" << fit.m_selected
              << " kappa=" << format_double(fit.kappa)
              << " delta_bar=" << format_double(fit.delta_bar) << '\n';
    return 0;
}

int run_benchmark(const FlagOverrides& flags) {
    auto cfg = load_benchmark_config(ConfigFile::load(flags.config_path));
    apply_common(flags, cfg.common);
    if (flags.kappa) cfg.kappa = kappa_from_flag(*flags.kappa);
    if (flags.variant) {
        cfg.variant = *flags.variant == "window"
                          ? EstimatorVariant::DeterministicWindow
                          : EstimatorVariant::Thresholded;
    }
    FitOptions options{std::nullopt, cfg.kappa};
    if (flags.m_max) options.m_max = *flags.m_max;

    const GridSpec grid(cfg.common.grid_points);
    auto out = open_output(cfg.common.out, "benchmark.csv");
    out << "model,n,N,mise,stderr,censored_pct,window_len,complement_len,"
           "m_hat_mode\n";
    std::size_t cell = 0;
    for (int model_id : cfg.models) {
        const ModelPreset preset = model_preset(model_id);
        for (std::size_t n : cfg.sizes) {
            const MiseReport report = mise_monte_carlo(
                preset.dist, preset.censor, n, cfg.replications, grid,
                derive_seed(cfg.common.seed, cell++), options, cfg.variant,
                "model" + std::to_string(model_id));
            out << model_id << ',' << n << ',' << report.replications << ','
                << format_double(report.mise) << ','
                << format_double(report.mise_stderr) << ','
                << format_double(100.0 * report.censored_rate_mean) << ','
                << format_double(report.window_length_mean) << ','
                << format_double(report.complement_length_mean) << ','
                << report.m_hat_mode() << '\n';
            std::cout << "benchmark: model=" << model_id << " n=" << n
                      << " mise=" << format_double(report.mise) << '\n';
        }
    }
    return 0;
}

//! Published reference values for the recovery study, by (k, alpha).
bool reference_values(double k, double alpha, double& mu_ref, double& k_ref) {
    const auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
    if (near(k, 1.0) && near(alpha, 1.0)) { mu_ref = 1.985; k_ref = 1.047; return true; }
    if (near(k, 1.0) && near(alpha, 3.0)) { mu_ref = 2.006; k_ref = 1.037; return true; }
    if (near(k, 3.0) && near(alpha, 1.0)) { mu_ref = 1.993; k_ref = 3.110; return true; }
    if (near(k, 3.0) && near(alpha, 3.0)) { mu_ref = 2.008; k_ref = 3.083; return true; }
    return false;
}

int run_compare(const FlagOverrides& flags) {
    auto cfg = load_compare_config(ConfigFile::load(flags.config_path));
    apply_common(flags, cfg.common);
    if (flags.kappa) cfg.kappa = kappa_from_flag(*flags.kappa);
    FitOptions options{std::nullopt, cfg.kappa};
    if (flags.m_max) options.m_max = *flags.m_max;

    const GridSpec grid(cfg.common.grid_points);
    auto out = open_output(cfg.common.out, "compare.csv");
    out << "k,alpha,n,N,mu_tilde,mu_hat,k_tilde,k_hat\n";
    std::size_t cell = 0;
    for (double k : cfg.concentrations) {
        for (double alpha : cfg.alphas) {
            const RecoveryReport report = recovery_monte_carlo(
                k, alpha, cfg.n, cfg.replications, grid,
                derive_seed(cfg.common.seed, cell++), options);
            double mu_ref = 0.0, k_ref = 0.0;
            const bool have_ref = reference_values(k, alpha, mu_ref, k_ref);
            out << format_double(k) << ',' << format_double(alpha) << ','
                << report.n << ',' << report.replications << ','
                << (have_ref ? format_double(mu_ref) : "NA") << ','
                << format_double(report.mu_hat_mean.radians()) << ','
                << (have_ref ? format_double(k_ref) : "NA") << ','
                << format_double(report.kappa_hat_mean) << '\n';
            std::cout << "compare: k=" << format_double(k)
                      << " alpha=" << format_double(alpha)
                      << " mu_hat=" << format_double(report.mu_hat_mean.radians())
                      << " k_hat=" << format_double(report.kappa_hat_mean)
                      << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"density estimation for arc-censored circular data"};
    app.require_subcommand(1);

    FlagOverrides flags;
    std::string sample_arg;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path, "config file path")
            ->required();
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { flags.seed = v; }, "rng seed");
        cmd->add_option_function<std::string>(
            "--out", [&](const std::string& v) { flags.out = v; },
            "output directory");
        cmd->add_option_function<std::size_t>(
            "--grid", [&](std::size_t v) { flags.grid = v; },
            "evaluation grid points");
    };
    const auto add_estimation = [&](CLI::App* cmd) {
        cmd->add_option_function<std::string>(
            "--kappa", [&](const std::string& v) { flags.kappa = v; },
            "penalty constant: 'auto' or a positive number");
        cmd->add_option_function<std::string>(
            "--variant", [&](const std::string& v) { flags.variant = v; },
            "estimator variant: threshold or window")
            ->check(CLI::IsMember({"threshold", "window"}));
        cmd->add_option_function<std::size_t>(
            "--m-max", [&](std::size_t v) { flags.m_max = v; },
            "cap on the model order");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "draw a censored sample");
    add_common(simulate);

    CLI::App* estimate =
        app.add_subcommand("estimate", "fit the density to a sample file");
    add_common(estimate);
    add_estimation(estimate);
    estimate->add_option("sample", sample_arg, "sample file (overrides config)");

    CLI::App* benchmark =
        app.add_subcommand("benchmark", "Monte Carlo MISE table");
    add_common(benchmark);
    add_estimation(benchmark);

    CLI::App* compare =
        app.add_subcommand("compare", "von Mises parameter recovery table");
    add_common(compare);
    add_estimation(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(flags);
        if (estimate->parsed()) return run_estimate(flags, sample_arg);
        if (benchmark->parsed()) return run_benchmark(flags);
        return run_compare(flags);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
