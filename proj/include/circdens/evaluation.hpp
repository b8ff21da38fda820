#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "circdens/bessel.hpp"
#include "circdens/censoring.hpp"
#include "circdens/estimator.hpp"
#include "circdens/parallel.hpp"

namespace circdens {

//! Equispaced evaluation grid on [0, 2*pi). The rectangle rule on this grid
//! is spectrally accurate for smooth periodic integrands.
struct GridSpec {
    std::size_t points = 1024;

    GridSpec() = default;
    explicit GridSpec(std::size_t p) : points(p) {
        if (points < 16) {
            throw std::invalid_argument("GridSpec: need at least 16 points");
        }
    }

    double step() const { return two_pi / static_cast<double>(points); }
    double theta(std::size_t k) const {
        return two_pi * static_cast<double>(k) / static_cast<double>(points);
    }
};

//! Integrated squared difference of two curves over the grid.
template <class F, class G>
double ise(F&& f_hat, G&& f_true, const GridSpec& grid) {
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.points; ++k) {
        const double t = grid.theta(k);
        const double d = f_hat(t) - f_true(t);
        acc += d * d;
    }
    return acc * grid.step();
}

struct MiseReport {
    std::string label;
    std::size_t n = 0;
    std::size_t replications = 0;
    double mise = 0.0;
    double mise_stderr = 0.0;
    double censored_rate_mean = 0.0;
    double window_length_mean = 0.0;      // mean |[L, U]|
    double complement_length_mean = 0.0;  // mean |[U, L]|
    std::map<std::size_t, std::size_t> m_hat_distribution;
    std::size_t calibration_fallbacks = 0;

    std::size_t m_hat_mode() const {
        std::size_t mode = 0, best = 0;
        for (const auto& [m, count] : m_hat_distribution) {
            if (count > best) { best = count; mode = m; }
        }
        return mode;
    }
};

struct ReplicationOutcome {
    double ise = 0.0;
    double censored_rate = 0.0;
    double window_length_mean = 0.0;
    double complement_length_mean = 0.0;
    std::size_t m_hat = 1;
    bool calibration_fell_back = false;
};

//! One full pipeline pass on a fresh sample: generate, fit, select, build
//! the quotient, integrate the squared error against the true density.
template <class FTrue>
ReplicationOutcome run_replication(const CircularDistribution& dist,
                                   const CensoringModel& model, std::size_t n,
                                   const GridSpec& grid, std::uint64_t seed,
                                   const FitOptions& options,
                                   EstimatorVariant variant, FTrue&& f_true) {
    Rng rng(seed);
    const CensoredSample sample = generate_sample(dist, model, n, rng);

    ReplicationOutcome out;
    double window_sum = 0.0;
    std::size_t censored = 0;
    for (const auto& obs : sample.observations) {
        window_sum += arc_length(obs.window());
        if (!obs.delta) ++censored;
    }
    const double dn = static_cast<double>(n);
    out.censored_rate = static_cast<double>(censored) / dn;
    out.window_length_mean = window_sum / dn;
    out.complement_length_mean = two_pi - out.window_length_mean;

    const DensityEstimate estimate = estimate_density(sample, options, variant);
    out.m_hat = estimate.fit().m_selected;
    out.calibration_fell_back = !options.kappa && !estimate.fit().kappa_calibrated;
    out.ise = ise([&](double t) { return estimate(Angle::wrap(t)); },
                  std::forward<FTrue>(f_true), grid);
    return out;
}

//! Monte Carlo MISE over N replications. Replication r always runs with the
//! rng stream derive_seed(seed, r), and aggregation visits r in order, so
//! parallel and serial runs produce the same bits.
inline MiseReport mise_monte_carlo(const CircularDistribution& dist,
                                   const CensoringModel& model, std::size_t n,
                                   std::size_t replications,
                                   const GridSpec& grid, std::uint64_t seed,
                                   const FitOptions& options = {},
                                   EstimatorVariant variant =
                                       EstimatorVariant::Thresholded,
                                   std::string label = {}) {
    if (replications < 2) {
        throw std::invalid_argument("mise_monte_carlo: need N >= 2");
    }
    std::vector<ReplicationOutcome> outcomes(replications);
    parallel_for(replications, [&](std::size_t r) {
        outcomes[r] = run_replication(
            dist, model, n, grid, derive_seed(seed, r), options, variant,
            [&](double t) { return density(dist, Angle::wrap(t)); });
    });

    MiseReport report;
    report.label = std::move(label);
    report.n = n;
    report.replications = replications;
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& out : outcomes) {
        sum += out.ise;
        sum_sq += out.ise * out.ise;
        report.censored_rate_mean += out.censored_rate;
        report.window_length_mean += out.window_length_mean;
        report.complement_length_mean += out.complement_length_mean;
        ++report.m_hat_distribution[out.m_hat];
        if (out.calibration_fell_back) ++report.calibration_fallbacks;
    }
    const double dn = static_cast<double>(replications);
    report.mise = sum / dn;
    const double var =
        std::max(0.0, (sum_sq - sum * sum / dn) / (dn - 1.0));
    report.mise_stderr = std::sqrt(var / dn);
    report.censored_rate_mean /= dn;
    report.window_length_mean /= dn;
    report.complement_length_mean /= dn;
    return report;
}

struct VonMisesRecovery {
    Angle mu_hat;
    double kappa_hat = 0.0;
    double resultant_length = 0.0;
    bool zero_resultant = false;
    bool saturated = false;  // resultant at or past 1; kappa clamped to 500
};

inline constexpr double kKappaSaturation = 500.0;

//! Method-of-moments von Mises parameters of a curve: first trigonometric
//! moment over total mass, concentration by inverting I1/I0.
template <class F>
VonMisesRecovery recover_vonmises(F&& curve, const GridSpec& grid) {
    double mass = 0.0, c = 0.0, s = 0.0;
    for (std::size_t k = 0; k < grid.points; ++k) {
        const double t = grid.theta(k);
        const double v = curve(t);
        mass += v;
        c += std::cos(t) * v;
        s += std::sin(t) * v;
    }
    const double h = grid.step();
    mass *= h; c *= h; s *= h;
    if (mass == 0.0) {
        throw std::invalid_argument("recover_vonmises: curve has zero mass");
    }

    VonMisesRecovery rec;
    rec.resultant_length = std::hypot(c, s) / mass;
    if (rec.resultant_length <= 1e-12) {
        rec.zero_resultant = true;
        rec.mu_hat = Angle::wrap(0.0);
        rec.kappa_hat = 0.0;
        return rec;
    }
    rec.mu_hat = Angle::wrap(std::atan2(s, c));
    if (rec.resultant_length >= 1.0 ||
        rec.resultant_length >= bessel_ratio(kKappaSaturation)) {
        rec.saturated = true;
        rec.kappa_hat = kKappaSaturation;
        return rec;
    }
    rec.kappa_hat = invert_bessel_ratio(rec.resultant_length);
    return rec;
}

struct RecoveryReport {
    double concentration = 0.0;  // true k
    double alpha = 0.0;          // censoring arc length
    std::size_t n = 0;
    std::size_t replications = 0;
    Angle mu_hat_mean;           // circular mean of the per-replication mu_hat
    double kappa_hat_mean = 0.0;
    std::size_t saturated_count = 0;
};

//! Parameter-recovery study cell: X ~ VM(2, k), L uniform, U = L - alpha.
//! Each replication estimates the density adaptively and reads (mu, k) off
//! the signed quotient's trigonometric moments. Deterministic given seed and
//! independent of thread count.
inline RecoveryReport recovery_monte_carlo(double concentration, double alpha,
                                           std::size_t n,
                                           std::size_t replications,
                                           const GridSpec& grid,
                                           std::uint64_t seed,
                                           const FitOptions& options = {}) {
    if (replications < 2) {
        throw std::invalid_argument("recovery_monte_carlo: need N >= 2");
    }
    const CircularDistribution dist = VonMises{Angle::wrap(2.0), concentration};
    const CensoringModel model = UniformAnchorFixedArc{alpha};

    std::vector<VonMisesRecovery> recs(replications);
    parallel_for(replications, [&](std::size_t r) {
        Rng rng(derive_seed(seed, r));
        const CensoredSample sample = generate_sample(dist, model, n, rng);
        const DensityEstimate estimate = estimate_density(sample, options);
        recs[r] = recover_vonmises(
            [&](double t) { return estimate.signed_value(Angle::wrap(t)); },
            grid);
    });

    RecoveryReport report;
    report.concentration = concentration;
    report.alpha = alpha;
    report.n = n;
    report.replications = replications;
    double c = 0.0, s = 0.0, ksum = 0.0;
    for (const auto& rec : recs) {
        c += std::cos(rec.mu_hat.radians());
        s += std::sin(rec.mu_hat.radians());
        ksum += rec.kappa_hat;
        if (rec.saturated) ++report.saturated_count;
    }
    report.mu_hat_mean = Angle::wrap(std::atan2(s, c));
    report.kappa_hat_mean = ksum / static_cast<double>(replications);
    return report;
}

//! Least-squares slope of log(mise) against log(n); nonpositive mise points
//! are excluded. Needs at least three usable points.
inline double rate_diagnostic(const std::vector<std::pair<double, double>>&
                                  n_and_mise) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, mise] : n_and_mise) {
        if (mise > 0.0 && n > 0.0) pts.emplace_back(std::log(n), std::log(mise));
    }
    if (pts.size() < 3) {
        throw std::invalid_argument(
            "rate_diagnostic: need at least 3 positive MISE points");
    }
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) { mx += x; my += y; }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return sxy / sxx;
}

}  // namespace circdens
