#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "circdens/censoring.hpp"
#include "circdens/trig_basis.hpp"

namespace circdens {

inline constexpr double kDefaultKappa = 16.0;

//! Empirical basis coefficients a_hat[lambda] = (1/n) sum_i Delta_i *
//! phi_lambda(x'_i) for lambda in {0, ..., 2*m_max}. Censored observations
//! contribute nothing. cos(j x) and sin(j x) advance through the Chebyshev
//! recurrence t_{j+1} = 2 cos(x) t_j - t_{j-1}, one pass per observation.
//!
//! Coefficients are nested: the first 2m+1 entries are identical whatever
//! m_max >= m was requested.
inline std::vector<double> fit_coefficients(const CensoredSample& sample,
                                            std::size_t m_max) {
    if (sample.n() == 0) {
        throw std::invalid_argument("fit_coefficients: empty sample");
    }
    if (m_max < 1) {
        throw std::invalid_argument("fit_coefficients: m_max must be >= 1");
    }
    std::vector<double> sums(sieve_dimension(m_max), 0.0);
    for (const auto& obs : sample.observations) {
        if (!obs.delta) continue;
        const double x = obs.x_prime->radians();
        const double c1 = std::cos(x);
        const double s1 = std::sin(x);
        sums[0] += kPhi0;
        double c_prev = 1.0, s_prev = 0.0;  // j = 0
        double c = c1, s = s1;              // j = 1
        for (std::size_t j = 1; j <= m_max; ++j) {
            sums[2 * j - 1] += c * kInvSqrtPi;
            sums[2 * j] += s * kInvSqrtPi;
            const double c_next = 2.0 * c1 * c - c_prev;
            const double s_next = 2.0 * c1 * s - s_prev;
            c_prev = c; s_prev = s;
            c = c_next; s = s_next;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(sample.n());
    for (double& v : sums) v *= inv_n;
    return sums;
}

//! Contrast of the order-m projection: gamma_n(psi_hat_m) = -sum of the
//! first 2m+1 squared coefficients (Parseval). Nonincreasing in m.
inline double contrast_value(std::span<const double> a_hat, std::size_t m) {
    const std::size_t dim = sieve_dimension(m);
    if (dim > a_hat.size()) {
        throw std::invalid_argument("contrast_value: m exceeds m_max");
    }
    double sq = 0.0;
    for (std::size_t lambda = 0; lambda < dim; ++lambda) {
        sq += a_hat[lambda] * a_hat[lambda];
    }
    return -sq;
}

//! Data-driven penalty kappa * phi_0^2 * D_m / n * delta_bar
//!                  = kappa * (2m+1) * delta_bar / (2*pi*n).
inline double penalty_value(std::size_t m, std::size_t n, double delta_bar,
                            double kappa) {
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("penalty_value: kappa must be > 0");
    }
    if (!(delta_bar >= 0.0 && delta_bar <= 1.0 + 1e-12)) {
        throw std::invalid_argument("penalty_value: delta_bar outside [0,1]");
    }
    return kappa * static_cast<double>(sieve_dimension(m)) * delta_bar /
           (two_pi * static_cast<double>(n));
}

namespace detail {

//! argmin over m in {1..m_max} of contrast(m) + penalty(m); ties go to the
//! smaller m. Contrast accumulates by prefix sums, so the scan is O(D_max).
inline std::size_t select_order(std::span<const double> a_hat, std::size_t n,
                                double delta_bar, double kappa,
                                std::size_t m_max) {
    double sq = a_hat[0] * a_hat[0];
    std::size_t best_m = 0;
    double best_total = 0.0;
    for (std::size_t m = 1; m <= m_max; ++m) {
        sq += a_hat[2 * m - 1] * a_hat[2 * m - 1];
        sq += a_hat[2 * m] * a_hat[2 * m];
        const double total = -sq + penalty_value(m, n, delta_bar, kappa);
        if (best_m == 0 || total < best_total) {
            best_m = m;
            best_total = total;
        }
    }
    return best_m;
}

}  // namespace detail

//! Penalized model selection over M_n = {1, ..., min(m_max, floor(n/2)-1)}.
inline std::size_t select_model(std::span<const double> a_hat, std::size_t n,
                                double delta_bar, double kappa,
                                std::size_t m_max) {
    if (n < 4) {
        throw std::invalid_argument("select_model: sample too small (n < 4)");
    }
    m_max = std::min(m_max, max_order(n));
    if (m_max < 1) {
        throw std::invalid_argument("select_model: empty model set");
    }
    if (sieve_dimension(m_max) > a_hat.size()) {
        throw std::invalid_argument("select_model: not enough coefficients");
    }
    return detail::select_order(a_hat, n, delta_bar, kappa, m_max);
}

//! Penalty-constant calibration by dimension jump. The selected dimension
//! D(kappa) is scanned on a geometric grid over [2^-4, 2^8]; the constant is
//! twice the grid point where the largest drop in D(kappa) lands. Returns
//! nothing when the selection path is flat (no signal to calibrate on).
inline std::optional<double> calibrate_kappa(std::span<const double> a_hat,
                                             std::size_t n, double delta_bar,
                                             std::size_t m_max) {
    if (n < 4) return std::nullopt;
    m_max = std::min(m_max, max_order(n));
    if (m_max < 1) return std::nullopt;

    constexpr int kPointsPerOctave = 16;
    constexpr int kOctaves = 12;  // 2^-4 .. 2^8
    constexpr int kGridSize = kPointsPerOctave * kOctaves + 1;

    std::vector<double> grid(kGridSize);
    std::vector<std::size_t> dim(kGridSize);
    for (int i = 0; i < kGridSize; ++i) {
        grid[i] = std::exp2(-4.0 + static_cast<double>(i) / kPointsPerOctave);
        dim[i] = sieve_dimension(
            detail::select_order(a_hat, n, delta_bar, grid[i], m_max));
    }

    std::size_t best_drop = 0;
    int jump_index = -1;
    for (int i = 0; i + 1 < kGridSize; ++i) {
        if (dim[i] > dim[i + 1] && dim[i] - dim[i + 1] > best_drop) {
            best_drop = dim[i] - dim[i + 1];
            jump_index = i + 1;
        }
    }
    if (jump_index < 0) return std::nullopt;
    return 2.0 * grid[jump_index];
}

//! A fitted trigonometric sieve: every coefficient up to m_max, the full
//! selection trace, and the chosen order.
struct SieveFit {
    std::size_t m_max = 0;
    std::vector<double> a_hat;       // size 2*m_max + 1
    std::size_t n = 0;
    double delta_bar = 0.0;          // sqrt(2*pi) * a_hat[0]
    std::vector<double> contrast;    // index m-1, m in {1..m_max}
    std::vector<double> penalty;     // same indexing
    double kappa = kDefaultKappa;
    bool kappa_calibrated = false;   // true when the dimension jump succeeded
    std::size_t m_selected = 1;
};

struct FitOptions {
    std::optional<std::size_t> m_max;  // default: floor(n/2) - 1
    std::optional<double> kappa;       // default: calibrate, fall back to 16
};

//! Full fit: coefficients, contrast/penalty traces, penalty constant
//! (fixed or calibrated) and the selected order.
inline SieveFit fit_sieve(const CensoredSample& sample,
                          const FitOptions& options = {}) {
    const std::size_t n = sample.n();
    if (n < 4) {
        throw std::invalid_argument("fit_sieve: sample too small (n < 4)");
    }
    std::size_t m_max = max_order(n);
    if (options.m_max) m_max = std::min(m_max, *options.m_max);
    if (m_max < 1) {
        throw std::invalid_argument("fit_sieve: empty model set");
    }

    SieveFit fit;
    fit.n = n;
    fit.m_max = m_max;
    fit.a_hat = fit_coefficients(sample, m_max);
    // delta_bar recovered from the constant coefficient; the two carry the
    // same information and this keeps sqrt(2*pi)*a_hat[0] == delta_bar exact.
    fit.delta_bar = std::sqrt(two_pi) * fit.a_hat[0];

    if (options.kappa) {
        fit.kappa = *options.kappa;
        fit.kappa_calibrated = false;
    } else {
        const auto calibrated =
            calibrate_kappa(fit.a_hat, n, fit.delta_bar, m_max);
        fit.kappa = calibrated.value_or(kDefaultKappa);
        fit.kappa_calibrated = calibrated.has_value();
    }

    fit.contrast.resize(m_max);
    fit.penalty.resize(m_max);
    double sq = fit.a_hat[0] * fit.a_hat[0];
    for (std::size_t m = 1; m <= m_max; ++m) {
        sq += fit.a_hat[2 * m - 1] * fit.a_hat[2 * m - 1];
        sq += fit.a_hat[2 * m] * fit.a_hat[2 * m];
        fit.contrast[m - 1] = -sq;
        fit.penalty[m - 1] = penalty_value(m, n, fit.delta_bar, fit.kappa);
    }
    fit.m_selected = select_model(fit.a_hat, n, fit.delta_bar, fit.kappa, m_max);
    return fit;
}

//! Evaluate sum_{lambda <= 2m} a_hat[lambda] * phi_lambda(x).
inline double psi_eval(std::span<const double> a_hat, std::size_t m, Angle x) {
    if (sieve_dimension(m) > a_hat.size()) {
        throw std::invalid_argument("psi_eval: m exceeds coefficient count");
    }
    double value = a_hat[0] * kPhi0;
    const double c1 = std::cos(x.radians());
    const double s1 = std::sin(x.radians());
    double c_prev = 1.0, s_prev = 0.0;
    double c = c1, s = s1;
    for (std::size_t j = 1; j <= m; ++j) {
        value += (a_hat[2 * j - 1] * c + a_hat[2 * j] * s) * kInvSqrtPi;
        const double c_next = 2.0 * c1 * c - c_prev;
        const double s_next = 2.0 * c1 * s - s_prev;
        c_prev = c; s_prev = s;
        c = c_next; s = s_next;
    }
    return value;
}

//! psi_hat_{m_selected}(x); may be negative.
inline double psi_hat_eval(const SieveFit& fit, Angle x) {
    return psi_eval(fit.a_hat, fit.m_selected, x);
}

}  // namespace circdens
