#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "circdens/coverage.hpp"
#include "circdens/sieve.hpp"

namespace circdens {

enum class EstimatorVariant {
    //! (psi_hat)_+/(sigma_hat v n^{-1/2}); always defined.
    Thresholded,
    //! (psi_hat)_+/sigma_hat where sigma_hat > 0, else 0. For known
    //! deterministic windows; bounded where the thresholded form blows up.
    DeterministicWindow,
};

//! The quotient density estimator built from a sieve fit and the empirical
//! coverage. Evaluation is nonnegative everywhere.
class DensityEstimate {
public:
    DensityEstimate(SieveFit fit, CoverageFunction coverage,
                    EstimatorVariant variant = EstimatorVariant::Thresholded)
        : fit_(std::move(fit)),
          coverage_(std::move(coverage)),
          variant_(variant),
          threshold_(1.0 / std::sqrt(static_cast<double>(fit_.n))) {}

    double operator()(Angle x) const {
        const double psi = std::max(psi_hat_eval(fit_, x), 0.0);
        if (variant_ == EstimatorVariant::Thresholded) {
            return psi / std::max(coverage_(x), threshold_);
        }
        const double sigma = coverage_(x);
        return sigma > 0.0 ? psi / sigma : 0.0;
    }

    //! The quotient before the positive part. Parameter recovery integrates
    //! this curve; clipping first inflates the total mass and biases the
    //! recovered concentration downward.
    double signed_value(Angle x) const {
        const double psi = psi_hat_eval(fit_, x);
        if (variant_ == EstimatorVariant::Thresholded) {
            return psi / std::max(coverage_(x), threshold_);
        }
        const double sigma = coverage_(x);
        return sigma > 0.0 ? psi / sigma : 0.0;
    }

    const SieveFit& fit() const { return fit_; }
    const CoverageFunction& coverage() const { return coverage_; }
    EstimatorVariant variant() const { return variant_; }
    double threshold() const { return threshold_; }

private:
    SieveFit fit_;
    CoverageFunction coverage_;
    EstimatorVariant variant_;
    double threshold_;
};

//! Convenience driver: fit, select, build coverage, assemble the estimator.
inline DensityEstimate estimate_density(
    const CensoredSample& sample, const FitOptions& options = {},
    EstimatorVariant variant = EstimatorVariant::Thresholded) {
    return DensityEstimate(fit_sieve(sample, options), build_coverage(sample),
                           variant);
}

}  // namespace circdens
